#include "fatigue/io.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace fatigue {

namespace {

std::string g17(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

std::string trace_csv(const EvolutionTrace& trace) {
  std::string out(kTraceCsvHeader);
  out += '\n';
  const auto row = [&](int i) {
    const Vector& alpha = trace.alpha(i);
    const Vector& V = trace.V(i);
    const EnergyBreakdown& e = trace.energy(i);
    const double min_alpha = alpha.size() ? alpha.minCoeff() : 0.0;
    const double max_v = V.size() ? V.maxCoeff() : 0.0;
    if (i == 0) {
      out += fmt::format("0,{},{},{},0,0,0,0,{},{},0,0,0,0,0,0\n", g17(trace.time(0)), g17(e.elastic),
                         g17(e.gradient), g17(min_alpha), g17(max_v));
      return;
    }
    const StepRecord& r = trace.record(i);
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", i, g17(r.t), g17(e.elastic),
                       g17(e.gradient), g17(r.diss_inc), g17(r.visc_inc), g17(r.work_inc),
                       g17(r.balance_residual_running), g17(min_alpha), g17(max_v), g17(r.kkt.eq_residual),
                       g17(r.kkt.max_sign_violation), r.am_iterations, g17(r.psi), g17(r.eps_alphadot_lumped),
                       r.kkt.lower_active_count);
  };
  for (int i = 0; i <= trace.completed(); ++i) row(i);
  return out;
}

std::string vtk_snapshot(const Mesh& mesh, const FeOperators& ops, const MaterialLaws& laws, const Vector& alpha,
                         const Vector& u, const Vector& V, std::string_view title) {
  const std::size_t nn = mesh.num_nodes();
  const std::size_t ne = mesh.num_triangles();
  std::string out = fmt::format("# vtk DataFile Version 3.0\n{}\nASCII\nDATASET UNSTRUCTURED_GRID\n", title);
  out += fmt::format("POINTS {} double\n", nn);
  for (const auto& p : mesh.nodes()) out += fmt::format("{} {} 0\n", g17(p.x()), g17(p.y()));
  out += fmt::format("CELLS {} {}\n", ne, 4 * ne);
  for (const auto& t : mesh.triangles()) out += fmt::format("3 {} {} {}\n", t[0], t[1], t[2]);
  out += fmt::format("CELL_TYPES {}\n", ne);
  for (std::size_t e = 0; e < ne; ++e) out += "5\n";

  const auto scalars = [&out](std::string_view name, const auto& values, std::size_t n) {
    out += fmt::format("SCALARS {} double 1\nLOOKUP_TABLE default\n", name);
    for (std::size_t i = 0; i < n; ++i) out += g17(values(i)) + '\n';
  };
  out += fmt::format("POINT_DATA {}\n", nn);
  scalars("alpha", [&](std::size_t i) { return alpha[static_cast<Eigen::Index>(i)]; }, nn);
  scalars("u", [&](std::size_t i) { return u[static_cast<Eigen::Index>(i)]; }, nn);

  const GradField grad_u = element_gradients(ops, u);
  out += fmt::format("CELL_DATA {}\n", ne);
  scalars("V", [&](std::size_t e) { return V[static_cast<Eigen::Index>(e)]; }, ne);
  scalars("f_of_V", [&](std::size_t e) { return eval_f(laws, V[static_cast<Eigen::Index>(e)]).value; }, ne);
  scalars("grad_u_norm", [&](std::size_t e) { return grad_u.col(static_cast<Eigen::Index>(e)).norm(); }, ne);
  return out;
}

std::string rescaled_csv(const RescaledEvolution& r) {
  std::string out = "s,t,min_alpha,psi,plateau\n";
  for (int j = 0; j < r.samples(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const int plateau = j > 0 && r.on_plateau(j) ? 1 : 0;
    out += fmt::format("{},{},{},{},{}\n", g17(r.s[uj]), g17(r.t[uj]), g17(r.alpha[uj].minCoeff()), g17(r.psi[uj]),
                       plateau);
  }
  return out;
}

std::string balance_text(const BalanceReport& b) {
  return fmt::format(
      "energy_start = {}\nenergy_end = {}\ndissipated_total = {}\nviscous_total = {}\nwork_total = {}\n"
      "residual = {}\nrecast_viscous_total = {}\nrecast_residual = {}\n",
      g17(b.energy_start), g17(b.energy_end), g17(b.dissipated_total), g17(b.viscous_total), g17(b.work_total),
      g17(b.residual), g17(b.recast_viscous_total), g17(b.recast_residual));
}

std::string sweep_text(const SweepReport& rep) {
  std::string out = "eps,S,plateau_measure,instability_measure,fatigue_gap\n";
  for (const auto& e : rep.entries) {
    out += fmt::format("{},{},{},{},{}\n", g17(e.eps), g17(e.S), g17(e.plateau_measure), g17(e.instability_measure),
                       g17(e.fatigue_gap));
  }
  const auto flag = [](const std::optional<bool>& f) { return f ? (*f ? "true" : "false") : "undefined"; };
  out += fmt::format("# S_ratio = {}\n# instability_nonincreasing = {}\n# instability_strictly_decreasing = {}\n",
                     g17(rep.S_ratio), flag(rep.instability_nonincreasing),
                     flag(rep.instability_strictly_decreasing));
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error(fmt::format("cannot create directory {}: {}", path.parent_path().string(), ec.message()));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error(fmt::format("write to {} failed", path.string()));
}

}  // namespace fatigue
