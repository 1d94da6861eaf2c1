#include "fatigue/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fatigue/io.hpp"

namespace fatigue {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "fatigue-checkpoint";
constexpr int kVersion = 1;

json vec(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector to_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat(const ZetaField& z) {
  return json{{"rows", z.rows()}, {"data", std::vector<double>(z.data(), z.data() + z.size())}};
}

ZetaField to_mat(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows <= 0 || static_cast<Eigen::Index>(data.size()) % rows != 0) throw std::runtime_error("bad zeta block");
  return Eigen::Map<const ZetaField>(data.data(), rows, static_cast<Eigen::Index>(data.size()) / rows);
}

json laws_json(const MaterialLaws& l) {
  return json{{"mu", {{"kind", static_cast<int>(l.mu.kind)}, {"min", l.mu.mu_min}, {"max", l.mu.mu_max}}},
              {"f", {{"kind", static_cast<int>(l.f.kind)}, {"f0", l.f.f0}, {"k", l.f.k}, {"f_inf", l.f.f_inf}}},
              {"g", {{"kind", static_cast<int>(l.g.kind)}, {"min", l.g.g_min}, {"max", l.g.g_max}}},
              {"zeta", {{"kind", static_cast<int>(l.zeta.kind)}, {"theta", l.zeta.theta}}}};
}

MaterialLaws to_laws(const json& j) {
  MaterialLaws l;
  l.mu.kind = static_cast<ModulusLaw::Kind>(j.at("mu").at("kind").get<int>());
  l.mu.mu_min = j.at("mu").at("min").get<double>();
  l.mu.mu_max = j.at("mu").at("max").get<double>();
  l.f.kind = static_cast<FatigueLaw::Kind>(j.at("f").at("kind").get<int>());
  l.f.f0 = j.at("f").at("f0").get<double>();
  l.f.k = j.at("f").at("k").get<double>();
  l.f.f_inf = j.at("f").at("f_inf").get<double>();
  l.g.kind = static_cast<CumulationWeight::Kind>(j.at("g").at("kind").get<int>());
  l.g.g_min = j.at("g").at("min").get<double>();
  l.g.g_max = j.at("g").at("max").get<double>();
  l.zeta.kind = static_cast<ZetaVariant::Kind>(j.at("zeta").at("kind").get<int>());
  l.zeta.theta = j.at("zeta").at("theta").get<double>();
  return l;
}

json energy_json(const EnergyBreakdown& e) { return json::array({e.elastic, e.gradient}); }
EnergyBreakdown to_energy(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

std::string checkpoint_json(const EvolutionTrace& trace, std::string_view config_text) {
  json records = json::array();
  for (const auto& r : trace.records) {
    records.push_back({{"step", r.step},
                       {"t", r.t},
                       {"alpha", vec(r.alpha)},
                       {"u", vec(r.u)},
                       {"V", vec(r.V)},
                       {"zeta", mat(r.zeta)},
                       {"energy", energy_json(r.energy)},
                       {"diss_inc", r.diss_inc},
                       {"visc_inc", r.visc_inc},
                       {"work_inc", r.work_inc},
                       {"balance_residual_running", r.balance_residual_running},
                       {"kkt",
                        {r.kkt.eq_residual, r.kkt.max_sign_violation, r.kkt.complementarity_max,
                         r.kkt.lower_active_count, r.kkt.scale}},
                       {"psi", r.psi},
                       {"eps_alphadot_lumped", r.eps_alphadot_lumped},
                       {"am_iterations", r.am_iterations},
                       {"damage_iterations", r.damage_iterations},
                       {"lower_active", r.lower_active},
                       {"objective_decrease", r.objective_decrease},
                       {"converged", r.converged},
                       {"failure", r.failure}});
  }
  const json doc = {{"format", kFormat},
                    {"version", kVersion},
                    {"config", std::string(config_text)},
                    {"T", trace.T},
                    {"steps", trace.steps},
                    {"tau", trace.tau},
                    {"eps", trace.eps},
                    {"laws", laws_json(trace.laws)},
                    {"alpha0", vec(trace.alpha0)},
                    {"u0", vec(trace.u0)},
                    {"V0", vec(trace.V0)},
                    {"zeta0", mat(trace.zeta0)},
                    {"energy0", energy_json(trace.energy0)},
                    {"records", records},
                    {"warnings", trace.warnings}};
  return doc.dump(1) + '\n';
}

Checkpoint parse_checkpoint(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormat) throw std::runtime_error("not a checkpoint file");
    if (doc.at("version").get<int>() != kVersion) throw std::runtime_error("unsupported checkpoint version");
    Checkpoint cp;
    cp.config_text = doc.at("config").get<std::string>();
    EvolutionTrace& t = cp.trace;
    t.T = doc.at("T").get<double>();
    t.steps = doc.at("steps").get<int>();
    t.tau = doc.at("tau").get<double>();
    t.eps = doc.at("eps").get<double>();
    t.laws = to_laws(doc.at("laws"));
    t.alpha0 = to_vec(doc.at("alpha0"));
    t.u0 = to_vec(doc.at("u0"));
    t.V0 = to_vec(doc.at("V0"));
    t.zeta0 = to_mat(doc.at("zeta0"));
    t.energy0 = to_energy(doc.at("energy0"));
    t.warnings = doc.at("warnings").get<std::vector<std::string>>();
    for (const auto& j : doc.at("records")) {
      StepRecord r;
      r.step = j.at("step").get<int>();
      r.t = j.at("t").get<double>();
      r.alpha = to_vec(j.at("alpha"));
      r.u = to_vec(j.at("u"));
      r.V = to_vec(j.at("V"));
      r.zeta = to_mat(j.at("zeta"));
      r.energy = to_energy(j.at("energy"));
      r.diss_inc = j.at("diss_inc").get<double>();
      r.visc_inc = j.at("visc_inc").get<double>();
      r.work_inc = j.at("work_inc").get<double>();
      r.balance_residual_running = j.at("balance_residual_running").get<double>();
      const json& k = j.at("kkt");
      r.kkt = KktReport{k.at(0).get<double>(), k.at(1).get<double>(), k.at(2).get<double>(), k.at(3).get<int>(),
                        k.at(4).get<double>()};
      r.psi = j.at("psi").get<double>();
      r.eps_alphadot_lumped = j.at("eps_alphadot_lumped").get<double>();
      r.am_iterations = j.at("am_iterations").get<int>();
      r.damage_iterations = j.at("damage_iterations").get<int>();
      r.lower_active = j.at("lower_active").get<std::vector<int>>();
      r.objective_decrease = j.at("objective_decrease").get<double>();
      r.converged = j.at("converged").get<bool>();
      r.failure = j.at("failure").get<std::string>();
      if (r.step != t.completed() + 1) throw std::runtime_error("records out of order");
      t.records.push_back(std::move(r));
    }
    return cp;
  } catch (const json::exception& e) {
    throw std::runtime_error(fmt::format("malformed checkpoint: {}", e.what()));
  }
}

void save_checkpoint(const std::filesystem::path& path, const EvolutionTrace& trace, std::string_view config_text) {
  write_text_file(path, checkpoint_json(trace, config_text));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read checkpoint {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace fatigue
