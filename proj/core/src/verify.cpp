#include "fatigue/verify.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "fatigue/diagnostics.hpp"
#include "fatigue/rescaling.hpp"
#include "fatigue/variation.hpp"

namespace fatigue {

bool VerifyReport::passed() const {
  return std::all_of(gates.begin(), gates.end(), [](const GateResult& g) { return g.passed; });
}

std::string VerifyReport::text() const {
  std::string out;
  for (const auto& g : gates) out += fmt::format("{} {}: {}\n", g.passed ? "PASS" : "FAIL", g.name, g.detail);
  out += fmt::format("{}\n", passed() ? "all gates passed" : "some gates failed");
  return out;
}

VerifyReport verify_trace(const EvolutionTrace& trace, const FeOperators& ops, const SolverSettings& solver,
                          double p, double delta, const VerifyTolerances& tol) {
  VerifyReport rep;
  const int n = trace.completed();
  const auto add = [&rep](std::string name, bool ok, std::string detail) {
    rep.gates.push_back({std::move(name), ok, std::move(detail)});
  };

  int failed_steps = 0;
  std::string first_failure;
  for (const auto& r : trace.records) {
    if (!r.converged) {
      if (failed_steps++ == 0) first_failure = fmt::format(" (step {}: {})", r.step, r.failure);
    }
  }
  add("solver_convergence", failed_steps == 0, fmt::format("{} of {} steps flagged{}", failed_steps, n, first_failure));

  double worst_eq = 0.0;
  double worst_sign = 0.0;
  double worst_decrease = 0.0;
  for (const auto& r : trace.records) {
    worst_eq = std::max(worst_eq, r.kkt.eq_residual);
    worst_sign = std::max(worst_sign, r.kkt.max_sign_violation / std::max(r.kkt.scale, 1e-300));
    worst_decrease = std::min(worst_decrease, r.objective_decrease / (1.0 + r.energy.total()));
  }
  add("euler_equality", worst_eq <= tol.euler, fmt::format("max eq_residual {:.3e} (limit {:.1e})", worst_eq, tol.euler));
  add("kkt_signs", worst_sign <= solver.tol_kkt,
      fmt::format("max relative sign violation {:.3e} (limit {:.1e})", worst_sign, solver.tol_kkt));
  add("objective_descent", worst_decrease >= -1e-12,
      fmt::format("most negative relative objective decrease {:.3e}", worst_decrease));

  double worst_psi = 0.0;
  int psi_steps = 0;
  for (int i = 1; i <= n; ++i) {
    const StepRecord& r = trace.record(i);
    if (r.kkt.lower_active_count > 0 || (r.alpha - trace.alpha(i - 1)).cwiseAbs().maxCoeff() == 0.0) continue;
    ++psi_steps;
    const double gap = std::abs(r.eps_alphadot_lumped - r.psi) / (r.eps_alphadot_lumped + r.psi + 1e-12);
    worst_psi = std::max(worst_psi, gap);
  }
  add("psi_identity", worst_psi <= tol.psi_identity,
      fmt::format("max relative gap {:.3e} over {} damaging steps (limit {:.1e})", worst_psi, psi_steps,
                  tol.psi_identity));

  double worst_increase = 0.0;
  double worst_bound = 0.0;
  double worst_v = 0.0;
  for (int i = 0; i <= n; ++i) {
    const Vector& a = trace.alpha(i);
    worst_bound = std::max({worst_bound, -a.minCoeff(), a.maxCoeff() - 1.0});
    if (i > 0) {
      worst_increase = std::max(worst_increase, (a - trace.alpha(i - 1)).maxCoeff());
      worst_v = std::max(worst_v, (trace.V(i - 1) - trace.V(i)).maxCoeff());
    }
  }
  add("irreversibility", worst_increase <= tol.monotone,
      fmt::format("max nodal increase of alpha {:.3e}", worst_increase));
  add("damage_bounds", worst_bound <= tol.monotone, fmt::format("max bound excess {:.3e}", worst_bound));
  add("cumulation_monotone", worst_v <= 0.0, fmt::format("max decrease of V {:.3e}", worst_v));

  const Vector total = trace.V0 + essential_variation(zeta_series(trace), 0, n);
  const double v_gap = (total - trace.V(n)).cwiseAbs().maxCoeff();
  add("cumulation_variation", v_gap <= 1e-12 * (1.0 + trace.V(n).cwiseAbs().maxCoeff()),
      fmt::format("max |V_final - V0 - essVar| {:.3e}", v_gap));

  if (n >= 1) {
    const BalanceReport whole = energy_balance_residual(trace, ops, 0, n);
    const double scale = std::abs(whole.energy_start) + std::abs(whole.work_total) + whole.dissipated_total +
                         whole.viscous_total + std::abs(whole.energy_end) + 1e-300;
    const double running = trace.record(n).balance_residual_running;
    const int mid = n / 2;
    double split_gap = 0.0;
    if (mid >= 1 && mid < n) {
      split_gap = std::abs(whole.residual - energy_balance_residual(trace, ops, 0, mid).residual -
                           energy_balance_residual(trace, ops, mid, n).residual);
    }
    add("balance_bookkeeping", std::abs(running - whole.residual) <= 1e-10 * scale && split_gap <= 1e-12 * scale,
        fmt::format("running vs direct {:.3e}, split additivity {:.3e}, residual {:.6e}",
                    std::abs(running - whole.residual), split_gap, whole.residual));
  }

  const RescaledEvolution r = arc_length_rescale(trace, ops, p, delta);
  double worst_pair = 0.0;
  bool t_ok = true;
  const int m = r.samples();
  const int stride = std::max(1, (m + tol.arc_samples - 1) / tol.arc_samples);
  std::vector<int> idx;
  for (int j = 0; j < m; j += stride) idx.push_back(j);
  if (idx.back() != m - 1) idx.push_back(m - 1);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto i1 = static_cast<std::size_t>(idx[a]);
      const auto i2 = static_cast<std::size_t>(idx[b]);
      const double ds = r.s[i2] - r.s[i1];
      const double combined =
          (r.t[i2] - r.t[i1]) + h1_norm(ops, r.alpha[i2] - r.alpha[i1]) + w1p_norm(ops, r.u[i2] - r.u[i1], p);
      worst_pair = std::max(worst_pair, combined / ds - 1.0);
    }
  }
  for (int j = 1; j < m; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double dt = r.t[uj] - r.t[uj - 1];
    const double ds = r.s[uj] - r.s[uj - 1];
    if (dt < 0.0 || dt > ds * (1.0 + tol.arc_length)) t_ok = false;
  }
  add("arc_length_contract", worst_pair <= tol.arc_length && t_ok,
      fmt::format("max pair excess {:.3e}, t monotone and 1-Lipschitz: {}, S = {:.6e}", worst_pair,
                  t_ok ? "yes" : "no", r.S));
  return rep;
}

}  // namespace fatigue
