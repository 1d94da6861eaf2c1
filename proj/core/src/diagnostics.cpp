#include "fatigue/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "fatigue/energy.hpp"
#include "fatigue/evolution.hpp"

namespace fatigue {

KktReport classify_kkt(const Vector& d, const Vector& alpha, const Vector& alpha_prev) {
  if (d.size() != alpha.size() || alpha.size() != alpha_prev.size()) {
    throw std::invalid_argument("classify_kkt: length mismatch");
  }
  KktReport r;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double hi = alpha_prev[i];
    if (!(hi > 0.0)) continue;
    const bool at_lower = alpha[i] <= 0.0;
    const bool at_upper = alpha[i] >= hi;
    double violation = 0.0;
    if (at_lower) {
      ++r.lower_active_count;
      violation = std::max(-d[i], 0.0);
    } else if (at_upper) {
      violation = std::max(d[i], 0.0);
    } else {
      violation = std::abs(d[i]);
    }
    r.max_sign_violation = std::max(r.max_sign_violation, violation);
    const double comp = std::max(d[i], 0.0) * std::max(alpha[i], 0.0) + std::max(-d[i], 0.0) * std::max(hi - alpha[i], 0.0);
    r.complementarity_max = std::max(r.complementarity_max, comp);
  }
  return r;
}

Vector kkt_density(const Vector& alpha, const Vector& u, const Vector& alpha_prev, const Vector& V_prev,
                   const FeOperators& ops, const MaterialLaws& laws, double eps, double tau) {
  const GradField grad_u = element_gradients(ops, u);
  Vector d = grad_alpha_energy(alpha, grad_u, ops, laws) - dissipation_load(V_prev, ops, laws);
  d.array() += eps / tau * ops.lumped_mass.array() * (alpha - alpha_prev).array();
  return d;
}

KktReport kkt_residuals(const Vector& alpha, const Vector& u, const Vector& alpha_prev, const Vector& V_prev,
                        const FeOperators& ops, const MaterialLaws& laws, double eps, double tau) {
  const GradField grad_u = element_gradients(ops, u);
  const Vector g = grad_alpha_energy(alpha, grad_u, ops, laws);
  const Vector f = dissipation_load(V_prev, ops, laws);
  const Vector delta = alpha - alpha_prev;
  const Vector viscous = (eps / tau) * ops.lumped_mass.cwiseProduct(delta);

  KktReport r = classify_kkt(g - f + viscous, alpha, alpha_prev);
  const auto inf = [](const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; };
  r.scale = inf(g) + inf(f) + inf(viscous);

  const Vector rate = delta / tau;
  const double pairing = g.dot(rate);
  const double dissipation = -f.dot(rate);
  const double viscous_power = eps * lumped_dot(ops, rate, rate);
  const double magnitude = std::abs(pairing) + std::abs(dissipation) + viscous_power;
  r.eq_residual = magnitude > 0.0 ? std::abs(pairing + dissipation + viscous_power) / magnitude : 0.0;
  return r;
}

KktReport kkt_residuals(const StepResult& step, const StepInputs& inputs, const FeOperators& ops,
                        const MaterialLaws& laws) {
  return kkt_residuals(step.alpha, step.u, inputs.alpha_prev, inputs.V_prev, ops, laws, inputs.eps, inputs.tau);
}

double psi_from_force(const Vector& force, const Vector& lumped_mass) {
  if (force.size() != lumped_mass.size()) throw std::invalid_argument("psi: length mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < force.size(); ++i) {
    const double density = std::max(force[i] / lumped_mass[i], 0.0);
    sum += lumped_mass[i] * density * density;
  }
  return std::sqrt(sum);
}

double stability_psi(const Vector& alpha, const Vector& u, const Vector& V, const FeOperators& ops,
                     const MaterialLaws& laws) {
  const GradField grad_u = element_gradients(ops, u);
  const Vector force = grad_alpha_energy(alpha, grad_u, ops, laws) - dissipation_load(V, ops, laws);
  return psi_from_force(force, ops.lumped_mass);
}

BalanceReport energy_balance_residual(const EvolutionTrace& trace, const FeOperators& ops, int i1, int i2) {
  if (i1 < 0 || i2 <= i1 || i2 > trace.completed()) {
    throw std::invalid_argument(fmt::format("balance: bad grid interval [{}, {}] for {} completed steps", i1, i2,
                                            trace.completed()));
  }
  BalanceReport r;
  r.energy_start = trace.energy(i1).total();
  r.energy_end = trace.energy(i2).total();
  for (int i = i1 + 1; i <= i2; ++i) {
    const StepRecord& rec = trace.record(i);
    r.dissipated_total += rec.diss_inc;
    r.viscous_total += rec.visc_inc;
    r.work_total += rec.work_inc;
    r.recast_viscous_total += lumped_norm(ops, rec.alpha - trace.alpha(i - 1)) * rec.psi;
  }
  r.residual = r.energy_start + r.work_total - r.energy_end - r.dissipated_total - r.viscous_total;
  r.recast_residual = r.energy_start + r.work_total - r.energy_end - r.dissipated_total - r.recast_viscous_total;
  return r;
}

}  // namespace fatigue
