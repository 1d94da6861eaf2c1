#include "fatigue/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace fatigue {

bool EvolutionTrace::all_converged() const {
  for (const auto& r : records)
    if (!r.converged) return false;
  return true;
}

EvolutionTrace start_evolution(const EvolutionSetup& setup, const FeOperators& ops) {
  setup.laws.validate();
  setup.load.schedule.validate();
  if (setup.steps < 1) throw std::invalid_argument("number of steps must be >= 1");
  if (!(setup.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(setup.load.T > 0.0)) throw std::invalid_argument("final time T must be positive");
  if (setup.alpha0.size() != ops.num_nodes() || setup.load.profile.size() != ops.num_nodes()) {
    throw std::invalid_argument("initial damage or load profile has wrong length");
  }
  if (setup.alpha0.minCoeff() < 0.0 || setup.alpha0.maxCoeff() > 1.0) {
    throw std::invalid_argument("initial damage must lie in [0, 1]");
  }

  EvolutionTrace trace;
  trace.T = setup.load.T;
  trace.steps = setup.steps;
  trace.tau = setup.load.T / setup.steps;
  trace.eps = setup.eps;
  trace.laws = setup.laws;
  trace.alpha0 = setup.alpha0;
  trace.V0 = setup.V0.size() ? setup.V0 : Vector::Zero(ops.num_elements());
  if (trace.V0.size() != ops.num_elements() || trace.V0.minCoeff() < 0.0) {
    throw std::invalid_argument("initial cumulation must be a nonnegative element field");
  }
  trace.u0 = setup.u0.size() ? setup.u0
                             : solve_equilibrium(setup.alpha0, setup.load.w(0.0), ops, setup.laws,
                                                 setup.solver.tol_eq);
  const GradField grad_u0 = element_gradients(ops, trace.u0);
  trace.zeta0 = zeta_field(trace.alpha0, grad_u0, ops, setup.laws);
  trace.energy0 = total_energy(trace.alpha0, grad_u0, ops, setup.laws);
  if (trace.tau > trace.eps) {
    trace.warnings.push_back(
        fmt::format("time step {} exceeds the viscosity {}; the scheme is meant for tau << eps", trace.tau, trace.eps));
  }
  return trace;
}

namespace {

double work_increment(const Vector& alpha, const GradField& grad_u, const Vector& dw, const FeOperators& ops,
                      const MaterialLaws& laws) {
  const Vector mu = element_modulus(alpha, ops, laws);
  const GradField grad_dw = element_gradients(ops, dw);
  double work = 0.0;
  for (Eigen::Index e = 0; e < ops.num_elements(); ++e) {
    work += ops.areas[static_cast<std::size_t>(e)] * mu[e] * grad_u.col(e).dot(grad_dw.col(e));
  }
  return work;
}

}  // namespace

void continue_evolution(EvolutionTrace& trace, const EvolutionSetup& setup, const FeOperators& ops,
                        const StepCallback& on_step) {
  const double tau = trace.tau;
  for (int i = trace.completed() + 1; i <= trace.steps; ++i) {
    StepInputs in;
    in.alpha_prev = trace.alpha(i - 1);
    in.V_prev = trace.V(i - 1);
    in.zeta_prev = trace.zeta(i - 1);
    in.w_bc = setup.load.w(trace.time(i));
    in.eps = trace.eps;
    in.tau = tau;

    StepResult res = alternate_minimize(in, ops, trace.laws, setup.solver);

    StepRecord rec;
    rec.step = i;
    rec.t = trace.time(i);
    const GradField grad_u = element_gradients(ops, res.u);
    rec.energy = total_energy(res.alpha, grad_u, ops, trace.laws);
    const Vector delta = res.alpha - in.alpha_prev;
    rec.diss_inc = -dissipation_load(in.V_prev, ops, trace.laws).dot(delta);
    rec.visc_inc = trace.eps / tau * lumped_dot(ops, delta, delta);
    rec.work_inc = work_increment(res.alpha, grad_u, in.w_bc - setup.load.w(trace.time(i - 1)), ops, trace.laws);
    const double previous = i == 1 ? 0.0 : trace.record(i - 1).balance_residual_running;
    rec.balance_residual_running = previous + trace.energy(i - 1).total() - rec.energy.total() + rec.work_inc -
                                   rec.diss_inc - rec.visc_inc;
    rec.kkt = kkt_residuals(res, in, ops, trace.laws);
    rec.psi = stability_psi(res.alpha, res.u, in.V_prev, ops, trace.laws);
    rec.eps_alphadot_lumped = trace.eps * lumped_norm(ops, delta) / tau;
    rec.am_iterations = res.am_iterations;
    rec.damage_iterations = res.damage_iterations;
    rec.lower_active = std::move(res.lower_bound_active);
    rec.objective_decrease = res.objective_decrease;
    rec.converged = res.converged;
    rec.failure = std::move(res.failure);
    rec.alpha = std::move(res.alpha);
    rec.u = std::move(res.u);
    rec.V = std::move(res.V);
    rec.zeta = std::move(res.zeta);
    trace.records.push_back(std::move(rec));
    if (on_step) on_step(trace);
  }
}

EvolutionTrace run_evolution(const EvolutionSetup& setup, const FeOperators& ops, const StepCallback& on_step) {
  EvolutionTrace trace = start_evolution(setup, ops);
  continue_evolution(trace, setup, ops, on_step);
  return trace;
}

InterpolatedState interpolate_trace(const EvolutionTrace& trace, double t) {
  const double t_end = trace.time(trace.completed());
  if (!(t >= 0.0 && t <= t_end)) {
    throw std::invalid_argument(fmt::format("interpolation time {} outside [0, {}]", t, t_end));
  }
  const auto snapshot = [&](int i) {
    return FieldSnapshot{trace.alpha(i), trace.u(i), trace.zeta(i), trace.V(i)};
  };
  const double x = t / trace.tau;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    const FieldSnapshot s = snapshot(static_cast<int>(nearest));
    return {s, s, s};
  }
  const int lo = static_cast<int>(std::floor(x));
  const double theta = x - lo;
  InterpolatedState out{snapshot(lo + 1), snapshot(lo), {}};
  out.affine.alpha = (1.0 - theta) * out.lower.alpha + theta * out.upper.alpha;
  out.affine.u = (1.0 - theta) * out.lower.u + theta * out.upper.u;
  out.affine.zeta = (1.0 - theta) * out.lower.zeta + theta * out.upper.zeta;
  out.affine.V = out.lower.V + theta * (out.upper.zeta - out.lower.zeta).colwise().norm().transpose();
  return out;
}

}  // namespace fatigue
