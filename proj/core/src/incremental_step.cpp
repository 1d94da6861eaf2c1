#include "fatigue/incremental_step.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

namespace fatigue {

Vector solve_equilibrium(const Vector& alpha, const Vector& w_bc, const FeOperators& ops, const MaterialLaws& laws,
                         double tol_eq) {
  const Eigen::Index n = ops.num_nodes();
  if (alpha.size() != n || w_bc.size() != n) throw std::invalid_argument("equilibrium: field length mismatch");

  std::vector<int> free_index(static_cast<std::size_t>(n), -1);
  int n_free = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!ops.dirichlet_mask[static_cast<std::size_t>(i)]) free_index[static_cast<std::size_t>(i)] = n_free++;
  }

  Vector u = w_bc;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (free_index[static_cast<std::size_t>(i)] >= 0) u[i] = 0.0;
  }
  if (n_free == 0) return u;

  const Vector coeff = element_modulus(alpha, ops, laws);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * ops.elements.size());
  Vector rhs = Vector::Zero(n_free);
  for (std::size_t e = 0; e < ops.elements.size(); ++e) {
    const ElementGradient& b = ops.elem_grad[e];
    const Eigen::Matrix3d ke = coeff[static_cast<Eigen::Index>(e)] * ops.areas[e] * (b.transpose() * b);
    const auto& tri = ops.elements[e];
    for (int a = 0; a < 3; ++a) {
      const int fa = free_index[static_cast<std::size_t>(tri[a])];
      if (fa < 0) continue;
      for (int c = 0; c < 3; ++c) {
        const int fc = free_index[static_cast<std::size_t>(tri[c])];
        if (fc >= 0) {
          triplets.emplace_back(fa, fc, ke(a, c));
        } else {
          rhs[fa] -= ke(a, c) * w_bc[tri[c]];
        }
      }
    }
  }
  SparseMatrix a_ff(n_free, n_free);
  a_ff.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::SimplicialLDLT<SparseMatrix> ldlt(a_ff);
  if (ldlt.info() != Eigen::Success) throw SolverError("equilibrium: factorization failed");
  if (!(ldlt.vectorD().minCoeff() > 0.0)) throw SolverError("equilibrium: operator is not positive definite");
  const Vector sol = ldlt.solve(rhs);
  const double residual = (a_ff * sol - rhs).norm();
  if (!(residual <= tol_eq * (1.0 + rhs.norm()))) {
    throw SolverError(fmt::format("equilibrium: residual {} above tolerance", residual));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const int f = free_index[static_cast<std::size_t>(i)];
    if (f >= 0) u[i] = sol[f];
  }
  return u;
}

double incremental_objective(const Vector& alpha, const Vector& u, const StepInputs& inputs, const FeOperators& ops,
                             const MaterialLaws& laws) {
  const GradField grad_u = element_gradients(ops, u);
  const Vector diff = alpha - inputs.alpha_prev;
  return total_energy(alpha, grad_u, ops, laws).total() - dissipation_load(inputs.V_prev, ops, laws).dot(diff) +
         0.5 * inputs.eps / inputs.tau * lumped_dot(ops, diff, diff);
}

Vector update_history(const ZetaField& zeta_prev, const ZetaField& zeta_new, const Vector& V_prev) {
  if (zeta_prev.rows() != zeta_new.rows() || zeta_prev.cols() != zeta_new.cols() || zeta_new.cols() != V_prev.size()) {
    throw std::invalid_argument("update_history: shape mismatch");
  }
  return V_prev + (zeta_new - zeta_prev).colwise().norm().transpose();
}

namespace {

void check_inputs(const StepInputs& in, const FeOperators& ops, const MaterialLaws& laws) {
  if (in.alpha_prev.size() != ops.num_nodes() || in.w_bc.size() != ops.num_nodes()) {
    throw std::invalid_argument("step inputs: nodal field length mismatch");
  }
  if (in.V_prev.size() != ops.num_elements() || in.zeta_prev.cols() != ops.num_elements() ||
      in.zeta_prev.rows() != laws.zeta_rows()) {
    throw std::invalid_argument("step inputs: element field shape mismatch");
  }
  if (!(in.eps > 0.0) || !(in.tau > 0.0)) throw std::invalid_argument("step inputs: eps and tau must be positive");
  if (in.alpha_prev.size() && (in.alpha_prev.minCoeff() < -1e-12 || in.alpha_prev.maxCoeff() > 1.0 + 1e-12)) {
    throw std::invalid_argument("step inputs: alpha_prev outside [0, 1]");
  }
  if (in.V_prev.size() && in.V_prev.minCoeff() < 0.0) throw std::invalid_argument("step inputs: negative V_prev");
}

}  // namespace

StepResult alternate_minimize(const StepInputs& inputs, const FeOperators& ops, const MaterialLaws& laws,
                              const SolverSettings& settings) {
  check_inputs(inputs, ops, laws);
  StepResult out;

  Vector alpha = inputs.alpha_prev;
  Vector u = solve_equilibrium(alpha, inputs.w_bc, ops, laws, settings.tol_eq);
  const double j_start = incremental_objective(alpha, u, inputs, ops, laws);
  bool u_current = true;
  bool stagnated = false;
  bool damage_ok = true;

  for (int sweep = 0; sweep < settings.max_am_sweeps; ++sweep) {
    if (!u_current) u = solve_equilibrium(alpha, inputs.w_bc, ops, laws, settings.tol_eq);
    const DamageSolveResult d = solve_damage_subproblem(u, inputs, ops, laws, settings, &alpha);
    out.damage_iterations += d.iterations;
    ++out.am_iterations;
    damage_ok = d.converged;
    const double change = (d.alpha - alpha).cwiseAbs().maxCoeff();
    u_current = change == 0.0;
    alpha = d.alpha;
    if (change <= settings.tol_stag) {
      stagnated = true;
      break;
    }
  }
  if (!u_current) u = solve_equilibrium(alpha, inputs.w_bc, ops, laws, settings.tol_eq);

  if (!stagnated) {
    out.converged = false;
    out.failure = fmt::format("alternate minimization hit the sweep cap ({})", settings.max_am_sweeps);
  } else if (!damage_ok) {
    out.converged = false;
    out.failure = "damage subproblem hit the iteration cap";
  }

  const GradField grad_u = element_gradients(ops, u);
  out.zeta = zeta_field(alpha, grad_u, ops, laws);
  out.V = update_history(inputs.zeta_prev, out.zeta, inputs.V_prev);
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (alpha[i] <= 0.0 && inputs.alpha_prev[i] > 0.0) out.lower_bound_active.push_back(static_cast<int>(i));
  }
  out.objective_decrease = j_start - incremental_objective(alpha, u, inputs, ops, laws);
  out.alpha = std::move(alpha);
  out.u = std::move(u);
  return out;
}

}  // namespace fatigue
