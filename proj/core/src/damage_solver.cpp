// Bound-constrained damage subproblem: projected gradient with backtracking,
// followed on every iteration by a Newton refinement on the free set.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/SparseCholesky>

#include "fatigue/incremental_step.hpp"

namespace fatigue {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Sufficient decrease, or a rounding-level change that still shrinks the
// projected gradient (near the minimizer J differences drown in roundoff).
bool acceptable(double j_trial, double j_current, double directional, double pg_trial, double pg_current) {
  if (j_trial <= j_current + kArmijo * directional) return true;
  const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(j_current));
  return j_trial - j_current <= roundoff && pg_trial < pg_current;
}

}  // namespace

DamageSubproblem::DamageSubproblem(const FeOperators& ops, const MaterialLaws& laws, const GradField& grad_u,
                                   const StepInputs& inputs)
    : ops_(ops),
      laws_(laws),
      grad_u_(grad_u),
      lower_(Vector::Zero(inputs.alpha_prev.size())),
      upper_(inputs.alpha_prev),
      load_(dissipation_load(inputs.V_prev, ops, laws)),
      strain_sq_(grad_u.colwise().squaredNorm().transpose()),
      eps_over_tau_(inputs.eps / inputs.tau) {}

double DamageSubproblem::objective(const Vector& alpha) const {
  const Vector diff = alpha - upper_;
  return total_energy(alpha, grad_u_, ops_, laws_).total() - load_.dot(diff) +
         0.5 * eps_over_tau_ * lumped_dot(ops_, diff, diff);
}

Vector DamageSubproblem::gradient(const Vector& alpha) const {
  Vector g = grad_alpha_energy(alpha, grad_u_, ops_, laws_);
  g -= load_;
  g.array() += eps_over_tau_ * ops_.lumped_mass.array() * (alpha - upper_).array();
  return g;
}

SparseMatrix DamageSubproblem::hessian(const Vector& alpha) const {
  const Vector abar = element_average(ops_, alpha);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * ops_.elements.size() + static_cast<std::size_t>(alpha.size()));
  for (Eigen::Index e = 0; e < ops_.num_elements(); ++e) {
    const auto i = static_cast<std::size_t>(e);
    const double c = ops_.areas[i] / 9.0 * 0.5 * mu_curvature(laws_, abar[e]) * strain_sq_[e];
    if (c == 0.0) continue;
    for (int a : ops_.elements[i])
      for (int b : ops_.elements[i]) triplets.emplace_back(a, b, c);
  }
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    triplets.emplace_back(i, i, eps_over_tau_ * ops_.lumped_mass[i]);
  }
  SparseMatrix h(alpha.size(), alpha.size());
  h.setFromTriplets(triplets.begin(), triplets.end());
  h += ops_.stiffness;
  return h;
}

Vector DamageSubproblem::project(const Vector& alpha) const { return alpha.cwiseMax(lower_).cwiseMin(upper_); }

Vector DamageSubproblem::projected_gradient(const Vector& alpha, const Vector& grad) const {
  Vector pg = grad;
  for (Eigen::Index i = 0; i < pg.size(); ++i) {
    if (upper_[i] <= lower_[i]) {
      pg[i] = 0.0;
    } else if (alpha[i] <= lower_[i] && grad[i] > 0.0) {
      pg[i] = 0.0;
    } else if (alpha[i] >= upper_[i] && grad[i] < 0.0) {
      pg[i] = 0.0;
    }
  }
  return pg;
}

namespace {

struct NewtonDirection {
  Vector direction;
  bool ok = false;
};

// Newton direction on the free set; falls back to the Hessian with the
// negative curvature of mu dropped when the exact one is not positive definite.
NewtonDirection free_set_newton(const DamageSubproblem& problem, const FeOperators& ops, const Vector& alpha,
                                const Vector& grad, const std::vector<int>& free_index, int n_free) {
  NewtonDirection out;
  if (n_free == 0) return out;

  const auto reduce = [&](const SparseMatrix& h) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(h.nonZeros()));
    for (int k = 0; k < h.outerSize(); ++k) {
      const int fk = free_index[static_cast<std::size_t>(k)];
      if (fk < 0) continue;
      for (SparseMatrix::InnerIterator it(h, k); it; ++it) {
        const int fr = free_index[static_cast<std::size_t>(it.row())];
        if (fr >= 0) trip.emplace_back(fr, fk, it.value());
      }
    }
    SparseMatrix r(n_free, n_free);
    r.setFromTriplets(trip.begin(), trip.end());
    return r;
  };

  Vector rhs(n_free);
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    const int f = free_index[static_cast<std::size_t>(i)];
    if (f >= 0) rhs[f] = -grad[i];
  }

  const auto try_solve = [&](const SparseMatrix& h, Vector& sol) {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(h);
    if (ldlt.info() != Eigen::Success) return false;
    if (!(ldlt.vectorD().minCoeff() > 0.0)) return false;
    sol = ldlt.solve(rhs);
    return ldlt.info() == Eigen::Success && sol.allFinite();
  };

  Vector sol;
  bool ok = try_solve(reduce(problem.hessian(alpha)), sol);
  if (!ok) {
    SparseMatrix convex = ops.stiffness;
    SparseMatrix mass(alpha.size(), alpha.size());
    std::vector<Eigen::Triplet<double>> diag;
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
      diag.emplace_back(i, i, problem.viscous_weight() * ops.lumped_mass[i]);
    mass.setFromTriplets(diag.begin(), diag.end());
    convex += mass;
    ok = try_solve(reduce(convex), sol);
  }
  if (!ok) return out;

  out.direction = Vector::Zero(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const int f = free_index[static_cast<std::size_t>(i)];
    if (f >= 0) out.direction[i] = sol[f];
  }
  out.ok = true;
  return out;
}

}  // namespace

DamageSolveResult solve_damage_subproblem(const Vector& u, const StepInputs& inputs, const FeOperators& ops,
                                          const MaterialLaws& laws, const SolverSettings& settings,
                                          const Vector* start) {
  const GradField grad_u = element_gradients(ops, u);
  const DamageSubproblem problem(ops, laws, grad_u, inputs);
  const Eigen::Index n = inputs.alpha_prev.size();

  DamageSolveResult result;
  result.objective_start = problem.objective(inputs.alpha_prev);
  Vector x = inputs.alpha_prev;
  double jx = result.objective_start;
  if (start != nullptr) {
    const Vector warm = problem.project(*start);
    const double jw = problem.objective(warm);
    if (jw <= jx) {
      x = warm;
      jx = jw;
    }
  }

  Vector g = problem.gradient(x);
  const Vector hdiag_floor = ops.stiffness.diagonal() + problem.viscous_weight() * ops.lumped_mass;
  // One ulp of alpha moves the gradient by about hdiag * eps; nothing finer is attainable.
  const double resolution = 16.0 * std::numeric_limits<double>::epsilon() * inf_norm(hdiag_floor);
  const double tol = std::max(settings.tol_pg * (1.0 + inf_norm(g)), resolution);

  for (int it = 0; it < settings.max_pg_iters; ++it) {
    Vector pg = problem.projected_gradient(x, g);
    double pg_norm = inf_norm(pg);
    result.iterations = it;
    if (pg_norm <= tol) {
      result.converged = true;
      break;
    }
    bool moved = false;

    // Scaled projected-gradient step along the projection arc.
    {
      const Vector scale = problem.hessian(x).diagonal().cwiseMax(hdiag_floor);
      const Vector dir = -g.cwiseQuotient(scale);
      double s = 1.0;
      for (int b = 0; b < kMaxBacktracks; ++b, s *= 0.5) {
        const Vector trial = problem.project(x + s * dir);
        const Vector step = trial - x;
        if (step.cwiseAbs().maxCoeff() == 0.0) break;
        const double jt = problem.objective(trial);
        const Vector gt = problem.gradient(trial);
        const double pgt = inf_norm(problem.projected_gradient(trial, gt));
        if (acceptable(jt, jx, g.dot(step), pgt, pg_norm)) {
          x = trial;
          jx = jt;
          g = gt;
          pg_norm = pgt;
          moved = true;
          break;
        }
      }
    }

    // Newton refinement on the free set.
    std::vector<int> free_index(static_cast<std::size_t>(n), -1);
    int n_free = 0;
    const Vector& lo = problem.lower();
    const Vector& hi = problem.upper();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(hi[i] > lo[i])) continue;
      const bool interior = x[i] > lo[i] && x[i] < hi[i];
      const bool leaves_lower = x[i] <= lo[i] && g[i] < 0.0;
      const bool leaves_upper = x[i] >= hi[i] && g[i] > 0.0;
      if (interior || leaves_lower || leaves_upper) free_index[static_cast<std::size_t>(i)] = n_free++;
    }
    const NewtonDirection newton = free_set_newton(problem, ops, x, g, free_index, n_free);
    if (newton.ok) {
      double s = 1.0;
      for (int b = 0; b < kMaxBacktracks; ++b, s *= 0.5) {
        const Vector trial = problem.project(x + s * newton.direction);
        const Vector step = trial - x;
        const double directional = g.dot(step);
        if (step.cwiseAbs().maxCoeff() == 0.0 || directional > 0.0) break;
        const double jt = problem.objective(trial);
        const Vector gt = problem.gradient(trial);
        const double pgt = inf_norm(problem.projected_gradient(trial, gt));
        if (acceptable(jt, jx, directional, pgt, pg_norm)) {
          x = trial;
          jx = jt;
          g = gt;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      result.iterations = it + 1;
      break;
    }
    result.iterations = it + 1;
  }

  const double final_pg = inf_norm(problem.projected_gradient(x, g));
  result.projected_gradient_norm = final_pg;
  result.converged = final_pg <= tol;
  result.alpha = std::move(x);
  result.objective_end = jx;
  return result;
}

}  // namespace fatigue
