#include "fatigue/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "fatigue/fe_operators.hpp"

namespace fatigue {

OracleResult oracle_damage_step(const OracleProblem& problem) {
  const auto n = static_cast<int>(problem.c.size());
  if (n > kOracleMaxFree) {
    throw std::invalid_argument(fmt::format("oracle handles at most {} unknowns (got {})", kOracleMaxFree, n));
  }
  if (problem.Q.rows() != n || problem.Q.cols() != n || problem.lo.size() != n || problem.hi.size() != n) {
    throw std::invalid_argument("oracle problem: inconsistent sizes");
  }
  if (n > 0) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(problem.Q, Eigen::EigenvaluesOnly);
    const double lmax = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-10 * lmax) throw std::invalid_argument("oracle problem: Q is not PSD");
  }
  for (int i = 0; i < n; ++i) {
    if (problem.lo[i] > problem.hi[i]) throw std::invalid_argument("oracle problem: lo > hi");
  }

  const double scale = 1.0 + problem.c.cwiseAbs().maxCoeff() + (n ? problem.Q.cwiseAbs().maxCoeff() : 0.0);
  const double sign_tol = 1e-9 * scale;
  const double box_tol = 1e-12;

  OracleResult best;
  best.objective = std::numeric_limits<double>::infinity();
  long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

  std::vector<int> state(static_cast<std::size_t>(n));
  for (long code = 0; code < total; ++code) {
    long rest = code;
    bool duplicate = false;
    for (int i = 0; i < n; ++i) {
      state[static_cast<std::size_t>(i)] = static_cast<int>(rest % 3);
      rest /= 3;
      // 0 lower, 1 upper, 2 free; a degenerate box only needs "lower".
      if (problem.lo[i] == problem.hi[i] && state[static_cast<std::size_t>(i)] != 0) duplicate = true;
    }
    if (duplicate) continue;
    ++best.patterns;

    Vector x(n);
    std::vector<int> free;
    for (int i = 0; i < n; ++i) {
      const int s = state[static_cast<std::size_t>(i)];
      if (s == 0) x[i] = problem.lo[i];
      else if (s == 1) x[i] = problem.hi[i];
      else {
        x[i] = 0.0;
        free.push_back(i);
      }
    }
    if (!free.empty()) {
      const auto nf = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd qff(nf, nf);
      Vector rhs(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        const int ia = free[static_cast<std::size_t>(a)];
        rhs[a] = -problem.c[ia];
        for (int j = 0; j < n; ++j) {
          if (state[static_cast<std::size_t>(j)] != 2) rhs[a] -= problem.Q(ia, j) * x[j];
        }
        for (Eigen::Index b = 0; b < nf; ++b) qff(a, b) = problem.Q(ia, free[static_cast<std::size_t>(b)]);
      }
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(qff);
      if (lu.rank() < nf) {
        ++best.singular;
        continue;
      }
      const Vector xf = lu.solve(rhs);
      for (Eigen::Index a = 0; a < nf; ++a) x[free[static_cast<std::size_t>(a)]] = xf[a];
    }

    bool ok = true;
    const Vector g = problem.Q * x + problem.c;
    for (int i = 0; i < n && ok; ++i) {
      const int s = state[static_cast<std::size_t>(i)];
      if (x[i] < problem.lo[i] - box_tol || x[i] > problem.hi[i] + box_tol) ok = false;
      if (problem.lo[i] == problem.hi[i]) continue;
      if (s == 0 && g[i] < -sign_tol) ok = false;
      if (s == 1 && g[i] > sign_tol) ok = false;
    }
    if (!ok) continue;
    ++best.feasible;
    x = x.cwiseMax(problem.lo).cwiseMin(problem.hi);
    const double j = problem.objective(x);
    if (j < best.objective) {
      best.objective = j;
      best.x = x;
    }
  }
  if (best.feasible == 0) throw std::runtime_error("oracle found no KKT point");
  return best;
}

OracleProblem build_oracle_problem(const OracleInstance& inst) {
  const MaterialLaws& laws = inst.laws;
  if (laws.mu.kind != ModulusLaw::Kind::linear || laws.f.kind != FatigueLaw::Kind::linear_clamped) {
    throw std::invalid_argument("oracle instances need linear mu and linear_clamped f");
  }
  const auto nn = static_cast<Eigen::Index>(inst.mesh.num_nodes());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nn, nn);
  Vector m = Vector::Zero(nn);
  Vector b = Vector::Zero(nn);
  Vector F = Vector::Zero(nn);
  const double slope = laws.mu.mu_max - laws.mu.mu_min;

  const auto& tris = inst.mesh.triangles();
  const auto& p = inst.mesh.nodes();
  for (std::size_t e = 0; e < tris.size(); ++e) {
    const auto& t = tris[e];
    const Eigen::Vector2d& a = p[static_cast<std::size_t>(t[0])];
    const Eigen::Vector2d& bb = p[static_cast<std::size_t>(t[1])];
    const Eigen::Vector2d& c = p[static_cast<std::size_t>(t[2])];
    const double det = (bb.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (bb.y() - a.y());
    const double area = 0.5 * std::abs(det);
    Eigen::Matrix<double, 2, 3> B;
    B << bb.y() - c.y(), c.y() - a.y(), a.y() - bb.y(),
         c.x() - bb.x(), a.x() - c.x(), bb.x() - a.x();
    B /= det;
    Eigen::Vector3d ue(inst.u[t[0]], inst.u[t[1]], inst.u[t[2]]);
    const double strain_sq = (B * ue).squaredNorm();
    const double v = inst.inputs.V_prev[static_cast<Eigen::Index>(e)];
    const double f = std::max(laws.f.f0 - laws.f.k * v, laws.f.f_inf);
    for (int i = 0; i < 3; ++i) {
      m[t[i]] += area / 3.0;
      b[t[i]] += area / 3.0 * 0.5 * slope * strain_sq;
      F[t[i]] += area / 3.0 * f;
      for (int j = 0; j < 3; ++j) K(t[i], t[j]) += area * B.col(i).dot(B.col(j));
    }
  }
  const double visc = inst.inputs.eps / inst.inputs.tau;

  const auto n = static_cast<Eigen::Index>(inst.free_nodes.size());
  OracleProblem prob;
  prob.Q.resize(n, n);
  prob.c.resize(n);
  prob.lo = Vector::Zero(n);
  prob.hi.resize(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const int ia = inst.free_nodes[static_cast<std::size_t>(a)];
    const double ap = inst.inputs.alpha_prev[ia];
    prob.hi[a] = ap;
    prob.c[a] = b[ia] - F[ia] - visc * m[ia] * ap;
    for (Eigen::Index c = 0; c < n; ++c) {
      const int ic = inst.free_nodes[static_cast<std::size_t>(c)];
      prob.Q(a, c) = K(ia, ic) + (ia == ic ? visc * m[ia] : 0.0);
    }
  }
  return prob;
}

OracleInstance random_oracle_instance(std::mt19937_64& rng, int n_free) {
  constexpr int nx = 3;
  constexpr int ny = 2;
  Mesh mesh = build_structured_mesh(nx, ny, Rectangle{}, {Side::left});
  const auto nn = static_cast<int>(mesh.num_nodes());
  const auto ne = static_cast<Eigen::Index>(mesh.num_triangles());
  if (n_free < 1 || n_free > std::min(nn, kOracleMaxFree)) {
    throw std::invalid_argument(fmt::format("cannot place {} free nodes", n_free));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  MaterialLaws laws;
  laws.mu.kind = ModulusLaw::Kind::linear;
  laws.mu.mu_min = uniform(0.5, 2.0);
  laws.mu.mu_max = laws.mu.mu_min + uniform(0.5, 20.0);
  laws.f.kind = FatigueLaw::Kind::linear_clamped;
  laws.f.f0 = std::exp(uniform(std::log(0.05), std::log(20.0)));
  laws.f.k = uniform(0.0, 1.0);
  laws.f.f_inf = laws.f.f0 * uniform(0.0, 0.9);

  std::vector<int> order(static_cast<std::size_t>(nn));
  std::iota(order.begin(), order.end(), 0);
  for (int i = nn - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<int> free(order.begin(), order.begin() + n_free);
  std::sort(free.begin(), free.end());

  StepInputs in;
  in.alpha_prev = Vector::Zero(nn);
  for (int i : free) in.alpha_prev[i] = uniform(0.2, 1.0);
  in.V_prev.resize(ne);
  for (Eigen::Index e = 0; e < ne; ++e) in.V_prev[e] = uniform(0.0, 2.0);
  in.zeta_prev = ZetaField::Zero(2, ne);
  in.eps = uniform(0.01, 0.3);
  in.tau = uniform(0.005, 0.05);

  const double amplitude = uniform(0.02, 0.6);
  Vector u(nn);
  for (int i = 0; i < nn; ++i) u[i] = amplitude * uniform(-1.0, 1.0);
  in.w_bc = u;

  return OracleInstance{std::move(mesh), laws, std::move(in), std::move(u), std::move(free)};
}

OracleBatchReport run_oracle_batch(std::uint64_t seed, int count, double tol, int min_free, int max_free,
                                   const SolverSettings& settings) {
  if (count < 0 || min_free < 1 || max_free < min_free || max_free > kOracleMaxFree) {
    throw std::invalid_argument("oracle batch: bad count or free-node range");
  }
  std::mt19937_64 rng(seed);
  OracleBatchReport rep;
  rep.count = count;
  std::string& out = rep.summary;
  for (int k = 0; k < count; ++k) {
    const int span = max_free - min_free + 1;
    const int n = min_free + static_cast<int>(rng() % static_cast<std::uint64_t>(span));
    const OracleInstance inst = random_oracle_instance(rng, n);
    const OracleResult ref = oracle_damage_step(build_oracle_problem(inst));

    const FeOperators ops = build_fe_operators(inst.mesh);
    const DamageSolveResult sol = solve_damage_subproblem(inst.u, inst.inputs, ops, inst.laws, settings);

    double diff = 0.0;
    int lower = 0;
    int upper = 0;
    std::vector<bool> is_free(static_cast<std::size_t>(ops.num_nodes()), false);
    for (std::size_t a = 0; a < inst.free_nodes.size(); ++a) {
      const int i = inst.free_nodes[a];
      is_free[static_cast<std::size_t>(i)] = true;
      const double x = ref.x[static_cast<Eigen::Index>(a)];
      diff = std::max(diff, std::abs(sol.alpha[i] - x));
      if (x <= 0.0) ++lower;
      else if (x >= inst.inputs.alpha_prev[i]) ++upper;
    }
    for (Eigen::Index i = 0; i < ops.num_nodes(); ++i) {
      if (!is_free[static_cast<std::size_t>(i)]) diff = std::max(diff, std::abs(sol.alpha[i]));
    }
    const bool match = diff <= tol;
    if (!match) ++rep.mismatches;
    rep.max_difference = std::max(rep.max_difference, diff);
    out += fmt::format("instance {:4d} free={} lower={} upper={} interior={} diff={:.3e} {}\n", k, n, lower, upper,
                       n - lower - upper, diff, match ? "match" : "MISMATCH");
  }
  out += fmt::format("oracle batch seed={} count={} tol={:.1e} mismatches={} max_diff={:.3e}\n", seed, count, tol,
                     rep.mismatches, rep.max_difference);
  return rep;
}

}  // namespace fatigue
