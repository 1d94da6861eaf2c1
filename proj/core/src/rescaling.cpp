#include "fatigue/rescaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "fatigue/diagnostics.hpp"
#include "fatigue/energy.hpp"
#include "fatigue/evolution.hpp"
#include "fatigue/variation.hpp"

namespace fatigue {

double RescaledEvolution::t_of_s(double r) const {
  if (s.empty()) throw std::logic_error("empty rescaled evolution");
  if (r <= s.front()) return t.front();
  if (r >= s.back()) return t.back();
  const auto it = std::upper_bound(s.begin(), s.end(), r);
  const auto j = static_cast<std::size_t>(it - s.begin());
  const double w = (r - s[j - 1]) / (s[j] - s[j - 1]);
  return t[j - 1] + w * (t[j] - t[j - 1]);
}

double h1_norm(const FeOperators& ops, const Vector& a) {
  return std::sqrt(lumped_dot(ops, a, a) + a.dot(ops.stiffness * a));
}

double w1p_norm(const FeOperators& ops, const Vector& a, double p) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) sum += ops.lumped_mass[i] * std::pow(std::abs(a[i]), p);
  const GradField g = element_gradients(ops, a);
  for (Eigen::Index e = 0; e < g.cols(); ++e) {
    sum += ops.areas[static_cast<std::size_t>(e)] * std::pow(g.col(e).norm(), p);
  }
  return std::pow(sum, 1.0 / p);
}

namespace {

// Nodal G - F(V_prev) at a sample.
Vector driving_force(const Vector& alpha, const Vector& u, const Vector& V_prev, const FeOperators& ops,
                     const MaterialLaws& laws) {
  const GradField grad_u = element_gradients(ops, u);
  return grad_alpha_energy(alpha, grad_u, ops, laws) - dissipation_load(V_prev, ops, laws);
}

}  // namespace

RescaledEvolution arc_length_rescale(const EvolutionTrace& trace, const FeOperators& ops, double p, double delta) {
  if (!(p >= 2.0)) throw std::invalid_argument(fmt::format("norm exponent p must be >= 2 (got {})", p));
  RescaledEvolution r;
  r.eps = trace.eps;
  r.tau = trace.tau;
  r.p = p;
  r.delta = delta;
  const int n = trace.completed();
  r.s.push_back(0.0);
  r.t.push_back(0.0);
  r.alpha.push_back(trace.alpha0);
  r.u.push_back(trace.u0);
  r.V.push_back(trace.V0);
  r.zeta.push_back(trace.zeta0);
  r.psi.push_back(stability_psi(trace.alpha0, trace.u0, trace.V0, ops, trace.laws));
  for (int j = 1; j <= n; ++j) {
    const StepRecord& rec = trace.record(j);
    const double da = h1_norm(ops, rec.alpha - trace.alpha(j - 1));
    const double du = w1p_norm(ops, rec.u - trace.u(j - 1), p);
    const double dt = trace.tau;
    r.dalpha_h1.push_back(da);
    r.du_w1p.push_back(du);
    r.ds.push_back(dt + da + du);
    r.s.push_back(r.s.back() + r.ds.back());
    r.t.push_back(trace.time(j));
    r.alpha.push_back(rec.alpha);
    r.u.push_back(rec.u);
    r.V.push_back(rec.V);
    r.zeta.push_back(rec.zeta);
    r.psi.push_back(rec.psi);
  }
  r.S = r.s.back();

  for (int j = 1; j <= n;) {
    if (!r.on_plateau(j)) {
      ++j;
      continue;
    }
    int b = j;
    while (b + 1 <= n && r.on_plateau(b + 1)) ++b;
    r.plateaus.push_back({j - 1, b, r.s[static_cast<std::size_t>(j - 1)], r.s[static_cast<std::size_t>(b)]});
    j = b + 1;
  }
  return r;
}

SweepEntry sweep_entry(const RescaledEvolution& r, const MaterialLaws& laws) {
  SweepEntry e;
  e.eps = r.eps;
  e.S = r.S;
  for (int j = 1; j < r.samples(); ++j) {
    const double ds = r.ds[static_cast<std::size_t>(j - 1)];
    if (r.on_plateau(j)) {
      e.plateau_measure += ds;
    } else {
      e.instability_measure += r.psi[static_cast<std::size_t>(j)] * ds;
    }
  }

  // Coarse partition: drop samples strictly inside a plateau.
  std::vector<bool> interior(static_cast<std::size_t>(r.samples()), false);
  for (const auto& pl : r.plateaus)
    for (int j = pl.first_sample + 1; j < pl.last_sample; ++j) interior[static_cast<std::size_t>(j)] = true;

  const Vector& v0 = r.V.front();
  Vector coarse = Vector::Zero(v0.size());
  int last_kept = 0;
  for (int j = 1; j < r.samples(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const Vector candidate =
        coarse + (r.zeta[uj] - r.zeta[static_cast<std::size_t>(last_kept)]).colwise().norm().transpose();
    for (Eigen::Index el = 0; el < v0.size(); ++el) {
      const double gap = eval_f(laws, v0[el] + candidate[el]).value - eval_f(laws, r.V[uj][el]).value;
      e.fatigue_gap = std::max(e.fatigue_gap, gap);
    }
    if (!interior[uj]) {
      coarse = candidate;
      last_kept = j;
    }
  }
  return e;
}

SweepReport sweep_compare(const std::vector<RescaledEvolution>& rescaled, const MaterialLaws& laws) {
  if (rescaled.empty()) throw std::invalid_argument("sweep comparison needs at least one entry");
  for (const auto& r : rescaled) {
    if (r.p != rescaled.front().p || r.delta != rescaled.front().delta) {
      throw std::invalid_argument("sweep entries use different norm exponents or plateau thresholds");
    }
  }
  SweepReport rep;
  for (const auto& r : rescaled) rep.entries.push_back(sweep_entry(r, laws));
  std::stable_sort(rep.entries.begin(), rep.entries.end(),
                   [](const SweepEntry& a, const SweepEntry& b) { return a.eps > b.eps; });
  double s_min = rep.entries.front().S;
  double s_max = s_min;
  for (const auto& e : rep.entries) {
    s_min = std::min(s_min, e.S);
    s_max = std::max(s_max, e.S);
  }
  rep.S_ratio = s_max / s_min;
  if (rep.entries.size() >= 2) {
    bool nonincreasing = true;
    bool strict = true;
    for (std::size_t j = 1; j < rep.entries.size(); ++j) {
      const double prev = rep.entries[j - 1].instability_measure;
      const double cur = rep.entries[j].instability_measure;
      if (cur > prev) nonincreasing = false;
      if (!(cur < prev)) strict = false;
    }
    rep.instability_nonincreasing = nonincreasing;
    rep.instability_strictly_decreasing = strict;
  }
  return rep;
}

JumpResult jump_profile(const RescaledEvolution& r, const FeOperators& ops, const MaterialLaws& laws, int first,
                        int last, double psi_floor) {
  JumpResult out;
  if (first < 0 || last <= first || last >= r.samples()) {
    out.refusal = fmt::format("sample range [{}, {}] invalid", first, last);
    return out;
  }
  for (int j = first; j <= last; ++j) {
    if (!(r.psi[static_cast<std::size_t>(j)] > psi_floor)) {
      out.refusal = fmt::format("Psi = {} at sample {} is at or below the floor {}", r.psi[static_cast<std::size_t>(j)],
                                j, psi_floor);
      return out;
    }
  }
  for (int j = first + 1; j <= last; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if ((r.alpha[uj] - r.alpha[uj - 1]).cwiseAbs().maxCoeff() == 0.0) {
      out.refusal = fmt::format("alpha does not move between samples {} and {}", j - 1, j);
      return out;
    }
  }

  const auto force = [&](int j) {
    const auto uj = static_cast<std::size_t>(j);
    const Vector& v_prev = j == 0 ? r.V[0] : r.V[uj - 1];
    return driving_force(r.alpha[uj], r.u[uj], v_prev, ops, laws);
  };

  JumpProfile prof;
  const double s_mid = 0.5 * (r.s[static_cast<std::size_t>(first)] + r.s[static_cast<std::size_t>(last)]);
  prof.s.push_back(r.s[static_cast<std::size_t>(first)]);
  prof.rho.push_back(0.0);
  prof.alpha_sharp.push_back(r.alpha[static_cast<std::size_t>(first)]);
  Vector d_prev = force(first);
  for (int j = first + 1; j <= last; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const Vector da = r.alpha[uj] - r.alpha[uj - 1];
    const double psi_mid = 0.5 * (r.psi[uj - 1] + r.psi[uj]);
    const double dr = lumped_norm(ops, da) / psi_mid;
    prof.s.push_back(r.s[uj]);
    prof.rho.push_back(prof.rho.back() + dr);
    prof.alpha_sharp.push_back(r.alpha[uj]);

    const Vector d_cur = force(j);
    const Vector rate = da / dr;
    const double a = (0.5 * (d_prev + d_cur)).dot(rate);
    const double b = lumped_dot(ops, rate, rate);
    const double res = std::abs(a + b) / (std::abs(a) + b);
    prof.residual.push_back(res);
    prof.max_residual = std::max(prof.max_residual, res);
    d_prev = d_cur;
  }
  // rho is defined up to a constant; pin it to zero at the middle of the interval.
  double offset = 0.0;
  for (std::size_t j = 1; j < prof.s.size(); ++j) {
    if (prof.s[j] >= s_mid) {
      const double w = (s_mid - prof.s[j - 1]) / (prof.s[j] - prof.s[j - 1]);
      offset = prof.rho[j - 1] + w * (prof.rho[j] - prof.rho[j - 1]);
      break;
    }
  }
  for (double& v : prof.rho) v -= offset;
  out.profile = std::move(prof);
  return out;
}

}  // namespace fatigue
