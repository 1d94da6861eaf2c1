#include "fatigue/material_laws.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace fatigue {

namespace {

double smoothstep(double x) { return x * x * (3.0 - 2.0 * x); }
double smoothstep_slope(double x) { return 6.0 * x * (1.0 - x); }

}  // namespace

void MaterialLaws::validate() const {
  if (!(mu.mu_min > 0.0)) throw std::invalid_argument(fmt::format("mu_min must be > 0 (got {})", mu.mu_min));
  if (!(mu.mu_max >= mu.mu_min)) throw std::invalid_argument("mu_max must be >= mu_min");
  if (!(f.f0 > 0.0)) throw std::invalid_argument(fmt::format("f0 must be > 0 (got {})", f.f0));
  if (!(f.k >= 0.0)) throw std::invalid_argument("fatigue slope k must be >= 0");
  if (!(f.f_inf >= 0.0) || f.f_inf > f.f0) throw std::invalid_argument("f_inf must lie in [0, f0]");
  if (g.kind == CumulationWeight::Kind::custom_smoothstep && !(g.g_max >= g.g_min)) {
    throw std::invalid_argument("g_max must be >= g_min");
  }
  if (zeta.kind == ZetaVariant::Kind::scalar_power && !(zeta.theta >= 1.0 && zeta.theta <= kThetaMax)) {
    throw std::invalid_argument(fmt::format("theta must lie in [1, {}] (got {})", kThetaMax, zeta.theta));
  }
}

double MaterialLaws::f_lipschitz() const {
  switch (f.kind) {
    case FatigueLaw::Kind::linear_clamped: return f.k;
    case FatigueLaw::Kind::exponential: return f.k * (f.f0 - f.f_inf);
  }
  return 0.0;
}

ValueSlope eval_mu(const MaterialLaws& laws, double alpha) {
  const double span = laws.mu.mu_max - laws.mu.mu_min;
  const double a = std::clamp(alpha, 0.0, 1.0);
  switch (laws.mu.kind) {
    case ModulusLaw::Kind::smoothstep:
      return {laws.mu.mu_min + span * smoothstep(a), span * smoothstep_slope(a)};
    case ModulusLaw::Kind::linear:
      // Slope kept on the closed interval so the damage subproblem stays a
      // quadratic on the whole admissible box.
      return {laws.mu.mu_min + span * a, (alpha < 0.0 || alpha > 1.0) ? 0.0 : span};
  }
  return {0.0, 0.0};
}

double mu_curvature(const MaterialLaws& laws, double alpha) {
  if (laws.mu.kind != ModulusLaw::Kind::smoothstep || alpha <= 0.0 || alpha >= 1.0) return 0.0;
  return (laws.mu.mu_max - laws.mu.mu_min) * (6.0 - 12.0 * alpha);
}

ValueSlope eval_f(const MaterialLaws& laws, double cumulation) {
  if (cumulation < 0.0) throw std::invalid_argument(fmt::format("negative cumulation {}", cumulation));
  const auto& f = laws.f;
  switch (f.kind) {
    case FatigueLaw::Kind::linear_clamped: {
      const double raw = f.f0 - f.k * cumulation;
      return raw > f.f_inf ? ValueSlope{raw, -f.k} : ValueSlope{f.f_inf, 0.0};
    }
    case FatigueLaw::Kind::exponential: {
      const double decay = std::exp(-f.k * cumulation);
      return {f.f_inf + (f.f0 - f.f_inf) * decay, -f.k * (f.f0 - f.f_inf) * decay};
    }
  }
  return {0.0, 0.0};
}

ValueSlope eval_g(const MaterialLaws& laws, double alpha) {
  switch (laws.g.kind) {
    case CumulationWeight::Kind::one: return {1.0, 0.0};
    case CumulationWeight::Kind::equals_mu: return eval_mu(laws, alpha);
    case CumulationWeight::Kind::custom_smoothstep: {
      const double a = std::clamp(alpha, 0.0, 1.0);
      const double span = laws.g.g_max - laws.g.g_min;
      return {laws.g.g_min + span * smoothstep(a), span * smoothstep_slope(a)};
    }
  }
  return {0.0, 0.0};
}

Eigen::VectorXd eval_g_zeta(const MaterialLaws& laws, double alpha_elem, const Eigen::Vector2d& grad_u_elem) {
  const double g = eval_g(laws, alpha_elem).value;
  if (laws.zeta.kind == ZetaVariant::Kind::vector) return g * grad_u_elem;
  Eigen::VectorXd z(1);
  z[0] = g * std::pow(grad_u_elem.norm(), laws.zeta.theta);
  return z;
}

}  // namespace fatigue
