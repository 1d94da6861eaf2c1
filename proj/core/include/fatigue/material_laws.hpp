#pragma once

#include <Eigen/Core>

namespace fatigue {

/// Shear modulus mu(alpha). Both kinds are evaluated on clamp(alpha, 0, 1),
/// so mu is constant outside [0, 1].
struct ModulusLaw {
  enum class Kind { smoothstep, linear };
  Kind kind = Kind::smoothstep;
  double mu_min = 1.0;
  double mu_max = 10.0;
};

/// Fatigue weight f(V) multiplying the damage dissipation.
///   linear_clamped: f(V) = max(f0 - k V, f_inf)
///   exponential:    f(V) = f_inf + (f0 - f_inf) exp(-k V)
struct FatigueLaw {
  enum class Kind { linear_clamped, exponential };
  Kind kind = Kind::linear_clamped;
  double f0 = 1.0;
  double k = 0.5;
  double f_inf = 0.1;
};

/// Weight g(alpha) in zeta = g(alpha) grad u (or g(alpha) |grad u|^theta).
struct CumulationWeight {
  enum class Kind { one, equals_mu, custom_smoothstep };
  Kind kind = Kind::one;
  double g_min = 1.0;
  double g_max = 1.0;
};

struct ZetaVariant {
  enum class Kind { vector, scalar_power };
  Kind kind = Kind::vector;
  double theta = 1.0;
};

inline constexpr double kThetaMax = 4.0;

struct MaterialLaws {
  ModulusLaw mu;
  FatigueLaw f;
  CumulationWeight g;
  ZetaVariant zeta;

  /// Throws std::invalid_argument when a law violates its structural assumptions.
  void validate() const;
  /// Global Lipschitz constant of f on [0, inf).
  double f_lipschitz() const;
  /// Rows of a zeta field: 2 (vector) or 1 (scalar).
  int zeta_rows() const { return zeta.kind == ZetaVariant::Kind::vector ? 2 : 1; }
};

struct ValueSlope {
  double value;
  double slope;
};

ValueSlope eval_mu(const MaterialLaws& laws, double alpha);
/// Second derivative of mu where it exists; 0 at and beyond the clamp points.
double mu_curvature(const MaterialLaws& laws, double alpha);
/// Throws std::invalid_argument for negative V.
ValueSlope eval_f(const MaterialLaws& laws, double cumulation);
ValueSlope eval_g(const MaterialLaws& laws, double alpha);

/// zeta on one element: g(alpha) * grad_u (vector variant, 2 entries) or
/// g(alpha) * |grad_u|^theta (scalar variant, 1 entry).
Eigen::VectorXd eval_g_zeta(const MaterialLaws& laws, double alpha_elem, const Eigen::Vector2d& grad_u_elem);

}  // namespace fatigue
