#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fatigue/fe_operators.hpp"
#include "fatigue/material_laws.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

struct EvolutionTrace;

/// Maximal run of consecutive increments with discrete dt/ds <= delta.
struct PlateauInterval {
  int first_sample = 0;
  int last_sample = 0;
  double s_begin = 0.0;
  double s_end = 0.0;
};

/// A trace reparametrised by arc length. Sample j sits at grid time t_j; the
/// increment into sample j has ds = dt + |dalpha|_H1 + |du|_W1p.
struct RescaledEvolution {
  double eps = 0.0;
  double tau = 0.0;
  double p = 4.0;
  double delta = 0.1;
  std::vector<double> s;
  std::vector<double> t;
  std::vector<Vector> alpha;
  std::vector<Vector> u;
  std::vector<Vector> V;
  std::vector<ZetaField> zeta;
  /// Psi at sample j > 0 uses f(V_{j-1}); sample 0 uses f(V_0).
  std::vector<double> psi;
  /// Per increment (index j-1 for the increment into sample j).
  std::vector<double> ds;
  std::vector<double> dalpha_h1;
  std::vector<double> du_w1p;
  std::vector<PlateauInterval> plateaus;
  double S = 0.0;

  int samples() const { return static_cast<int>(s.size()); }
  /// Discrete dt/ds of the increment into sample j (j >= 1).
  double tdot(int j) const { return tau / ds[static_cast<std::size_t>(j - 1)]; }
  bool on_plateau(int j) const { return tdot(j) <= delta; }
  /// Physical time at arc length r, affine between samples.
  double t_of_s(double r) const;
};

/// sqrt(a^T M a + a^T K a).
double h1_norm(const FeOperators& ops, const Vector& a);
/// (sum_i m_i |a_i|^p + sum_e |T_e| |grad a_e|^p)^(1/p).
double w1p_norm(const FeOperators& ops, const Vector& a, double p);

/// Throws std::invalid_argument for p < 2.
RescaledEvolution arc_length_rescale(const EvolutionTrace& trace, const FeOperators& ops, double p = 4.0,
                                     double delta = 0.1);

struct SweepEntry {
  double eps = 0.0;
  double S = 0.0;
  double plateau_measure = 0.0;
  double instability_measure = 0.0;
  /// max over samples and elements of f(coarse variation) - f(V); >= 0.
  double fatigue_gap = 0.0;
};

struct SweepReport {
  /// Sorted by decreasing eps.
  std::vector<SweepEntry> entries;
  /// Absent for a single entry.
  std::optional<bool> instability_nonincreasing;
  std::optional<bool> instability_strictly_decreasing;
  /// max S / min S.
  double S_ratio = 1.0;
};

SweepEntry sweep_entry(const RescaledEvolution& r, const MaterialLaws& laws);
/// Throws std::invalid_argument on an empty list or mismatched delta/p.
SweepReport sweep_compare(const std::vector<RescaledEvolution>& rescaled, const MaterialLaws& laws);

struct JumpProfile {
  std::vector<double> s;
  std::vector<double> rho;
  std::vector<Vector> alpha_sharp;
  /// Per increment: |<G - F, a'> + |a'|^2| / (|<G - F, a'>| + |a'|^2) at the midpoint.
  std::vector<double> residual;
  double max_residual = 0.0;
};

struct JumpResult {
  std::optional<JumpProfile> profile;
  std::string refusal;
};

/// Profile over samples [first, last] of a plateau. Refused when some Psi is
/// at or below psi_floor or some increment leaves alpha unchanged.
JumpResult jump_profile(const RescaledEvolution& r, const FeOperators& ops, const MaterialLaws& laws, int first,
                        int last, double psi_floor = 1e-12);

}  // namespace fatigue
