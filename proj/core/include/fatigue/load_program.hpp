#pragma once

#include <string>
#include <string_view>

#include "fatigue/mesh.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

/// Scalar amplitude W(t) of the boundary datum.
///   ramp:     W(t) = rate * t
///   triangle: W(t) = amplitude * (1 - |2 frac(t / period) - 1|), starts at 0
///   sine:     W(t) = amplitude * sin(2 pi t / period)
struct Schedule {
  enum class Kind { ramp, triangle, sine };
  Kind kind = Kind::triangle;
  double rate = 1.0;
  double amplitude = 1.0;
  double period = 1.0;

  double value(double t) const;
  /// Throws std::invalid_argument on a nonpositive period.
  void validate() const;
};

enum class ProfileKind { x, y, one };

ProfileKind parse_profile(std::string_view name);
std::string_view to_string(ProfileKind kind);
Schedule::Kind parse_schedule(std::string_view name);
std::string_view to_string(Schedule::Kind kind);

/// Nodal values of the spatial profile phi.
Vector spatial_profile(const Mesh& mesh, ProfileKind kind);

/// w(t) = W(t) * phi on the whole mesh; only Dirichlet entries act as data.
struct LoadProgram {
  Vector profile;
  Schedule schedule;
  double T = 1.0;

  Vector w(double t) const { return schedule.value(t) * profile; }
};

}  // namespace fatigue
