#include "fatigue/load_program.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace fatigue {

double Schedule::value(double t) const {
  switch (kind) {
    case Kind::ramp: return rate * t;
    case Kind::triangle: {
      const double x = t / period;
      const double frac = x - std::floor(x);
      return amplitude * (1.0 - std::abs(2.0 * frac - 1.0));
    }
    case Kind::sine: return amplitude * std::sin(2.0 * std::numbers::pi * t / period);
  }
  return 0.0;
}

void Schedule::validate() const {
  if (kind != Kind::ramp && !(period > 0.0)) {
    throw std::invalid_argument(fmt::format("load period must be positive (got {})", period));
  }
}

ProfileKind parse_profile(std::string_view name) {
  if (name == "x") return ProfileKind::x;
  if (name == "y") return ProfileKind::y;
  if (name == "one") return ProfileKind::one;
  throw std::invalid_argument(fmt::format("unknown load profile '{}' (expected x, y or one)", name));
}

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::x: return "x";
    case ProfileKind::y: return "y";
    case ProfileKind::one: return "one";
  }
  return "?";
}

Schedule::Kind parse_schedule(std::string_view name) {
  if (name == "ramp") return Schedule::Kind::ramp;
  if (name == "triangle") return Schedule::Kind::triangle;
  if (name == "sine") return Schedule::Kind::sine;
  throw std::invalid_argument(fmt::format("unknown schedule '{}' (expected ramp, triangle or sine)", name));
}

std::string_view to_string(Schedule::Kind kind) {
  switch (kind) {
    case Schedule::Kind::ramp: return "ramp";
    case Schedule::Kind::triangle: return "triangle";
    case Schedule::Kind::sine: return "sine";
  }
  return "?";
}

Vector spatial_profile(const Mesh& mesh, ProfileKind kind) {
  Vector phi(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const auto& p = mesh.nodes()[i];
    const auto k = static_cast<Eigen::Index>(i);
    switch (kind) {
      case ProfileKind::x: phi[k] = p.x(); break;
      case ProfileKind::y: phi[k] = p.y(); break;
      case ProfileKind::one: phi[k] = 1.0; break;
    }
  }
  return phi;
}

}  // namespace fatigue
