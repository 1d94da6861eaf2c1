#include "fatigue/mesh.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace fatigue {

namespace {

constexpr double kAreaTolerance = 1e-14;

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

}  // namespace

Side parse_side(std::string_view name) {
  if (name == "left") return Side::left;
  if (name == "right") return Side::right;
  if (name == "bottom") return Side::bottom;
  if (name == "top") return Side::top;
  throw std::invalid_argument(fmt::format("unknown boundary side '{}'", name));
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::bottom: return "bottom";
    case Side::top: return "top";
  }
  return "?";
}

Mesh::Mesh(std::vector<Eigen::Vector2d> nodes, std::vector<std::array<int, 3>> triangles,
           std::vector<BoundaryEdge> boundary_edges)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)),
      dirichlet_mask_(nodes_.size(), false) {
  const int n = static_cast<int>(nodes_.size());
  areas_.reserve(triangles_.size());
  for (std::size_t e = 0; e < triangles_.size(); ++e) {
    const auto& t = triangles_[e];
    for (int v : t) {
      if (v < 0 || v >= n) throw std::invalid_argument(fmt::format("triangle {} references node {}", e, v));
    }
    const double a = signed_area(nodes_[t[0]], nodes_[t[1]], nodes_[t[2]]);
    if (!(a > kAreaTolerance)) {
      throw std::invalid_argument(fmt::format("triangle {} is degenerate or clockwise (area {})", e, a));
    }
    areas_.push_back(a);
  }

  // Every topological boundary edge (used by exactly one triangle) must be tagged once.
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::map<std::pair<int, int>, int> tagged;
  for (const auto& be : boundary_edges_) {
    const auto key = std::make_pair(std::min(be.nodes[0], be.nodes[1]), std::max(be.nodes[0], be.nodes[1]));
    auto it = edge_use.find(key);
    if (it == edge_use.end() || it->second != 1) {
      throw std::invalid_argument(fmt::format("edge ({},{}) is not a boundary edge", key.first, key.second));
    }
    if (++tagged[key] > 1) {
      throw std::invalid_argument(fmt::format("boundary edge ({},{}) tagged twice", key.first, key.second));
    }
  }
  for (const auto& [key, count] : edge_use) {
    if (count == 1 && !tagged.count(key)) {
      throw std::invalid_argument(fmt::format("boundary edge ({},{}) is untagged", key.first, key.second));
    }
  }

  for (const auto& be : boundary_edges_) {
    if (be.tag != BoundaryTag::dirichlet) continue;
    for (int v : be.nodes) dirichlet_mask_[static_cast<std::size_t>(v)] = true;
  }
  for (int v = 0; v < n; ++v) {
    if (dirichlet_mask_[static_cast<std::size_t>(v)]) dirichlet_nodes_.push_back(v);
  }
  if (dirichlet_nodes_.empty()) throw std::invalid_argument("mesh has no Dirichlet nodes");
}

double Mesh::total_area() const { return std::accumulate(areas_.begin(), areas_.end(), 0.0); }

Mesh build_structured_mesh(int nx, int ny, const Rectangle& domain, const std::set<Side>& dirichlet_sides) {
  if (nx < 1 || ny < 1) throw std::invalid_argument(fmt::format("cell counts must be >= 1 (got {}x{})", nx, ny));
  if (dirichlet_sides.empty()) throw std::invalid_argument("at least one Dirichlet side is required");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) throw std::invalid_argument("empty rectangle");

  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Eigen::Vector2d> nodes;
  nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  const double hx = (domain.x1 - domain.x0) / nx;
  const double hy = (domain.y1 - domain.y0) / ny;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Pin the far sides to the exact extents.
      const double x = (i == nx) ? domain.x1 : domain.x0 + i * hx;
      const double y = (j == ny) ? domain.y1 : domain.y0 + j * hy;
      nodes.emplace_back(x, y);
    }
  }

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j), n10 = id(i + 1, j), n01 = id(i, j + 1), n11 = id(i + 1, j + 1);
      triangles.push_back({n00, n10, n11});
      triangles.push_back({n00, n11, n01});
    }
  }

  std::vector<BoundaryEdge> edges;
  const auto tag = [&](Side s) {
    return dirichlet_sides.count(s) ? BoundaryTag::dirichlet : BoundaryTag::neumann;
  };
  for (int i = 0; i < nx; ++i) {
    edges.push_back({{id(i, 0), id(i + 1, 0)}, Side::bottom, tag(Side::bottom)});
    edges.push_back({{id(i + 1, ny), id(i, ny)}, Side::top, tag(Side::top)});
  }
  for (int j = 0; j < ny; ++j) {
    edges.push_back({{id(nx, j), id(nx, j + 1)}, Side::right, tag(Side::right)});
    edges.push_back({{id(0, j + 1), id(0, j)}, Side::left, tag(Side::left)});
  }
  return Mesh(std::move(nodes), std::move(triangles), std::move(edges));
}

}  // namespace fatigue
