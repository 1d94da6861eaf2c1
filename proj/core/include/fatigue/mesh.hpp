#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace fatigue {

enum class Side { left, right, bottom, top };
enum class BoundaryTag { dirichlet, neumann };

Side parse_side(std::string_view name);
std::string_view to_string(Side side);

struct Rectangle {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
};

struct BoundaryEdge {
  std::array<int, 2> nodes;
  Side side;
  BoundaryTag tag;
};

/// Triangulated reference configuration with a Dirichlet/Neumann partition
/// of the boundary. Immutable once built; every triangle is counterclockwise
/// with strictly positive area.
class Mesh {
 public:
  Mesh(std::vector<Eigen::Vector2d> nodes, std::vector<std::array<int, 3>> triangles,
       std::vector<BoundaryEdge> boundary_edges);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<double>& areas() const { return areas_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  /// Sorted, unique.
  const std::vector<int>& dirichlet_nodes() const { return dirichlet_nodes_; }
  bool is_dirichlet(int node) const { return dirichlet_mask_[static_cast<std::size_t>(node)]; }

  double total_area() const;

 private:
  std::vector<Eigen::Vector2d> nodes_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<double> areas_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<int> dirichlet_nodes_;
  std::vector<bool> dirichlet_mask_;
};

/// Structured nx-by-ny grid of the rectangle, each cell cut along its
/// (x0,y0)-(x1,y1) diagonal into two right triangles. Sides listed in
/// `dirichlet_sides` are Dirichlet, the rest Neumann.
Mesh build_structured_mesh(int nx, int ny, const Rectangle& domain,
                           const std::set<Side>& dirichlet_sides);

}  // namespace fatigue
