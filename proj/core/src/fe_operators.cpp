#include "fatigue/fe_operators.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace fatigue {

FeOperators build_fe_operators(const Mesh& mesh) {
  FeOperators ops;
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  const auto& nodes = mesh.nodes();
  ops.elements = mesh.triangles();
  ops.areas = mesh.areas();
  ops.dirichlet_nodes = mesh.dirichlet_nodes();
  ops.dirichlet_mask.assign(mesh.num_nodes(), false);
  for (int v : ops.dirichlet_nodes) ops.dirichlet_mask[static_cast<std::size_t>(v)] = true;

  ops.lumped_mass = Vector::Zero(n);
  ops.elem_grad.reserve(ops.elements.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * ops.elements.size());

  for (std::size_t e = 0; e < ops.elements.size(); ++e) {
    const auto& t = ops.elements[e];
    const double area = ops.areas[e];
    if (!(area > 1e-14)) throw std::invalid_argument(fmt::format("degenerate triangle {} (area {})", e, area));

    ElementGradient b;
    for (int a = 0; a < 3; ++a) {
      const auto& pb = nodes[t[(a + 1) % 3]];
      const auto& pc = nodes[t[(a + 2) % 3]];
      b(0, a) = (pb.y() - pc.y()) / (2.0 * area);
      b(1, a) = (pc.x() - pb.x()) / (2.0 * area);
    }
    ops.elem_grad.push_back(b);

    const Eigen::Matrix3d ke = area * b.transpose() * b;
    for (int a = 0; a < 3; ++a) {
      ops.lumped_mass[t[a]] += area / 3.0;
      for (int c = 0; c < 3; ++c) triplets.emplace_back(t[a], t[c], ke(a, c));
    }
  }
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  return ops;
}

GradField element_gradients(const FeOperators& ops, const Vector& field) {
  if (field.size() != ops.num_nodes()) {
    throw std::invalid_argument(
        fmt::format("field has {} entries, mesh has {} nodes", field.size(), ops.num_nodes()));
  }
  GradField g(2, ops.num_elements());
  for (Eigen::Index e = 0; e < ops.num_elements(); ++e) {
    const auto& t = ops.elements[static_cast<std::size_t>(e)];
    const Eigen::Vector3d local(field[t[0]], field[t[1]], field[t[2]]);
    g.col(e) = ops.elem_grad[static_cast<std::size_t>(e)] * local;
  }
  return g;
}

Vector element_average(const FeOperators& ops, const Vector& field) {
  Vector avg(ops.num_elements());
  for (Eigen::Index e = 0; e < ops.num_elements(); ++e) {
    const auto& t = ops.elements[static_cast<std::size_t>(e)];
    avg[e] = (field[t[0]] + field[t[1]] + field[t[2]]) / 3.0;
  }
  return avg;
}

Vector lump_to_nodes(const FeOperators& ops, const Vector& element_density) {
  Vector out = Vector::Zero(ops.num_nodes());
  for (Eigen::Index e = 0; e < ops.num_elements(); ++e) {
    const auto i = static_cast<std::size_t>(e);
    const double w = ops.areas[i] / 3.0 * element_density[e];
    for (int v : ops.elements[i]) out[v] += w;
  }
  return out;
}

SparseMatrix assemble_weighted_stiffness(const FeOperators& ops, const Vector& element_coeff) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * ops.elements.size());
  for (std::size_t e = 0; e < ops.elements.size(); ++e) {
    const auto& b = ops.elem_grad[e];
    const Eigen::Matrix3d ke = element_coeff[static_cast<Eigen::Index>(e)] * ops.areas[e] * b.transpose() * b;
    const auto& t = ops.elements[e];
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) triplets.emplace_back(t[a], t[c], ke(a, c));
  }
  SparseMatrix a(ops.num_nodes(), ops.num_nodes());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

double lumped_dot(const FeOperators& ops, const Vector& a, const Vector& b) {
  return (ops.lumped_mass.array() * a.array() * b.array()).sum();
}

double lumped_norm(const FeOperators& ops, const Vector& a) { return std::sqrt(lumped_dot(ops, a, a)); }

}  // namespace fatigue
