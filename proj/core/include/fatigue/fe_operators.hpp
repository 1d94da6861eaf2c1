#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fatigue/mesh.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

using ElementGradient = Eigen::Matrix<double, 2, 3>;

/// P1 operators on a fixed mesh: stiffness K_ij = int grad(phi_i).grad(phi_j),
/// lumped mass m_i = sum_{e containing i} |T_e|/3, and the per-element map
/// from the three vertex values to the constant element gradient.
struct FeOperators {
  SparseMatrix stiffness;
  Vector lumped_mass;
  std::vector<ElementGradient> elem_grad;
  std::vector<std::array<int, 3>> elements;
  std::vector<double> areas;
  std::vector<int> dirichlet_nodes;
  std::vector<bool> dirichlet_mask;

  Eigen::Index num_nodes() const { return lumped_mass.size(); }
  Eigen::Index num_elements() const { return static_cast<Eigen::Index>(elements.size()); }
  double total_area() const { return lumped_mass.sum(); }
};

FeOperators build_fe_operators(const Mesh& mesh);

/// Constant gradient of the P1 interpolant of `field` on each triangle.
GradField element_gradients(const FeOperators& ops, const Vector& field);

/// Mean of the three vertex values on each triangle.
Vector element_average(const FeOperators& ops, const Vector& field);

/// Scatters a per-element density to the vertices with weight |T_e|/3.
Vector lump_to_nodes(const FeOperators& ops, const Vector& element_density);

/// sum_e c_e |T_e| B_e^T B_e, i.e. the stiffness of div(c grad u) with an
/// element-constant coefficient.
SparseMatrix assemble_weighted_stiffness(const FeOperators& ops, const Vector& element_coeff);

/// Lumped-mass L2 inner product and norm.
double lumped_dot(const FeOperators& ops, const Vector& a, const Vector& b);
double lumped_norm(const FeOperators& ops, const Vector& a);

}  // namespace fatigue
