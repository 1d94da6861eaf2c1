#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "fatigue/energy.hpp"
#include "fatigue/fe_operators.hpp"
#include "fatigue/material_laws.hpp"
#include "fatigue/mesh.hpp"

namespace fatigue::testing {

inline Mesh unit_mesh(int nx, int ny, std::set<Side> sides = {Side::left, Side::right}) {
  return build_structured_mesh(nx, ny, Rectangle{}, sides);
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

// Element gradient from vertex coordinates, written out independently of FeOperators.
inline Eigen::Vector2d plain_gradient(const Mesh& mesh, int e, const Vector& field) {
  const auto& t = mesh.triangles()[static_cast<std::size_t>(e)];
  const auto& p0 = mesh.nodes()[static_cast<std::size_t>(t[0])];
  const auto& p1 = mesh.nodes()[static_cast<std::size_t>(t[1])];
  const auto& p2 = mesh.nodes()[static_cast<std::size_t>(t[2])];
  Eigen::Matrix2d J;
  J << p1.x() - p0.x(), p2.x() - p0.x(), p1.y() - p0.y(), p2.y() - p0.y();
  const Eigen::Vector2d dv(field[t[1]] - field[t[0]], field[t[2]] - field[t[0]]);
  return J.transpose().inverse() * dv;
}

inline double plain_area(const Mesh& mesh, int e) {
  const auto& t = mesh.triangles()[static_cast<std::size_t>(e)];
  const auto& p0 = mesh.nodes()[static_cast<std::size_t>(t[0])];
  const auto& p1 = mesh.nodes()[static_cast<std::size_t>(t[1])];
  const auto& p2 = mesh.nodes()[static_cast<std::size_t>(t[2])];
  return 0.5 * std::abs((p1 - p0).x() * (p2 - p0).y() - (p2 - p0).x() * (p1 - p0).y());
}

// Dense stiffness by direct element loop.
inline Eigen::MatrixXd dense_stiffness(const Mesh& mesh, const Vector& coeff) {
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < static_cast<int>(mesh.num_triangles()); ++e) {
    const auto& t = mesh.triangles()[static_cast<std::size_t>(e)];
    Eigen::Matrix<double, 2, 3> B;
    for (int a = 0; a < 3; ++a) {
      Vector hat = Vector::Zero(n);
      hat[t[a]] = 1.0;
      B.col(a) = plain_gradient(mesh, e, hat);
    }
    const Eigen::Matrix3d ke = coeff[e] * plain_area(mesh, e) * B.transpose() * B;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) K(t[a], t[b]) += ke(a, b);
  }
  return K;
}

// Total energy re-evaluated from scratch with the one-point rule.
inline double dense_energy(const Mesh& mesh, const MaterialLaws& laws, const Vector& alpha, const Vector& u) {
  double elastic = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.num_triangles()); ++e) {
    const auto& t = mesh.triangles()[static_cast<std::size_t>(e)];
    const double abar = (alpha[t[0]] + alpha[t[1]] + alpha[t[2]]) / 3.0;
    elastic += 0.5 * plain_area(mesh, e) * eval_mu(laws, abar).value * plain_gradient(mesh, e, u).squaredNorm();
  }
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(mesh.num_triangles()));
  return elastic + 0.5 * alpha.dot(dense_stiffness(mesh, ones) * alpha);
}

}  // namespace fatigue::testing
