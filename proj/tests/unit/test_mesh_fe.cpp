#include <gtest/gtest.h>

#include <random>

#include "fatigue/fe_operators.hpp"
#include "fatigue/mesh.hpp"
#include "helpers.hpp"

namespace fatigue {
namespace {

using testing::unit_mesh;

TEST(StructuredMesh, CountsOnSingleCell) {
  const Mesh m = unit_mesh(1, 1);
  EXPECT_EQ(m.num_nodes(), 4u);
  EXPECT_EQ(m.num_triangles(), 2u);
  EXPECT_EQ(m.dirichlet_nodes().size(), 4u);
}

TEST(StructuredMesh, CountsWithAllSidesClamped) {
  const Mesh m = unit_mesh(2, 2, {Side::left, Side::right, Side::bottom, Side::top});
  EXPECT_EQ(m.num_nodes(), 9u);
  EXPECT_EQ(m.num_triangles(), 8u);
  EXPECT_EQ(m.dirichlet_nodes().size(), 8u);
  EXPECT_FALSE(m.is_dirichlet(4));
}

TEST(StructuredMesh, AreaPartitionsTheSquare) {
  const Mesh m = unit_mesh(8, 8);
  EXPECT_NEAR(m.total_area(), 1.0, 1e-14);
  for (double a : m.areas()) EXPECT_GT(a, 0.0);
}

TEST(StructuredMesh, BoundaryTags) {
  const Mesh m = unit_mesh(3, 2);
  int dirichlet = 0;
  int neumann = 0;
  for (const auto& e : m.boundary_edges()) {
    const bool clamped = e.side == Side::left || e.side == Side::right;
    EXPECT_EQ(e.tag == BoundaryTag::dirichlet, clamped);
    (e.tag == BoundaryTag::dirichlet ? dirichlet : neumann)++;
  }
  EXPECT_EQ(dirichlet, 4);
  EXPECT_EQ(neumann, 6);
}

TEST(StructuredMesh, RejectsBadInput) {
  EXPECT_THROW(unit_mesh(0, 3), std::invalid_argument);
  EXPECT_THROW(unit_mesh(2, 0), std::invalid_argument);
  EXPECT_THROW(unit_mesh(2, 2, {}), std::invalid_argument);
}

TEST(Mesh, RejectsDegenerateTriangle) {
  std::vector<Eigen::Vector2d> nodes{{0, 0}, {1, 0}, {2, 0}};
  std::vector<std::array<int, 3>> tris{{0, 1, 2}};
  std::vector<BoundaryEdge> edges{{{0, 1}, Side::bottom, BoundaryTag::dirichlet},
                                  {{1, 2}, Side::bottom, BoundaryTag::neumann},
                                  {{2, 0}, Side::bottom, BoundaryTag::neumann}};
  EXPECT_THROW(Mesh(nodes, tris, edges), std::invalid_argument);
}

TEST(FeOperators, LumpedMassSumsToArea) {
  const FeOperators ops = build_fe_operators(unit_mesh(1, 1));
  EXPECT_EQ(ops.lumped_mass.sum(), 1.0);
  const FeOperators ops2 = build_fe_operators(build_structured_mesh(5, 3, {0, 0, 2, 3}, {Side::left}));
  EXPECT_NEAR(ops2.total_area(), 6.0, 1e-13);
}

TEST(FeOperators, ConstantsInKernelAndSymmetric) {
  const FeOperators ops = build_fe_operators(unit_mesh(6, 4));
  const Vector c = Vector::Constant(ops.num_nodes(), 3.7);
  EXPECT_LE((ops.stiffness * c).cwiseAbs().maxCoeff(), 1e-13);
  const Eigen::MatrixXd K(ops.stiffness);
  EXPECT_LE((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FeOperators, OffDiagonalNonpositive) {
  const FeOperators ops = build_fe_operators(unit_mesh(5, 7));
  for (int k = 0; k < ops.stiffness.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(ops.stiffness, k); it; ++it)
      if (it.row() != it.col()) EXPECT_LE(it.value(), 1e-15);
}

TEST(FeOperators, AffineGradientsExact) {
  const Mesh m = unit_mesh(4, 3);
  const FeOperators ops = build_fe_operators(m);
  Vector x(ops.num_nodes()), y(ops.num_nodes());
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    x[static_cast<Eigen::Index>(i)] = m.nodes()[i].x();
    y[static_cast<Eigen::Index>(i)] = m.nodes()[i].y();
  }
  const GradField gx = element_gradients(ops, x);
  const GradField gy = element_gradients(ops, y);
  for (Eigen::Index e = 0; e < gx.cols(); ++e) {
    EXPECT_NEAR(gx(0, e), 1.0, 1e-13);
    EXPECT_NEAR(gx(1, e), 0.0, 1e-13);
    EXPECT_NEAR(gy(0, e), 0.0, 1e-13);
    EXPECT_NEAR(gy(1, e), 1.0, 1e-13);
  }
  EXPECT_EQ(element_gradients(ops, Vector::Zero(ops.num_nodes())).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(element_gradients(ops, Vector::Zero(3)), std::invalid_argument);
}

TEST(FeOperators, QuadraticFormMatchesElementSum) {
  const Mesh m = unit_mesh(7, 5);
  const FeOperators ops = build_fe_operators(m);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector a = testing::random_vector(rng, ops.num_nodes(), -2.0, 2.0);
    double sum = 0.0;
    for (int e = 0; e < static_cast<int>(m.num_triangles()); ++e) {
      sum += testing::plain_area(m, e) * testing::plain_gradient(m, e, a).squaredNorm();
    }
    const double form = a.dot(ops.stiffness * a);
    EXPECT_GE(form, 0.0);
    EXPECT_NEAR(form, sum, 1e-12 * (1.0 + sum));
  }
}

TEST(FeOperators, StiffnessMatchesDenseAssembly) {
  const Mesh m = unit_mesh(3, 4);
  const FeOperators ops = build_fe_operators(m);
  const Eigen::MatrixXd dense = testing::dense_stiffness(m, Vector::Ones(ops.num_elements()));
  EXPECT_LE((Eigen::MatrixXd(ops.stiffness) - dense).cwiseAbs().maxCoeff(), 1e-13);

  std::mt19937_64 rng(5);
  const Vector c = testing::random_vector(rng, ops.num_elements(), 0.5, 3.0);
  const Eigen::MatrixXd weighted(assemble_weighted_stiffness(ops, c));
  EXPECT_LE((weighted - testing::dense_stiffness(m, c)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FeOperators, LumpedNormOfConstant) {
  const FeOperators ops = build_fe_operators(build_structured_mesh(4, 4, {0, 0, 2, 1}, {Side::left}));
  const Vector c = Vector::Constant(ops.num_nodes(), 1.5);
  EXPECT_NEAR(lumped_norm(ops, c) * lumped_norm(ops, c), 1.5 * 1.5 * 2.0, 1e-13);
}

TEST(FeOperators, LumpingAndAveraging) {
  const FeOperators ops = build_fe_operators(unit_mesh(2, 2));
  const Vector ones_e = Vector::Ones(ops.num_elements());
  EXPECT_LE((lump_to_nodes(ops, ones_e) - ops.lumped_mass).cwiseAbs().maxCoeff(), 1e-15);
  const Vector c = Vector::Constant(ops.num_nodes(), 0.25);
  EXPECT_LE((element_average(ops, c).array() - 0.25).abs().maxCoeff(), 1e-15);
}

}  // namespace
}  // namespace fatigue
