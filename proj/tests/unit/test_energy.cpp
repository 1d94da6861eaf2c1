#include <gtest/gtest.h>

#include <random>

#include "fatigue/energy.hpp"
#include "helpers.hpp"

namespace fatigue {
namespace {

using testing::random_vector;
using testing::unit_mesh;

Vector coordinate(const Mesh& m, int axis) {
  Vector x(static_cast<Eigen::Index>(m.num_nodes()));
  for (std::size_t i = 0; i < m.num_nodes(); ++i) x[static_cast<Eigen::Index>(i)] = m.nodes()[i][axis];
  return x;
}

TEST(TotalEnergy, UniformShear) {
  const Mesh m = unit_mesh(4, 4);
  const FeOperators ops = build_fe_operators(m);
  const DiscreteState s = make_state(ops, Vector::Ones(ops.num_nodes()), coordinate(m, 0),
                                     Vector::Zero(ops.num_elements()));
  const EnergyBreakdown e = total_energy(s, ops, MaterialLaws{});
  EXPECT_NEAR(e.elastic, 5.0, 1e-13);
  EXPECT_NEAR(e.gradient, 0.0, 1e-13);
}

TEST(TotalEnergy, ZeroState) {
  const FeOperators ops = build_fe_operators(unit_mesh(3, 3));
  const DiscreteState s = make_state(ops, Vector::Zero(ops.num_nodes()), Vector::Zero(ops.num_nodes()),
                                     Vector::Zero(ops.num_elements()));
  const EnergyBreakdown e = total_energy(s, ops, MaterialLaws{});
  EXPECT_EQ(e.elastic, 0.0);
  EXPECT_EQ(e.gradient, 0.0);
}

TEST(TotalEnergy, MatchesDenseEvaluator) {
  const Mesh m = unit_mesh(4, 4);
  const FeOperators ops = build_fe_operators(m);
  std::mt19937_64 rng(17);
  for (auto kind : {ModulusLaw::Kind::smoothstep, ModulusLaw::Kind::linear}) {
    MaterialLaws laws;
    laws.mu.kind = kind;
    for (int trial = 0; trial < 10; ++trial) {
      const Vector a = random_vector(rng, ops.num_nodes(), 0.0, 1.0);
      const Vector u = random_vector(rng, ops.num_nodes(), -1.0, 1.0);
      const double dense = testing::dense_energy(m, laws, a, u);
      const double ours = total_energy(a, element_gradients(ops, u), ops, laws).total();
      EXPECT_NEAR(ours, dense, 1e-12 * (1.0 + dense));
    }
  }
}

TEST(TotalEnergy, InvariantUnderConstantShift) {
  const FeOperators ops = build_fe_operators(unit_mesh(5, 3));
  std::mt19937_64 rng(2);
  const Vector a = random_vector(rng, ops.num_nodes(), 0.0, 1.0);
  const Vector u = random_vector(rng, ops.num_nodes(), -1.0, 1.0);
  const Vector shifted = (u.array() + 4.2).matrix();
  const double e1 = total_energy(a, element_gradients(ops, u), ops, MaterialLaws{}).total();
  const double e2 = total_energy(a, element_gradients(ops, shifted), ops, MaterialLaws{}).total();
  EXPECT_NEAR(e1, e2, 1e-12);
}

TEST(EnergyGradient, VanishesForConstantDamageWithoutStrain) {
  const FeOperators ops = build_fe_operators(unit_mesh(3, 3));
  const Vector a = Vector::Constant(ops.num_nodes(), 0.6);
  const Vector g = grad_alpha_energy(a, element_gradients(ops, Vector::Zero(ops.num_nodes())), ops, MaterialLaws{});
  EXPECT_LE(g.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EnergyGradient, FlatClampRegion) {
  const FeOperators ops = build_fe_operators(unit_mesh(3, 3));
  std::mt19937_64 rng(8);
  const Vector u = random_vector(rng, ops.num_nodes(), -1.0, 1.0);
  const Vector g = grad_alpha_energy(Vector::Ones(ops.num_nodes()), element_gradients(ops, u), ops, MaterialLaws{});
  EXPECT_LE(g.cwiseAbs().maxCoeff(), 1e-13);
}

TEST(EnergyGradient, CentralDifferences) {
  const FeOperators ops = build_fe_operators(unit_mesh(4, 4));
  std::mt19937_64 rng(29);
  const MaterialLaws laws;
  const Vector a = random_vector(rng, ops.num_nodes(), 0.1, 0.9);
  const GradField gu = element_gradients(ops, random_vector(rng, ops.num_nodes(), -1.0, 1.0));
  const Vector g = grad_alpha_energy(a, gu, ops, laws);
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const Vector beta = random_vector(rng, ops.num_nodes(), -1.0, 1.0);
    const double fd =
        (total_energy(a + h * beta, gu, ops, laws).total() - total_energy(a - h * beta, gu, ops, laws).total()) /
        (2 * h);
    const double exact = g.dot(beta);
    EXPECT_LE(std::abs(exact - fd), 1e-5 * (1.0 + std::abs(exact)));
  }
}

TEST(Dissipation, UniformWeight) {
  const FeOperators ops = build_fe_operators(unit_mesh(4, 4));
  MaterialLaws laws;
  laws.f.k = 0.0;
  laws.f.f0 = 0.7;
  const Vector V = Vector::Zero(ops.num_elements());
  EXPECT_NEAR(dissipation_R(Vector::Constant(ops.num_nodes(), -1.0), V, ops, laws), 0.7, 1e-14);
  EXPECT_EQ(dissipation_R(Vector::Zero(ops.num_nodes()), V, ops, laws), 0.0);
}

TEST(Dissipation, LinearAndRejectsPositiveRates) {
  const FeOperators ops = build_fe_operators(unit_mesh(3, 2));
  std::mt19937_64 rng(4);
  const MaterialLaws laws;
  const Vector V = random_vector(rng, ops.num_elements(), 0.0, 3.0);
  const Vector beta = random_vector(rng, ops.num_nodes(), -1.0, 0.0);
  EXPECT_NEAR(dissipation_R(2.0 * beta, V, ops, laws), 2.0 * dissipation_R(beta, V, ops, laws), 1e-14);
  Vector bad = beta;
  bad[0] = 1e-6;
  EXPECT_THROW(dissipation_R(bad, V, ops, laws), std::invalid_argument);
}

TEST(Dissipation, NonincreasingInCumulation) {
  const FeOperators ops = build_fe_operators(unit_mesh(3, 3));
  std::mt19937_64 rng(12);
  const MaterialLaws laws;
  for (int trial = 0; trial < 50; ++trial) {
    const Vector V = random_vector(rng, ops.num_elements(), 0.0, 2.0);
    const Vector beta = random_vector(rng, ops.num_nodes(), -1.0, 0.0);
    Vector raised = V;
    raised[static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(V.size()))] += 0.5;
    EXPECT_LE(dissipation_R(beta, raised, ops, laws), dissipation_R(beta, V, ops, laws) + 1e-15);
  }
}

TEST(ZetaField, ShapesFollowVariant) {
  const FeOperators ops = build_fe_operators(unit_mesh(2, 2));
  const Vector a = Vector::Ones(ops.num_nodes());
  const GradField g = element_gradients(ops, Vector::Zero(ops.num_nodes()));
  MaterialLaws laws;
  EXPECT_EQ(zeta_field(a, g, ops, laws).rows(), 2);
  laws.zeta = {ZetaVariant::Kind::scalar_power, 2.0};
  EXPECT_EQ(zeta_field(a, g, ops, laws).rows(), 1);
}

}  // namespace
}  // namespace fatigue
