#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "evolution_fixture.hpp"
#include "fatigue/variation.hpp"

namespace fatigue {
namespace {

ZetaSeries scalar_series(std::initializer_list<double> v) {
  ZetaSeries s;
  double t = 0.0;
  for (double x : v) {
    s.times.push_back(t);
    s.values.push_back(ZetaField::Constant(1, 1, x));
    t += 1.0;
  }
  return s;
}

TEST(Variation, ScalarExample) {
  const ZetaSeries s = scalar_series({0.0, 2.0, 1.0});
  EXPECT_DOUBLE_EQ(essential_variation(s, 0, 2)[0], 3.0);
  EXPECT_DOUBLE_EQ(partition_variation(s, {0, 2})[0], 1.0);
  EXPECT_DOUBLE_EQ(essential_variation(s, 1, 1)[0], 0.0);
}

TEST(Variation, VectorIncrementUsesEuclideanNorm) {
  ZetaSeries s;
  s.times = {0.0, 1.0};
  s.values = {ZetaField::Zero(2, 1), ZetaField(2, 1)};
  s.values[1] << 3.0, 4.0;
  EXPECT_DOUBLE_EQ(essential_variation(s, 0, 1)[0], 5.0);
}

TEST(Variation, RejectsBadSeries) {
  ZetaSeries s = scalar_series({0.0, 1.0, 2.0});
  s.times[2] = 0.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  const ZetaSeries ok = scalar_series({0.0, 1.0});
  EXPECT_THROW(partition_variation(ok, {1, 0}), std::invalid_argument);
  EXPECT_THROW(essential_variation(ok, 0, 5), std::invalid_argument);
}

TEST(Variation, AdditiveAndMonotoneUnderRefinement) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    ZetaSeries s;
    const int n = 10 + static_cast<int>(rng() % 20);
    for (int j = 0; j < n; ++j) {
      s.times.push_back(j * 0.1);
      ZetaField z(2, 3);
      for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = u(rng);
      s.values.push_back(z);
    }
    const int mid = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 2));
    const Vector whole = essential_variation(s, 0, n - 1);
    const Vector split = essential_variation(s, 0, mid) + essential_variation(s, mid, n - 1);
    EXPECT_LE((whole - split).cwiseAbs().maxCoeff(), 1e-12);

    std::vector<int> coarse{0};
    for (int j = 1; j < n - 1; ++j)
      if (rng() % 2) coarse.push_back(j);
    coarse.push_back(n - 1);
    std::vector<int> fine = coarse;
    for (int j = 1; j < n - 1; ++j)
      if (rng() % 3 == 0) fine.push_back(j);
    std::sort(fine.begin(), fine.end());
    fine.erase(std::unique(fine.begin(), fine.end()), fine.end());
    const Vector vc = partition_variation(s, coarse);
    const Vector vf = partition_variation(s, fine);
    EXPECT_LE((vc - vf).maxCoeff(), 1e-12);
    EXPECT_LE((vf - whole).maxCoeff(), 1e-12);
  }
}

TEST(Variation, MatchesHistoryOfRun) {
  const Mesh m = testing::unit_mesh(4, 4);
  const FeOperators ops = build_fe_operators(m);
  const EvolutionTrace tr = run_evolution(testing::small_setup(m, 20), ops);
  const ZetaSeries s = zeta_series(tr);
  ASSERT_EQ(s.size(), 21);
  for (int i : {5, 13, 20}) {
    const Vector v = tr.V0 + essential_variation(s, 0, i);
    EXPECT_LE((v - tr.V(i)).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + v.maxCoeff()));
  }
}

}  // namespace
}  // namespace fatigue
