#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evolution_fixture.hpp"
#include "fatigue/checkpoint.hpp"
#include "fatigue/io.hpp"

namespace fatigue {
namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(Io, TraceCsvShape) {
  const Mesh m = testing::unit_mesh(3, 3);
  const FeOperators ops = build_fe_operators(m);
  const EvolutionTrace tr = run_evolution(testing::small_setup(m, 5), ops);
  const auto rows = lines(trace_csv(tr));
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], kTraceCsvHeader);
  const auto commas = std::count(rows[0].begin(), rows[0].end(), ',');
  for (const auto& r : rows) EXPECT_EQ(std::count(r.begin(), r.end(), ','), commas);
  EXPECT_EQ(rows[1].substr(0, 2), "0,");
  EXPECT_EQ(rows[6].substr(0, 2), "5,");
}

TEST(Io, VtkStructure) {
  const Mesh m = testing::unit_mesh(2, 2);
  const FeOperators ops = build_fe_operators(m);
  const Vector a = Vector::Ones(ops.num_nodes());
  const std::string vtk = vtk_snapshot(m, ops, MaterialLaws{}, a, Vector::Zero(ops.num_nodes()),
                                       Vector::Zero(ops.num_elements()), "t");
  EXPECT_EQ(vtk.rfind("# vtk DataFile Version", 0), 0u);
  EXPECT_NE(vtk.find("POINTS 9 double"), std::string::npos);
  EXPECT_NE(vtk.find("CELLS 8 32"), std::string::npos);
  EXPECT_NE(vtk.find("POINT_DATA 9"), std::string::npos);
  EXPECT_NE(vtk.find("CELL_DATA 8"), std::string::npos);
  for (const char* f : {"alpha", "u", "V", "f_of_V", "grad_u_norm"})
    EXPECT_NE(vtk.find(std::string("SCALARS ") + f + " "), std::string::npos) << f;
}

TEST(Io, CheckpointRoundTripIsExact) {
  const Mesh m = testing::unit_mesh(3, 3);
  const FeOperators ops = build_fe_operators(m);
  const EvolutionTrace tr = run_evolution(testing::small_setup(m, 6), ops);
  const auto path = std::filesystem::temp_directory_path() / "fatigue_io_test" / "cp.json";
  save_checkpoint(path, tr, "mesh.nx = 3\n");
  const Checkpoint cp = load_checkpoint(path);
  EXPECT_EQ(cp.config_text, "mesh.nx = 3\n");
  ASSERT_EQ(cp.trace.completed(), tr.completed());
  EXPECT_EQ(cp.trace.tau, tr.tau);
  for (int i = 0; i <= tr.completed(); ++i) {
    EXPECT_EQ(cp.trace.alpha(i), tr.alpha(i));
    EXPECT_EQ(cp.trace.zeta(i), tr.zeta(i));
    EXPECT_EQ(cp.trace.energy(i).total(), tr.energy(i).total());
  }
  EXPECT_EQ(trace_csv(cp.trace), trace_csv(tr));
  std::filesystem::remove_all(path.parent_path());
}

TEST(Io, CheckpointRejectsGarbage) {
  EXPECT_ANY_THROW(parse_checkpoint("{}"));
  EXPECT_ANY_THROW(parse_checkpoint("not json"));
  EXPECT_ANY_THROW(parse_checkpoint(R"({"format":"fatigue-checkpoint","version":99})"));
}

}  // namespace
}  // namespace fatigue
