#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fatigue/incremental_step.hpp"
#include "fatigue/material_laws.hpp"
#include "fatigue/mesh.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

inline constexpr int kOracleMaxFree = 8;

/// min 1/2 x^T Q x + c^T x  subject to  lo <= x <= hi.
struct OracleProblem {
  Eigen::MatrixXd Q;
  Vector c;
  Vector lo;
  Vector hi;

  double objective(const Vector& x) const { return 0.5 * x.dot(Q * x) + c.dot(x); }
};

struct OracleResult {
  Vector x;
  double objective = 0.0;
  long patterns = 0;
  long feasible = 0;
  long singular = 0;
};

/// Enumerates every lower/upper/free pattern and keeps the feasible KKT point
/// of least objective. Throws std::invalid_argument beyond kOracleMaxFree
/// unknowns or when Q is not PSD within 1e-10.
OracleResult oracle_damage_step(const OracleProblem& problem);

/// A damage subproblem on a small mesh with linear mu: nodes outside
/// free_nodes have alpha_prev = 0 and are therefore pinned at zero.
struct OracleInstance {
  Mesh mesh;
  MaterialLaws laws;
  StepInputs inputs;
  Vector u;
  std::vector<int> free_nodes;
};

/// Dense quadratic of the instance on its free nodes, assembled directly from
/// the mesh geometry (independent of FeOperators).
OracleProblem build_oracle_problem(const OracleInstance& instance);

OracleInstance random_oracle_instance(std::mt19937_64& rng, int n_free);

struct OracleBatchReport {
  int count = 0;
  int mismatches = 0;
  double max_difference = 0.0;
  /// One line per instance plus a closing summary line.
  std::string summary;
};

OracleBatchReport run_oracle_batch(std::uint64_t seed, int count, double tol = 1e-8, int min_free = 2,
                                   int max_free = 6, const SolverSettings& settings = {});

}  // namespace fatigue
