#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fatigue/evolution.hpp"
#include "fatigue/incremental_step.hpp"
#include "fatigue/load_program.hpp"
#include "fatigue/material_laws.hpp"
#include "fatigue/mesh.hpp"
#include "fatigue/oracle.hpp"

namespace fatigue {

/// Fully resolved run configuration. Text form: one `key = value` per line,
/// `#` starts a comment; see config_schema() for keys and defaults.
struct RunConfig {
  int nx = 8;
  int ny = 8;
  Rectangle domain;
  std::set<Side> dirichlet{Side::left, Side::right};

  MaterialLaws laws;

  ProfileKind profile = ProfileKind::x;
  Schedule schedule;
  double T = 1.0;
  int steps = 100;

  double eps = 0.1;
  std::vector<double> sweep_eps{0.2, 0.1, 0.05};
  double min_k_eps = 10.0;

  double alpha0 = 1.0;
  double weak_alpha = 1.0;
  double weak_x = 0.5;
  double weak_y = 0.5;
  double weak_radius = 0.0;

  SolverSettings solver;

  double p = 4.0;
  double delta = 0.1;
  double psi_floor = 1e-12;

  std::string out_dir = "out";
  int snapshot_every = 0;
  int checkpoint_every = 0;

  std::uint64_t seed = 1;
  int oracle_count = 100;
  int oracle_min_free = 2;
  int oracle_max_free = 6;
  double oracle_tol = 1e-8;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& reason);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ConfigKey {
  std::string key;
  std::string help;
};

/// Every accepted key with a one-line description, in echo order.
std::vector<ConfigKey> config_schema();

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
/// Throws ConfigError naming the offending key.
void validate_config(const RunConfig& cfg);
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Every key with its resolved value, parseable by parse_config.
std::string config_to_text(const RunConfig& cfg);

Mesh make_mesh(const RunConfig& cfg);
/// Uniform alpha0 with an optional weakened disc.
Vector initial_damage(const RunConfig& cfg, const Mesh& mesh);
EvolutionSetup make_setup(const RunConfig& cfg, const Mesh& mesh);
/// Step count used for viscosity eps in a sweep: max(steps, ceil(min_k_eps / eps)).
int sweep_steps(const RunConfig& cfg, double eps);

}  // namespace fatigue
