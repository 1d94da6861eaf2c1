#include "fatigue/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

namespace fatigue {

ConfigError::ConfigError(std::string key, const std::string& reason)
    : std::runtime_error(fmt::format("config key '{}': {}", key, reason)), key_(std::move(key)) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(std::string(key), fmt::format("'{}' is not a finite number", v));
  }
  return out;
}

long long to_integer(std::string_view key, std::string_view v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key), fmt::format("'{}' is not an integer", v));
  }
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  const long long x = to_integer(key, v);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(std::string(key), "integer out of range");
  return static_cast<int>(x);
}

template <class F>
auto wrap(std::string_view key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(key), e.what());
  }
}

std::string num(double x) { return fmt::format("{}", x); }

struct Field {
  const char* key;
  const char* help;
  std::function<void(RunConfig&, std::string_view key, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define FATIGUE_DOUBLE(KEY, HELP, MEMBER)                                                            \
  Field {                                                                                           \
    KEY, HELP, [](RunConfig& c, std::string_view k, std::string_view v) { c.MEMBER = to_double(k, v); }, \
        [](const RunConfig& c) { return num(c.MEMBER); }                                            \
  }
#define FATIGUE_INT(KEY, HELP, MEMBER)                                                            \
  Field {                                                                                        \
    KEY, HELP, [](RunConfig& c, std::string_view k, std::string_view v) { c.MEMBER = to_int(k, v); }, \
        [](const RunConfig& c) { return std::to_string(c.MEMBER); }                              \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      FATIGUE_INT("mesh.nx", "cells in x", nx),
      FATIGUE_INT("mesh.ny", "cells in y", ny),
      FATIGUE_DOUBLE("mesh.x0", "domain left edge", domain.x0),
      FATIGUE_DOUBLE("mesh.x1", "domain right edge", domain.x1),
      FATIGUE_DOUBLE("mesh.y0", "domain bottom edge", domain.y0),
      FATIGUE_DOUBLE("mesh.y1", "domain top edge", domain.y1),
      Field{"mesh.dirichlet", "comma list of Dirichlet sides (left, right, bottom, top)",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              std::set<Side> sides;
              for (auto item : split_list(v)) sides.insert(wrap(k, [&] { return parse_side(item); }));
              c.dirichlet = std::move(sides);
            },
            [](const RunConfig& c) {
              std::string s;
              for (Side side : c.dirichlet) s += (s.empty() ? "" : ",") + std::string(to_string(side));
              return s;
            }},
      Field{"laws.mu.kind", "smoothstep or linear",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              if (v == "smoothstep") c.laws.mu.kind = ModulusLaw::Kind::smoothstep;
              else if (v == "linear") c.laws.mu.kind = ModulusLaw::Kind::linear;
              else throw ConfigError(std::string(k), fmt::format("unknown modulus law '{}'", v));
            },
            [](const RunConfig& c) {
              return std::string(c.laws.mu.kind == ModulusLaw::Kind::smoothstep ? "smoothstep" : "linear");
            }},
      FATIGUE_DOUBLE("laws.mu.min", "modulus at alpha = 0", laws.mu.mu_min),
      FATIGUE_DOUBLE("laws.mu.max", "modulus at alpha = 1", laws.mu.mu_max),
      Field{"laws.f.kind", "linear_clamped or exponential",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              if (v == "linear_clamped") c.laws.f.kind = FatigueLaw::Kind::linear_clamped;
              else if (v == "exponential") c.laws.f.kind = FatigueLaw::Kind::exponential;
              else throw ConfigError(std::string(k), fmt::format("unknown fatigue law '{}'", v));
            },
            [](const RunConfig& c) {
              return std::string(c.laws.f.kind == FatigueLaw::Kind::linear_clamped ? "linear_clamped"
                                                                                   : "exponential");
            }},
      FATIGUE_DOUBLE("laws.f.f0", "fatigue weight at V = 0", laws.f.f0),
      FATIGUE_DOUBLE("laws.f.k", "fatigue slope or decay rate", laws.f.k),
      FATIGUE_DOUBLE("laws.f.f_inf", "fatigue weight floor", laws.f.f_inf),
      Field{"laws.g.kind", "one, equals_mu or custom_smoothstep",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              if (v == "one") c.laws.g.kind = CumulationWeight::Kind::one;
              else if (v == "equals_mu") c.laws.g.kind = CumulationWeight::Kind::equals_mu;
              else if (v == "custom_smoothstep") c.laws.g.kind = CumulationWeight::Kind::custom_smoothstep;
              else throw ConfigError(std::string(k), fmt::format("unknown cumulation weight '{}'", v));
            },
            [](const RunConfig& c) {
              switch (c.laws.g.kind) {
                case CumulationWeight::Kind::one: return std::string("one");
                case CumulationWeight::Kind::equals_mu: return std::string("equals_mu");
                case CumulationWeight::Kind::custom_smoothstep: return std::string("custom_smoothstep");
              }
              return std::string();
            }},
      FATIGUE_DOUBLE("laws.g.min", "custom_smoothstep weight at alpha = 0", laws.g.g_min),
      FATIGUE_DOUBLE("laws.g.max", "custom_smoothstep weight at alpha = 1", laws.g.g_max),
      Field{"laws.zeta.variant", "vector or scalar_power",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              if (v == "vector") c.laws.zeta.kind = ZetaVariant::Kind::vector;
              else if (v == "scalar_power") c.laws.zeta.kind = ZetaVariant::Kind::scalar_power;
              else throw ConfigError(std::string(k), fmt::format("unknown zeta variant '{}'", v));
            },
            [](const RunConfig& c) {
              return std::string(c.laws.zeta.kind == ZetaVariant::Kind::vector ? "vector" : "scalar_power");
            }},
      FATIGUE_DOUBLE("laws.zeta.theta", "exponent of the scalar variant", laws.zeta.theta),
      Field{"load.profile", "spatial profile of the boundary datum: x, y or one",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              c.profile = wrap(k, [&] { return parse_profile(v); });
            },
            [](const RunConfig& c) { return std::string(to_string(c.profile)); }},
      Field{"load.schedule", "ramp, triangle or sine",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              c.schedule.kind = wrap(k, [&] { return parse_schedule(v); });
            },
            [](const RunConfig& c) { return std::string(to_string(c.schedule.kind)); }},
      FATIGUE_DOUBLE("load.rate", "ramp rate", schedule.rate),
      FATIGUE_DOUBLE("load.amplitude", "triangle/sine amplitude", schedule.amplitude),
      FATIGUE_DOUBLE("load.period", "triangle/sine period", schedule.period),
      FATIGUE_DOUBLE("time.T", "final time", T),
      FATIGUE_INT("time.steps", "number of time steps k", steps),
      FATIGUE_DOUBLE("viscosity.eps", "viscosity for simulate and verify", eps),
      Field{"sweep.eps", "comma list of viscosities for sweep",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              std::vector<double> list;
              for (auto item : split_list(v)) list.push_back(to_double(k, item));
              c.sweep_eps = std::move(list);
            },
            [](const RunConfig& c) {
              std::string s;
              for (double e : c.sweep_eps) s += (s.empty() ? "" : ",") + num(e);
              return s;
            }},
      FATIGUE_DOUBLE("sweep.min_k_eps", "lower bound on steps * eps in a sweep", min_k_eps),
      FATIGUE_DOUBLE("init.alpha", "initial damage", alpha0),
      FATIGUE_DOUBLE("init.weak.alpha", "initial damage inside the weak disc", weak_alpha),
      FATIGUE_DOUBLE("init.weak.x", "weak disc centre x", weak_x),
      FATIGUE_DOUBLE("init.weak.y", "weak disc centre y", weak_y),
      FATIGUE_DOUBLE("init.weak.radius", "weak disc radius (0 disables)", weak_radius),
      FATIGUE_DOUBLE("solver.tol_pg", "projected-gradient tolerance", solver.tol_pg),
      FATIGUE_DOUBLE("solver.tol_stag", "alternate-minimization stagnation tolerance", solver.tol_stag),
      FATIGUE_DOUBLE("solver.tol_kkt", "relative KKT sign tolerance", solver.tol_kkt),
      FATIGUE_INT("solver.max_pg_iters", "damage solver iteration cap", solver.max_pg_iters),
      FATIGUE_INT("solver.max_am_sweeps", "alternate-minimization sweep cap", solver.max_am_sweeps),
      FATIGUE_DOUBLE("solver.tol_eq", "equilibrium residual tolerance", solver.tol_eq),
      FATIGUE_DOUBLE("rescale.p", "W1p exponent of the arc length", p),
      FATIGUE_DOUBLE("rescale.delta", "plateau threshold on dt/ds", delta),
      FATIGUE_DOUBLE("rescale.psi_floor", "smallest Psi accepted by jump profiles", psi_floor),
      Field{"output.dir", "output directory",
            [](RunConfig& c, std::string_view, std::string_view v) { c.out_dir = std::string(v); },
            [](const RunConfig& c) { return c.out_dir; }},
      FATIGUE_INT("output.snapshot_every", "VTK snapshot cadence in steps (0: final only)", snapshot_every),
      FATIGUE_INT("output.checkpoint_every", "checkpoint cadence in steps (0: none)", checkpoint_every),
      Field{"run.seed", "seed of the oracle instance generator",
            [](RunConfig& c, std::string_view k, std::string_view v) {
              const long long s = to_integer(k, v);
              if (s < 0) throw ConfigError(std::string(k), "seed must be nonnegative");
              c.seed = static_cast<std::uint64_t>(s);
            },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
      FATIGUE_INT("oracle.count", "instances per oracle batch", oracle_count),
      FATIGUE_INT("oracle.min_free", "fewest free nodes per instance", oracle_min_free),
      FATIGUE_INT("oracle.max_free", "most free nodes per instance", oracle_max_free),
      FATIGUE_DOUBLE("oracle.tol", "nodewise agreement tolerance", oracle_tol),
  };
  return table;
}

#undef FATIGUE_DOUBLE
#undef FATIGUE_INT

void require(bool ok, const char* key, const std::string& reason) {
  if (!ok) throw ConfigError(key, reason);
}

}  // namespace

std::vector<ConfigKey> config_schema() {
  std::vector<ConfigKey> out;
  for (const auto& f : fields()) out.push_back({f.key, f.help});
  return out;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(cfg, key, trim(value));
      return;
    }
  }
  throw ConfigError(std::string(key), "unknown key");
}

void validate_config(const RunConfig& c) {
  require(c.nx >= 1, "mesh.nx", "must be >= 1");
  require(c.ny >= 1, "mesh.ny", "must be >= 1");
  require(c.domain.x1 > c.domain.x0, "mesh.x1", "must exceed mesh.x0");
  require(c.domain.y1 > c.domain.y0, "mesh.y1", "must exceed mesh.y0");
  require(!c.dirichlet.empty(), "mesh.dirichlet", "at least one Dirichlet side is required");
  require(c.laws.mu.mu_min > 0.0, "laws.mu.min", "must be > 0");
  require(c.laws.mu.mu_max >= c.laws.mu.mu_min, "laws.mu.max", "must be >= laws.mu.min");
  require(c.laws.f.f0 > 0.0, "laws.f.f0", "must be > 0");
  require(c.laws.f.k >= 0.0, "laws.f.k", "must be >= 0");
  require(c.laws.f.f_inf >= 0.0 && c.laws.f.f_inf <= c.laws.f.f0, "laws.f.f_inf", "must lie in [0, laws.f.f0]");
  require(c.laws.g.g_max >= c.laws.g.g_min, "laws.g.max", "must be >= laws.g.min");
  require(c.laws.zeta.theta >= 1.0 && c.laws.zeta.theta <= kThetaMax, "laws.zeta.theta",
          fmt::format("must lie in [1, {}]", kThetaMax));
  require(c.schedule.kind == Schedule::Kind::ramp || c.schedule.period > 0.0, "load.period", "must be > 0");
  require(c.T > 0.0, "time.T", "must be > 0");
  require(c.steps >= 1, "time.steps", "must be >= 1");
  require(c.eps > 0.0, "viscosity.eps", "must be > 0");
  require(!c.sweep_eps.empty(), "sweep.eps", "needs at least one value");
  for (double e : c.sweep_eps) require(e > 0.0, "sweep.eps", "values must be > 0");
  require(c.min_k_eps >= 0.0, "sweep.min_k_eps", "must be >= 0");
  require(c.alpha0 >= 0.0 && c.alpha0 <= 1.0, "init.alpha", "must lie in [0, 1]");
  require(c.weak_alpha >= 0.0 && c.weak_alpha <= 1.0, "init.weak.alpha", "must lie in [0, 1]");
  require(c.weak_radius >= 0.0, "init.weak.radius", "must be >= 0");
  require(c.solver.tol_pg > 0.0, "solver.tol_pg", "must be > 0");
  require(c.solver.tol_stag > 0.0, "solver.tol_stag", "must be > 0");
  require(c.solver.tol_kkt > 0.0, "solver.tol_kkt", "must be > 0");
  require(c.solver.max_pg_iters >= 1, "solver.max_pg_iters", "must be >= 1");
  require(c.solver.max_am_sweeps >= 1, "solver.max_am_sweeps", "must be >= 1");
  require(c.solver.tol_eq > 0.0, "solver.tol_eq", "must be > 0");
  require(c.p >= 2.0, "rescale.p", "must be >= 2");
  require(c.delta > 0.0, "rescale.delta", "must be > 0");
  require(c.psi_floor >= 0.0, "rescale.psi_floor", "must be >= 0");
  require(!c.out_dir.empty(), "output.dir", "must not be empty");
  require(c.snapshot_every >= 0, "output.snapshot_every", "must be >= 0");
  require(c.checkpoint_every >= 0, "output.checkpoint_every", "must be >= 0");
  require(c.oracle_count >= 0, "oracle.count", "must be >= 0");
  require(c.oracle_min_free >= 1, "oracle.min_free", "must be >= 1");
  require(c.oracle_max_free >= c.oracle_min_free && c.oracle_max_free <= kOracleMaxFree, "oracle.max_free",
          fmt::format("must lie in [oracle.min_free, {}]", kOracleMaxFree));
  require(c.oracle_tol > 0.0, "oracle.tol", "must be > 0");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), fmt::format("line {}: expected 'key = value'", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) throw ConfigError(std::string(key), "given more than once");
    if (value.empty()) throw ConfigError(std::string(key), "missing value");
    set_config_value(cfg, key, value);
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read config file {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += fmt::format("{} = {}\n", f.key, f.get(cfg));
  return out;
}

Mesh make_mesh(const RunConfig& cfg) { return build_structured_mesh(cfg.nx, cfg.ny, cfg.domain, cfg.dirichlet); }

Vector initial_damage(const RunConfig& cfg, const Mesh& mesh) {
  Vector a = Vector::Constant(static_cast<Eigen::Index>(mesh.num_nodes()), cfg.alpha0);
  if (cfg.weak_radius > 0.0) {
    const Eigen::Vector2d centre(cfg.weak_x, cfg.weak_y);
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      if ((mesh.nodes()[i] - centre).norm() <= cfg.weak_radius) a[static_cast<Eigen::Index>(i)] = cfg.weak_alpha;
    }
  }
  return a;
}

EvolutionSetup make_setup(const RunConfig& cfg, const Mesh& mesh) {
  EvolutionSetup s;
  s.laws = cfg.laws;
  s.load.profile = spatial_profile(mesh, cfg.profile);
  s.load.schedule = cfg.schedule;
  s.load.T = cfg.T;
  s.steps = cfg.steps;
  s.eps = cfg.eps;
  s.solver = cfg.solver;
  s.alpha0 = initial_damage(cfg, mesh);
  return s;
}

int sweep_steps(const RunConfig& cfg, double eps) {
  const double needed = std::ceil(cfg.min_k_eps / eps - 1e-9);
  return std::max(cfg.steps, static_cast<int>(needed));
}

}  // namespace fatigue
