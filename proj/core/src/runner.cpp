#include "fatigue/runner.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fatigue/checkpoint.hpp"
#include "fatigue/config.hpp"
#include "fatigue/io.hpp"
#include "fatigue/oracle.hpp"
#include "fatigue/rescaling.hpp"
#include "fatigue/verify.hpp"

namespace fatigue {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::string out_dir;
  std::string eps;
  std::optional<int> steps;
  std::optional<long long> seed;
  std::optional<int> snapshot_every;
};

RunConfig resolve(const CommonOptions& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.out_dir.empty()) set_config_value(cfg, "output.dir", o.out_dir);
  if (!o.eps.empty()) {
    set_config_value(cfg, "sweep.eps", o.eps);
    cfg.eps = cfg.sweep_eps.front();
  }
  if (o.steps) set_config_value(cfg, "time.steps", std::to_string(*o.steps));
  if (o.seed) set_config_value(cfg, "run.seed", std::to_string(*o.seed));
  if (o.snapshot_every) set_config_value(cfg, "output.snapshot_every", std::to_string(*o.snapshot_every));
  validate_config(cfg);
  return cfg;
}

// Config text without output.* lines: those may differ between a run and its resumption.
std::string physics_part(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos + 1);
    if (line.rfind("output.", 0) != 0) out += line;
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::string eps_tag(double eps) { return fmt::format("{}", eps); }

void write_snapshot(const fs::path& dir, const Mesh& mesh, const FeOperators& ops, const EvolutionTrace& t, int i) {
  write_text_file(dir / fmt::format("snapshot_{:06d}.vtk", i),
                  vtk_snapshot(mesh, ops, t.laws, t.alpha(i), t.u(i), t.V(i), fmt::format("step {} t={}", i, t.time(i))));
}

int cmd_simulate(const CommonOptions& o, const std::string& resume, int checkpoint_every) {
  RunConfig cfg = resolve(o);
  if (checkpoint_every > 0) cfg.checkpoint_every = checkpoint_every;
  const fs::path dir(cfg.out_dir);
  const std::string manifest = config_to_text(cfg);
  write_text_file(dir / "manifest.cfg", manifest);

  const Mesh mesh = make_mesh(cfg);
  const FeOperators ops = build_fe_operators(mesh);
  const EvolutionSetup setup = make_setup(cfg, mesh);

  EvolutionTrace trace;
  if (!resume.empty()) {
    Checkpoint cp = load_checkpoint(resume);
    if (physics_part(cp.config_text) != physics_part(manifest)) {
      std::cerr << "error: checkpoint was written with a different configuration\n";
      return 2;
    }
    trace = std::move(cp.trace);
  } else {
    trace = start_evolution(setup, ops);
    write_snapshot(dir, mesh, ops, trace, 0);
  }
  for (const auto& w : trace.warnings) std::cerr << "warning: " << w << '\n';

  continue_evolution(trace, setup, ops, [&](const EvolutionTrace& t) {
    const int i = t.completed();
    if (cfg.snapshot_every > 0 && i % cfg.snapshot_every == 0) write_snapshot(dir, mesh, ops, t, i);
    if (cfg.checkpoint_every > 0 && i % cfg.checkpoint_every == 0) save_checkpoint(dir / "checkpoint.json", t, manifest);
  });
  if (cfg.snapshot_every <= 0 || trace.completed() % cfg.snapshot_every != 0) {
    write_snapshot(dir, mesh, ops, trace, trace.completed());
  }

  write_text_file(dir / "trace.csv", trace_csv(trace));
  const BalanceReport balance = energy_balance_residual(trace, ops, 0, trace.completed());
  write_text_file(dir / "balance.txt", balance_text(balance));

  int flagged = 0;
  for (const auto& r : trace.records) flagged += r.converged ? 0 : 1;
  fmt::print("simulate: {} steps, min alpha {:.6f}, max V {:.6e}, balance residual {:.6e}, {} flagged steps\n",
             trace.completed(), trace.alpha(trace.completed()).minCoeff(), trace.V(trace.completed()).maxCoeff(),
             balance.residual, flagged);
  return 0;
}

int worker_count() {
  if (const char* env = std::getenv("FATIGUE_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int cmd_sweep(const CommonOptions& o) {
  const RunConfig cfg = resolve(o);
  const fs::path dir(cfg.out_dir);
  write_text_file(dir / "manifest.cfg", config_to_text(cfg));
  const Mesh mesh = make_mesh(cfg);
  const FeOperators ops = build_fe_operators(mesh);

  const std::size_t n = cfg.sweep_eps.size();
  std::vector<std::optional<RescaledEvolution>> rescaled(n);
  std::vector<std::string> errors(n);
  std::size_t next = 0;
  std::mutex lock;
  const auto work = [&] {
    for (;;) {
      std::size_t j = 0;
      {
        const std::lock_guard<std::mutex> guard(lock);
        if (next >= n) return;
        j = next++;
      }
      try {
        RunConfig local = cfg;
        local.eps = cfg.sweep_eps[j];
        local.steps = sweep_steps(cfg, local.eps);
        const EvolutionTrace trace = run_evolution(make_setup(local, mesh), ops);
        write_text_file(dir / fmt::format("trace_eps_{}.csv", eps_tag(local.eps)), trace_csv(trace));
        RescaledEvolution r = arc_length_rescale(trace, ops, cfg.p, cfg.delta);
        write_text_file(dir / fmt::format("rescaled_eps_{}.csv", eps_tag(local.eps)), rescaled_csv(r));
        rescaled[j] = std::move(r);
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };
  const int workers = std::min<int>(worker_count(), static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<RescaledEvolution> done;
  for (std::size_t j = 0; j < n; ++j) {
    if (!errors[j].empty()) {
      std::cerr << fmt::format("error: eps = {}: {}\n", cfg.sweep_eps[j], errors[j]);
      return 1;
    }
    done.push_back(std::move(*rescaled[j]));
  }
  const SweepReport rep = sweep_compare(done, cfg.laws);
  const std::string text = sweep_text(rep);
  write_text_file(dir / "sweep_report.csv", text);
  std::cout << text;
  return 0;
}

int cmd_verify(const CommonOptions& o) {
  const RunConfig cfg = resolve(o);
  const fs::path dir(cfg.out_dir);
  write_text_file(dir / "manifest.cfg", config_to_text(cfg));
  const Mesh mesh = make_mesh(cfg);
  const FeOperators ops = build_fe_operators(mesh);
  const EvolutionTrace trace = run_evolution(make_setup(cfg, mesh), ops);
  const VerifyReport rep = verify_trace(trace, ops, cfg.solver, cfg.p, cfg.delta);
  const std::string text = rep.text();
  write_text_file(dir / "verify_report.txt", text);
  write_text_file(dir / "trace.csv", trace_csv(trace));
  std::cout << text;
  return rep.passed() ? 0 : 1;
}

int cmd_oracle(const CommonOptions& o, std::optional<int> count) {
  RunConfig cfg = resolve(o);
  if (count) set_config_value(cfg, "oracle.count", std::to_string(*count));
  validate_config(cfg);
  const OracleBatchReport rep =
      run_oracle_batch(cfg.seed, cfg.oracle_count, cfg.oracle_tol, cfg.oracle_min_free, cfg.oracle_max_free, cfg.solver);
  if (!o.out_dir.empty() || !o.config.empty()) {
    const fs::path dir(cfg.out_dir);
    write_text_file(dir / "manifest.cfg", config_to_text(cfg));
    write_text_file(dir / "oracle_summary.txt", rep.summary);
  }
  std::cout << rep.summary;
  return rep.mismatches == 0 ? 0 : 1;
}

void add_common(CLI::App* sub, CommonOptions& o, bool config_required) {
  auto* c = sub->add_option("--config", o.config, "run configuration file");
  if (config_required) c->required();
  c->check(CLI::ExistingFile);
  sub->add_option("--out-dir", o.out_dir, "output directory (overrides output.dir)");
  sub->add_option("--eps", o.eps, "comma list of viscosities (overrides sweep.eps; the first is used by simulate)");
  sub->add_option("--steps", o.steps, "number of time steps (overrides time.steps)");
  sub->add_option("--seed", o.seed, "seed (overrides run.seed)");
  sub->add_option("--snapshot-every", o.snapshot_every, "VTK cadence (overrides output.snapshot_every)");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Quasistatic gradient damage with fatigue: simulation and verification tool"};
  app.require_subcommand(1);

  CommonOptions sim_opts, sweep_opts, verify_opts, oracle_opts;
  std::string resume;
  int checkpoint_every = 0;
  std::optional<int> count;

  auto* sim = app.add_subcommand("simulate", "run one evolution and write CSV, VTK and the balance report");
  add_common(sim, sim_opts, true);
  sim->add_option("--resume", resume, "continue from a checkpoint file")->check(CLI::ExistingFile);
  sim->add_option("--checkpoint-every", checkpoint_every, "write checkpoint.json every N steps");

  auto* sweep = app.add_subcommand("sweep", "run a viscosity sweep and compare arc-length rescalings");
  add_common(sweep, sweep_opts, true);

  auto* verify = app.add_subcommand("verify", "run a configuration and check every diagnostic gate");
  add_common(verify, verify_opts, true);

  auto* oracle = app.add_subcommand("oracle-check", "compare the damage solver with active-set enumeration");
  add_common(oracle, oracle_opts, false);
  oracle->add_option("--count", count, "number of instances (overrides oracle.count)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) return cmd_simulate(sim_opts, resume, checkpoint_every);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*verify) return cmd_verify(verify_opts);
    if (*oracle) return cmd_oracle(oracle_opts, count);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace fatigue
