// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// usage: fatigue_acceptance <configs dir> <scratch dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fatigue/config.hpp"
#include "fatigue/diagnostics.hpp"
#include "fatigue/energy.hpp"
#include "fatigue/evolution.hpp"
#include "fatigue/oracle.hpp"
#include "fatigue/rescaling.hpp"
#include "fatigue/runner.hpp"
#include "fatigue/variation.hpp"

namespace fs = std::filesystem;
using namespace fatigue;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int g_failures = 0;

void report(const char* id, bool pass, const std::string& what) {
  if (!pass) ++g_failures;
  fmt::print("{} {} {}\n", id, pass ? "PASS" : "FAIL", what);
  std::fflush(stdout);
}

struct Run {
  Mesh mesh;
  FeOperators ops;
  EvolutionSetup setup;
  EvolutionTrace trace;
};

// Irreversibility / bounds / cumulation monotonicity across every run of the suite.
struct MonotoneLedger {
  double alpha_increase = 0.0;
  double below = 0.0;
  double above = 0.0;
  double v_decrease = 0.0;
  int runs = 0;
  long steps = 0;

  void add(const EvolutionTrace& tr) {
    ++runs;
    for (int i = 0; i <= tr.completed(); ++i) {
      const Vector& a = tr.alpha(i);
      below = std::max(below, -a.minCoeff());
      above = std::max(above, a.maxCoeff() - 1.0);
      if (i == 0) continue;
      ++steps;
      alpha_increase = std::max(alpha_increase, (a - tr.alpha(i - 1)).maxCoeff());
      v_decrease = std::max(v_decrease, (tr.V(i - 1) - tr.V(i)).maxCoeff());
    }
  }
};

MonotoneLedger g_ledger;

Run run_config(const RunConfig& cfg, int steps) {
  Mesh mesh = make_mesh(cfg);
  FeOperators ops = build_fe_operators(mesh);
  EvolutionSetup setup = make_setup(cfg, mesh);
  setup.steps = steps;
  EvolutionTrace trace = run_evolution(setup, ops);
  g_ledger.add(trace);
  return {std::move(mesh), std::move(ops), std::move(setup), std::move(trace)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fatigue");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  // The subcommands print progress; keep the acceptance output to one line per criterion.
  std::streambuf* saved = std::cout.rdbuf();
  std::ostringstream sink;
  std::cout.rdbuf(sink.rdbuf());
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(saved);
  return rc;
}

void ac1() {
  const auto start = Clock::now();
  RunConfig cfg;
  const Mesh mesh = make_mesh(cfg);
  const FeOperators ops = build_fe_operators(mesh);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> da(0.05, 0.95), du(-1.0, 1.0);
  Vector alpha(ops.num_nodes()), u(ops.num_nodes());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    alpha[i] = da(rng);
    u[i] = du(rng);
  }
  const GradField gu = element_gradients(ops, u);
  const Vector g = grad_alpha_energy(alpha, gu, ops, cfg.laws);
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Vector beta(ops.num_nodes());
    for (Eigen::Index i = 0; i < beta.size(); ++i) beta[i] = du(rng);
    const double fd = (total_energy(alpha + h * beta, gu, ops, cfg.laws).total() -
                       total_energy(alpha - h * beta, gu, ops, cfg.laws).total()) /
                      (2.0 * h);
    const double exact = g.dot(beta);
    worst = std::max(worst, std::abs(exact - fd) / std::max(std::abs(exact), 1e-300));
  }
  const double secs = seconds_since(start);
  report("AC1", worst <= 1e-5 && secs < 10.0,
         fmt::format("gradient consistency: 20 directions on 8x8, max relative error {:.3e} (tol 1e-5), {:.2f} s "
                     "(limit 10 s)",
                     worst, secs));
}

void ac2(const RunConfig& cfg) {
  const auto start = Clock::now();
  const OracleBatchReport rep = run_oracle_batch(cfg.seed, 100, 1e-8, 2, 6, cfg.solver);
  const double secs = seconds_since(start);
  report("AC2", rep.count == 100 && rep.mismatches == 0 && secs < 60.0,
         fmt::format("oracle equivalence: {} instances, {} mismatches, max nodal difference {:.3e} (tol 1e-8), "
                     "{:.2f} s (limit 60 s)",
                     rep.count, rep.mismatches, rep.max_difference, secs));
}

void ac3_ac4(const Run& ref, const RunConfig& cfg) {
  const EvolutionTrace& tr = ref.trace;
  double worst_eq = 0.0;
  bool all_ok = tr.completed() == 100 && tr.all_converged();
  for (const StepRecord& r : tr.records) worst_eq = std::max(worst_eq, r.kkt.eq_residual);
  report("AC3", all_ok && worst_eq <= 1e-6,
         fmt::format("Euler equality: {} steps on {}x{} with eps {}, all converged: {}, max eq_residual {:.3e} "
                     "(tol 1e-6)",
                     tr.completed(), cfg.nx, cfg.ny, tr.eps, tr.all_converged() ? "yes" : "no",
                     worst_eq));

  int checked = 0;
  double worst_ratio = 0.0;
  for (const StepRecord& r : tr.records) {
    if (!r.converged || !r.lower_active.empty()) continue;
    if ((r.alpha - tr.alpha(r.step - 1)).cwiseAbs().maxCoeff() == 0.0) continue;
    ++checked;
    const double gap = std::abs(r.eps_alphadot_lumped - r.psi);
    worst_ratio = std::max(worst_ratio, gap / (r.eps_alphadot_lumped + r.psi + 1e-12));
  }
  report("AC4", checked > 0 && worst_ratio <= 1e-4,
         fmt::format("Psi-viscosity identity: {} damaging steps checked, max relative gap {:.3e} (tol 1e-4)", checked,
                     worst_ratio));
}

void ac5(RunConfig cfg) {
  const auto start = Clock::now();
  cfg.nx = 16;
  cfg.ny = 16;
  cfg.eps = 0.1;
  std::vector<double> residuals;
  double budget = 0.0;
  bool converged = true;
  for (int k : {50, 100, 200}) {
    const Run run = run_config(cfg, k);
    converged = converged && run.trace.all_converged();
    const BalanceReport b = energy_balance_residual(run.trace, run.ops, 0, run.trace.completed());
    residuals.push_back(std::abs(b.residual));
    budget = b.energy_start + b.work_total;
  }
  const bool strict = residuals[1] < residuals[0] && residuals[2] < residuals[1];
  const double frac = residuals[2] / budget;
  const double secs = seconds_since(start);
  report("AC5", converged && strict && frac <= 0.05 && secs < 300.0,
         fmt::format("energy balance on 16x16: |R| = {:.3e}, {:.3e}, {:.3e} for k = 50, 100, 200 (strictly "
                     "decreasing: {}), |R_200| / (E_0 + work) = {:.3e} (tol 5e-2), {:.1f} s (limit 300 s)",
                     residuals[0], residuals[1], residuals[2], strict ? "yes" : "no", frac, secs));
}

void ac7(const Run& ref) {
  const EvolutionTrace& tr = ref.trace;
  const ZetaSeries series = zeta_series(tr);
  const int n = tr.completed();
  const Vector total = tr.V0 + essential_variation(series, 0, n);
  const double scale = 1.0 + tr.V(n).cwiseAbs().maxCoeff();
  const double final_gap = (total - tr.V(n)).cwiseAbs().maxCoeff() / scale;

  double node_gap = 0.0;
  for (int i = 0; i <= n; ++i) {
    const InterpolatedState st = interpolate_trace(tr, tr.time(i));
    node_gap = std::max(node_gap, (st.affine.V - tr.V(i)).cwiseAbs().maxCoeff() / scale);
  }
  double split_gap = 0.0;
  const Vector whole = essential_variation(series, 0, n);
  for (int j = 0; j <= n; ++j) {
    const Vector parts = essential_variation(series, 0, j) + essential_variation(series, j, n);
    split_gap = std::max(split_gap, (parts - whole).cwiseAbs().maxCoeff() / scale);
  }
  const double tol = 1e-13;
  report("AC7", final_gap <= tol && node_gap <= tol && split_gap <= tol,
         fmt::format("cumulation identities: final V vs variation {:.3e}, interpolant at grid nodes {:.3e}, "
                     "split additivity over {} splits {:.3e} (relative, tol {:.0e})",
                     final_gap, node_gap, n + 1, split_gap, tol));
}

void ac8(const Run& ref, const RunConfig& cfg) {
  const EvolutionTrace& tr = ref.trace;
  const RescaledEvolution r = arc_length_rescale(tr, ref.ops, cfg.p, cfg.delta);
  double incr_gap = 0.0;
  for (int j = 1; j < r.samples(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double expect = (r.t[uj] - r.t[uj - 1]) + h1_norm(ref.ops, r.alpha[uj] - r.alpha[uj - 1]) +
                          w1p_norm(ref.ops, r.u[uj] - r.u[uj - 1], cfg.p);
    incr_gap = std::max(incr_gap, std::abs(r.ds[uj - 1] - expect) / expect);
  }
  double pair_excess = 0.0;
  long pairs = 0;
  for (int j = 0; j < r.samples(); ++j) {
    for (int l = j + 1; l < r.samples(); ++l) {
      const auto a = static_cast<std::size_t>(j), b = static_cast<std::size_t>(l);
      const double combined =
          (r.t[b] - r.t[a]) + h1_norm(ref.ops, r.alpha[b] - r.alpha[a]) + w1p_norm(ref.ops, r.u[b] - r.u[a], cfg.p);
      const double ds = r.s[b] - r.s[a];
      pair_excess = std::max(pair_excess, combined / ds - 1.0);
      ++pairs;
    }
  }
  bool monotone = true, lipschitz = true;
  const int fine = 2000;
  double prev_t = r.t_of_s(0.0);
  for (int q = 1; q <= fine; ++q) {
    const double s_prev = r.S * (q - 1) / fine, s_cur = r.S * q / fine;
    const double t_cur = r.t_of_s(s_cur);
    if (t_cur < prev_t) monotone = false;
    if (t_cur - prev_t > (s_cur - s_prev) * (1.0 + 1e-10)) lipschitz = false;
    prev_t = t_cur;
  }
  report("AC8", incr_gap <= 1e-14 && pair_excess <= 1e-10 && monotone && lipschitz,
         fmt::format("arc-length contract: per-increment gap {:.3e}, max pair excess {:.3e} over {} pairs (tol "
                     "1e-10), t(s) nondecreasing: {}, 1-Lipschitz: {}",
                     incr_gap, pair_excess, pairs, monotone ? "yes" : "no", lipschitz ? "yes" : "no"));
}

void ac9(const fs::path& configs) {
  const auto start = Clock::now();
  const RunConfig ramp = load_config(configs / "ramp_onset.cfg");
  const Run onset = run_config(ramp, ramp.steps);
  const double a0 = onset.trace.alpha0.minCoeff();
  double a_star = -1.0;
  for (int i = 1; i <= onset.trace.completed(); ++i) {
    if (onset.trace.alpha(i).minCoeff() < a0 - 1e-10) {
      a_star = ramp.schedule.value(onset.trace.time(i));
      break;
    }
  }
  const double ramp_resolution = ramp.schedule.rate * onset.trace.tau;

  const RunConfig fat = load_config(configs / "fatigue.cfg");
  const double amplitude = fat.schedule.amplitude;
  const bool frozen_ok = a_star > 0.0 && std::abs(amplitude - 0.8 * a_star) <= 0.8 * ramp_resolution + 1e-12;
  const double cycles = fat.T / fat.schedule.period;

  const Run cyc = run_config(fat, fat.steps);
  const double start_min = cyc.trace.alpha0.minCoeff();
  const double threshold = start_min - 0.01;
  double first_cycle = -1.0;
  for (int i = 1; i <= cyc.trace.completed(); ++i) {
    if (cyc.trace.alpha(i).minCoeff() < threshold) {
      first_cycle = cyc.trace.time(i) / fat.schedule.period;
      break;
    }
  }

  RunConfig frozen_cfg = fat;
  frozen_cfg.laws.f.k = 0.0;
  const Run frozen = run_config(frozen_cfg, fat.steps);
  double frozen_drop = 0.0;
  for (int i = 1; i <= frozen.trace.completed(); ++i)
    frozen_drop = std::max(frozen_drop, (frozen.trace.alpha0 - frozen.trace.alpha(i)).maxCoeff());

  const double secs = seconds_since(start);
  const bool damaged = first_cycle >= 0.0 && first_cycle <= 200.0;
  report("AC9",
         frozen_ok && damaged && frozen_drop <= 1e-12 && cycles <= 200.0 && secs < 600.0 &&
             cyc.trace.all_converged() && frozen.trace.all_converged(),
         fmt::format("fatigue onset: A* = {:.4f} from the ramp run, configured amplitude {:.4f} = {:.4f} A*; "
                     "min alpha < {:.2f} after {:.2f} of {:.0f} cycles; frozen f(0): max damage drop {:.3e} "
                     "(tol 1e-12); {:.1f} s (limit 600 s)",
                     a_star, amplitude, amplitude / a_star, threshold, first_cycle, cycles, frozen_drop, secs));
}

void ac10(RunConfig cfg) {
  std::vector<RescaledEvolution> list;
  std::string steps_used;
  bool converged = true;
  for (double eps : {0.2, 0.1, 0.05}) {
    cfg.eps = eps;
    const int k = sweep_steps(cfg, eps);
    const Run run = run_config(cfg, k);
    converged = converged && run.trace.all_converged();
    list.push_back(arc_length_rescale(run.trace, run.ops, cfg.p, cfg.delta));
    steps_used += fmt::format("{}{}", steps_used.empty() ? "" : "/", k);
  }
  const SweepReport rep = sweep_compare(list, cfg.laws);
  const bool trend = rep.instability_nonincreasing.value_or(false);
  std::string measures;
  for (const SweepEntry& e : rep.entries)
    measures += fmt::format("{}eps {}: S {:.4f} I {:.4e}", measures.empty() ? "" : "; ", e.eps, e.S,
                            e.instability_measure);
  report("AC10", converged && rep.S_ratio <= 2.0 && trend,
         fmt::format("vanishing-viscosity trend: k = {}; {}; S ratio {:.4f} (limit 2), instability nonincreasing "
                     "as eps decreases: {}",
                     steps_used, measures, rep.S_ratio, trend ? "yes" : "no"));
}

void ac11(const fs::path& configs, const fs::path& scratch) {
  const std::string ref = (configs / "reference.cfg").string();
  std::vector<std::string> notes;
  bool same = true;
  const auto twice = [&](const std::vector<std::string>& base, const std::vector<std::string>& files,
                         const std::string& tag) {
    std::vector<std::string> outs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = scratch / fmt::format("{}_{}", tag, rep);
      fs::remove_all(dir);
      std::vector<std::string> args = base;
      args.push_back("--out-dir");
      args.push_back(dir.string());
      const int rc = cli(args);
      std::string blob = fmt::format("rc={}\n", rc);
      for (const auto& f : files) blob += slurp(dir / f) + "\x1f";
      outs.push_back(blob);
      if (rc != 0 || !fs::exists(dir / files.front())) same = false;
    }
    const bool eq = outs[0] == outs[1];
    same = same && eq;
    notes.push_back(fmt::format("{} {}", tag, eq ? "identical" : "differs"));
  };
  twice({"verify", "--config", ref}, {"verify_report.txt", "trace.csv"}, "verify");
  twice({"oracle-check", "--config", ref}, {"oracle_summary.txt"}, "oracle-check");
  report("AC11", same, fmt::format("determinism: two runs each, {}, {}", notes[0], notes[1]));
}

void ac6() {
  const bool ok = g_ledger.alpha_increase <= 1e-12 && g_ledger.below <= 1e-12 && g_ledger.above <= 1e-12 &&
                  g_ledger.v_decrease <= 0.0;
  report("AC6", ok,
         fmt::format("irreversibility and bounds over {} runs / {} steps: max alpha increase {:.3e}, below 0 by "
                     "{:.3e}, above 1 by {:.3e} (tol 1e-12), max V decrease {:.3e}",
                     g_ledger.runs, g_ledger.steps, std::max(g_ledger.alpha_increase, 0.0),
                     std::max(g_ledger.below, 0.0), std::max(g_ledger.above, 0.0),
                     std::max(g_ledger.v_decrease, 0.0)));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: fatigue_acceptance <configs dir> <scratch dir>\n";
    return 2;
  }
  const fs::path configs = argv[1];
  const fs::path scratch = argv[2];
  fs::create_directories(scratch);

  const std::vector<std::pair<const char*, std::function<void()>>> steps = [&] {
    const RunConfig ref_cfg = load_config(configs / "reference.cfg");
    auto ref = std::make_shared<Run>(run_config(ref_cfg, ref_cfg.steps));
    return std::vector<std::pair<const char*, std::function<void()>>>{
        {"AC1", [] { ac1(); }},
        {"AC2", [=] { ac2(ref_cfg); }},
        {"AC3", [=] { ac3_ac4(*ref, ref_cfg); }},
        {"AC5", [=] { ac5(ref_cfg); }},
        {"AC7", [=] { ac7(*ref); }},
        {"AC8", [=] { ac8(*ref, ref_cfg); }},
        {"AC9", [=] { ac9(configs); }},
        {"AC10", [=] { ac10(ref_cfg); }},
        {"AC11", [=] { ac11(configs, scratch); }},
        {"AC6", [] { ac6(); }},
    };
  }();
  for (const auto& [id, fn] : steps) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, fmt::format("threw: {}", e.what()));
    }
  }
  fmt::print("{} criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
