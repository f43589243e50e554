// Copyright 2026 The fdos-pon Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fdos: instance generation, FDOS solving, exact comparison, simulation runs
// and load sweeps.
//
// Exit codes: 0 success, 1 internal error, 2 parse or usage error,
// 3 validation error, 4 infeasible instance, 5 enumeration budget exceeded.
// FDOS_LOG sets the stderr log level (trace, debug, info, warn, error, off).

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fdos/fdos.hpp"
#include "fdos/instance_gen.hpp"
#include "fdos/io/instance.hpp"
#include "fdos/io/scenario.hpp"
#include "fdos/io/sweep.hpp"
#include "fdos/oracle.hpp"

namespace {

enum Exit { kOk = 0, kInternal = 1, kParse = 2, kValidation = 3, kInfeasible = 4, kBudget = 5 };

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("fdos");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("FDOS_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw fdos::ValidationError("cannot write '" + out_path + "'");
  f << text;
  spdlog::info("wrote {}", out_path);
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::string ratio_text(const fdos::Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

struct GenArgs {
  int onus = 8;
  int slots = 6;
  std::uint64_t seed = 1;
  bool feasible = false;
  double forced_fraction = 0.2;
  int max_weight = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  fdos::GenOptions opt;
  opt.forced_fraction = a.forced_fraction;
  opt.max_onu_weight = a.max_weight;
  opt.require_feasible_first_level = a.feasible;
  const auto g = fdos::generate_instance(a.onus, a.slots, a.seed, opt);
  emit(a.out, fdos::io::to_json(fdos::io::InstanceFile::from(g)));
  return kOk;
}

struct SolveArgs {
  std::string instance;
  bool oracle = false;
  double budget = 1e7;
  std::string out;
};

std::string oracle_lines(const fdos::OracleResult& r) {
  std::ostringstream os;
  if (!r.feasible) {
    os << "oracle infeasible\n";
    return os.str();
  }
  os << "oracle_assignment " << join(r.best.slot_of) << "\n"
     << "oracle_f " << r.best_f << "\n"
     << "oracle_f1 " << r.best_f1 << "\n"
     << "oracle_f2 " << r.best_f2 << "\n"
     << "oracle_explored " << r.explored << "\n";
  return os.str();
}

int cmd_solve(const SolveArgs& a) {
  const auto file = fdos::io::parse_instance(fdos::io::read_file(a.instance));
  const auto p = file.problem();
  const auto res = fdos::fdos(p);
  const auto& x = res.assignment;
  const auto counts = fdos::slot_counts(x, p);
  const auto f = fdos::f(x, p);
  std::ostringstream os;
  os << "assignment " << join(x.slot_of) << "\n"
     << "f " << f << "\n"
     << "f1 " << fdos::f1(x) << "\n"
     << "f2 " << fdos::f2(x, p) << "\n"
     << "jain " << fdos::io::fmt_num(fdos::jain_index(counts).value()) << " (" << ratio_text(fdos::jain_index(counts).exact)
     << ")\n"
     << "recursion_depth " << res.recursion_depth << "\n"
     << "first_level_feasible " << (res.first_level_feasible ? "true" : "false") << "\n";
  if (a.oracle) {
    fdos::OracleOptions opt;
    opt.budget = a.budget;
    const auto r = fdos::exact_solve(p, opt);
    os << oracle_lines(r);
    if (r.feasible) os << "rho_f " << ratio_text(fdos::approximation_ratio(f, r.best_f)) << "\n";
  }
  emit(a.out, os.str());
  return kOk;
}

int cmd_oracle(const SolveArgs& a) {
  const auto file = fdos::io::parse_instance(fdos::io::read_file(a.instance));
  const auto p = file.problem();
  fdos::OracleOptions opt;
  opt.budget = a.budget;
  const auto r = fdos::exact_solve(p, opt);
  emit(a.out, oracle_lines(r));
  return r.feasible ? kOk : kInfeasible;
}

struct SimArgs {
  std::string scenario;
  std::optional<double> load;
  std::optional<int> onus;
  std::optional<double> rtt_us;
  std::optional<std::int64_t> threshold_bits;
  std::optional<double> runtime_s;
  std::optional<std::uint64_t> seed;
  std::string scheduler;
  std::string predictor;
  std::string out;
  std::string summary;
  int workers = 1;
};

fdos::io::Scenario load_scenario(const SimArgs& a) {
  fdos::io::Scenario sc;
  if (!a.scenario.empty()) {
    sc = fdos::io::parse_scenario(fdos::io::read_file(a.scenario));
  } else {
    sc.loads = {0.5};
  }
  if (a.seed) sc.base.seed = *a.seed;
  if (a.runtime_s) sc.base.runtime = fdos::Duration(std::llround(*a.runtime_s * 1e9));
  if (!a.predictor.empty()) sc.base.predictor = fdos::sim::parse_predictor(a.predictor);
  if (!a.scheduler.empty()) sc.schedulers = {fdos::sim::parse_scheduler(a.scheduler)};
  if (a.load) sc.loads = {*a.load};
  if (a.onus) sc.num_onus = {*a.onus};
  if (a.rtt_us) sc.rtts = {fdos::Duration(std::llround(*a.rtt_us * 1e3))};
  if (a.threshold_bits) sc.thresholds = {*a.threshold_bits};
  return sc;
}

void log_row(std::size_t done, std::size_t total, const fdos::io::SweepRow& r) {
  const auto& c = r.point.config;
  spdlog::info("[{}/{}] {} load={} N={} rep={} energy={:.3f} J delay={:.3f} ms drops={}", done, total,
               fdos::sim::to_string(c.scheduler), c.load, c.num_onus, r.point.replication, r.metrics.energy_joules,
               r.metrics.avg_delay_ns / 1e6, r.metrics.drops);
  if (r.metrics.truncated) spdlog::warn("point stopped at the event cap; row flagged");
}

// One run per scheduler at the first value of every axis.
int cmd_simulate(const SimArgs& a) {
  auto sc = load_scenario(a);
  sc.loads.resize(1);
  sc.num_onus.resize(1);
  sc.rtts.resize(1);
  sc.thresholds.resize(1);
  sc.replications = 1;
  const auto rows = fdos::io::run_sweep(sc, 1, log_row);
  std::ostringstream os;
  fdos::io::write_rows(os, rows);
  emit(a.out, os.str());
  return kOk;
}

int cmd_sweep(const SimArgs& a) {
  const auto sc = load_scenario(a);
  const auto rows = fdos::io::run_sweep(sc, a.workers, log_row);
  std::ostringstream os;
  fdos::io::write_rows(os, rows);
  emit(a.out, os.str());
  if (!a.summary.empty()) {
    std::ostringstream ss;
    fdos::io::write_summary(ss, rows);
    emit(a.summary, ss.str());
  }
  return kOk;
}

void add_sim_options(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--load", a.load, "offered load as a fraction of the link rate");
  cmd->add_option("--onus", a.onus, "number of ONUs");
  cmd->add_option("--rtt-us", a.rtt_us, "round-trip time in microseconds");
  cmd->add_option("--threshold-bits", a.threshold_bits, "buffer threshold B_th in bits");
  cmd->add_option("--runtime-s", a.runtime_s, "simulated seconds");
  cmd->add_option("--seed", a.seed, "base seed");
  cmd->add_option("--scheduler", a.scheduler, "osmp or fdos (default: both)")
      ->check(CLI::IsMember({"osmp", "fdos"}));
  cmd->add_option("--predictor", a.predictor, "oracle or ewma")->check(CLI::IsMember({"oracle", "ewma"}));
  cmd->add_option("--out", a.out, "CSV output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Fair wake-up scheduling for sleeping ONUs: solver, exact oracle and EPON simulator"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random instance file");
  g->add_option("--onus", gen.onus, "number of ONUs")->check(CLI::PositiveNumber);
  g->add_option("--slots", gen.slots, "number of slots")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "seed");
  g->add_flag("--feasible", gen.feasible, "resample until the first-level transport problem is feasible");
  g->add_option("--forced-fraction", gen.forced_fraction, "probability of a forced window")->check(CLI::Range(0.0, 1.0));
  g->add_option("--max-weight", gen.max_weight, "per-ONU weights drawn from [1, max]")->check(CLI::PositiveNumber);
  g->add_option("--out", gen.out, "output path (default stdout)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "run FDOS on an instance file");
  s->add_option("instance", solve.instance, "instance JSON")->required();
  s->add_flag("--oracle", solve.oracle, "also solve exactly and report rho_f");
  s->add_option("--budget", solve.budget, "max enumeration size for the oracle");
  s->add_option("--out", solve.out, "output path (default stdout)");

  SolveArgs orc;
  auto* o = app.add_subcommand("oracle", "solve an instance file exactly by enumeration");
  o->add_option("instance", orc.instance, "instance JSON")->required();
  o->add_option("--budget", orc.budget, "max enumeration size");
  o->add_option("--out", orc.out, "output path (default stdout)");

  SimArgs simulate;
  auto* sim = app.add_subcommand("simulate", "run one simulation point per scheduler");
  sim->add_option("scenario", simulate.scenario, "optional scenario file supplying the base parameters");
  add_sim_options(sim, simulate);

  SimArgs sweep;
  auto* sw = app.add_subcommand("sweep", "run every point of a scenario file");
  sw->add_option("scenario", sweep.scenario, "scenario file")->required();
  add_sim_options(sw, sweep);
  sw->add_option("--summary", sweep.summary, "per-point mean/stddev CSV path");
  sw->add_option("--workers", sweep.workers, "parallel workers")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*o) return cmd_oracle(orc);
    if (*sim) return cmd_simulate(simulate);
    if (*sw) return cmd_sweep(sweep);
  } catch (const fdos::ParseError& e) {
    spdlog::error("{}", e.what());
    if (!e.field().empty()) spdlog::error("field: {}", e.field());
    return kParse;
  } catch (const fdos::ValidationError& e) {
    spdlog::error("{}", e.what());
    return kValidation;
  } catch (const fdos::InputError& e) {
    spdlog::error("{}", e.what());
    if (!e.onus().empty()) spdlog::error("ONUs: {}", join(e.onus()));
    return kInfeasible;
  } catch (const fdos::BudgetExceeded& e) {
    spdlog::error("{}", e.what());
    return kBudget;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kInternal;
  }
  return kInternal;
}
