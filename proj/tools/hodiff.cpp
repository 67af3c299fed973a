// Command-line driver: identity checks, coefficient recovery, partition
// tables and the acceptance self-test.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hodiff/acceptance.hpp"
#include "hodiff/config.hpp"
#include "hodiff/error.hpp"
#include "hodiff/logderiv.hpp"

using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
  int jobs = 0;

  hodiff::Overrides overrides() const { return {seed, tol_abs, tol_rel, jobs}; }
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* cfg = cmd->add_option("--config", flags.config, "JSON configuration file");
  if (needs_config) cfg->required();
  cmd->add_option("--seed", flags.seed, "Override every sampling seed");
  cmd->add_option("--report", flags.report, "Write a structured JSON report to this path");
  cmd->add_option("--tol-abs", flags.tol_abs, "Override absolute tolerances");
  cmd->add_option("--tol-rel", flags.tol_rel, "Override relative tolerances");
  cmd->add_option("--jobs", flags.jobs, "Worker threads (0 = all available)")->check(CLI::NonNegativeNumber);
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_report(const std::string& path, json report) {
  if (path.empty()) return;
  report["timestamp"] = timestamp();
  std::ofstream out(path);
  if (!out) throw hodiff::ConfigError("cannot write report '" + path + "'");
  out << report.dump(2) << '\n';
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

void print_report(const hodiff::ResidualReport& r) {
  std::cout << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(16) << r.identity << " n=" << r.n
            << " samples=" << r.samples << " max|r|=" << sci(r.max_abs_residual)
            << " scale=" << sci(r.max_scale) << " tol=" << sci(r.tol.abs) << "+" << sci(r.tol.rel) << "*scale";
  if (r.vacuous) std::cout << " (vacuous)";
  std::cout << '\n';
  if (!r.pass && r.worst) {
    std::cout << "     worst at x=" << r.worst->x << ":";
    for (const auto& f : r.worst->functions) std::cout << " [" << f << "]";
    std::cout << '\n';
  }
  for (std::size_t i = 0; i < r.errors.size() && i < 5; ++i) std::cout << "     error: " << r.errors[i] << '\n';
}

int cmd_check(const CommonFlags& flags) {
  const auto run = hodiff::load_config_file(flags.config);
  if (run.checks.empty()) throw hodiff::ConfigError("config /checks: no checks declared");
  const auto reports = hodiff::run_checks(run, flags.overrides());
  std::cout << "operator: " << run.op.descriptor() << "\ndomain: " << run.domain.describe() << '\n';
  json checks = json::array();
  for (const auto& r : reports) {
    print_report(r);
    checks.push_back(hodiff::to_json(r));
  }
  const int code = hodiff::exit_code(reports);
  write_report(flags.report, {{"tool", "hodiff"}, {"command", "check"}, {"operator", run.op.descriptor()},
                              {"n", run.n}, {"checks", checks}, {"pass", code == 0}});
  return code;
}

int cmd_recover(const CommonFlags& flags) {
  const auto run = hodiff::load_config_file(flags.config);
  const auto outcome = hodiff::run_recovery(run, flags.overrides());
  const auto& p = outcome.profile;
  std::cout << "operator: " << run.op.descriptor() << '\n' << std::setw(12) << "x";
  for (int i = 1; i <= p.n; ++i) std::cout << std::setw(14) << ("c" + std::to_string(i));
  for (int i = 1; i <= p.n; ++i) std::cout << std::setw(14) << ("d" + std::to_string(i));
  std::cout << '\n';
  for (const auto& row : p.rows) {
    std::cout << std::setw(12) << std::setprecision(6) << row.x;
    if (!row.result) {
      std::cout << "  error: " << row.error << '\n';
      continue;
    }
    for (double v : row.result->c) std::cout << std::setw(14) << std::setprecision(8) << v;
    for (double v : row.result->d) std::cout << std::setw(14) << std::setprecision(8) << v;
    std::cout << '\n';
    for (const auto& w : row.result->warnings) std::cout << "     warning: " << w << '\n';
  }
  std::cout << "max adjacent jump: " << sci(p.max_adjacent_jump) << '\n';
  print_report(outcome.validation);
  const bool ok = outcome.validation.pass && p.failures() == 0;
  write_report(flags.report, {{"tool", "hodiff"}, {"command", "recover"}, {"operator", run.op.descriptor()},
                              {"profile", hodiff::profile_to_json(p)},
                              {"checks", json::array({hodiff::to_json(outcome.validation)})}, {"pass", ok}});
  return ok ? 0 : 1;
}

std::string multiplicity_text(const hodiff::PartitionTerm& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.multiplicities.size(); ++i) s += (i ? "," : "") + std::to_string(t.multiplicities[i]);
  return s + ")";
}

int cmd_partitions(int k, const CommonFlags& flags, bool log_table) {
  const auto terms = hodiff::enumerate_partition_multisets(k);
  json rows = json::array();
  if (log_table) {
    std::cout << std::left << std::setw(28) << "m_1..m_k" << std::right << std::setw(6) << "M" << std::setw(16)
              << "coefficient" << std::setw(16) << "on f-derivs" << "   monomial\n";
  } else {
    std::cout << std::left << std::setw(28) << "m_1..m_k" << "parts\n";
  }
  for (const auto& t : terms) {
    std::string mono;
    for (std::size_t j = 0; j < t.multiplicities.size(); ++j) {
      const int m = t.multiplicities[j];
      if (m == 0) continue;
      if (!mono.empty()) mono += " ";
      mono += "f^(" + std::to_string(j + 1) + ")";
      if (m > 1) mono += "^" + std::to_string(m);
    }
    mono += " / f^" + std::to_string(t.parts());
    if (log_table) {
      std::cout << std::left << std::setw(28) << multiplicity_text(t) << std::right << std::setw(6) << t.parts()
                << std::setw(16) << t.coefficient << std::setw(16) << t.derivative_coefficient() << "   " << mono
                << '\n';
      rows.push_back({{"multiplicities", t.multiplicities}, {"parts", t.parts()}, {"coefficient", t.coefficient},
                      {"derivative_coefficient", t.derivative_coefficient()}});
    } else {
      std::string parts;
      for (std::size_t j = t.multiplicities.size(); j-- > 0;) {
        for (int r = 0; r < t.multiplicities[j]; ++r) parts += (parts.empty() ? "" : "+") + std::to_string(j + 1);
      }
      std::cout << std::left << std::setw(28) << multiplicity_text(t) << parts << '\n';
      rows.push_back({{"multiplicities", t.multiplicities}, {"parts", t.parts()}});
    }
  }
  std::cout << terms.size() << " terms\n";
  write_report(flags.report, {{"tool", "hodiff"}, {"command", log_table ? "logderiv-table" : "partitions"},
                              {"k", k}, {"rows", rows}});
  return 0;
}

int cmd_selftest(const CommonFlags& flags) {
  hodiff::acceptance::Options opts;
  opts.seed = flags.seed.value_or(42);
  opts.jobs = flags.jobs;
  const auto results = hodiff::acceptance::run_all(opts);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << std::setw(2) << r.id << ": " << r.name << " -- "
              << r.summary << '\n';
    all = all && r.pass;
  }
  json report = hodiff::acceptance::to_json(results, opts.seed);
  report["tool"] = "hodiff";
  report["command"] = "selftest";
  write_report(flags.report, report);
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hodiff: identity checks and coefficient recovery for higher-order differential operators"};
  app.require_subcommand(1);

  CommonFlags check_flags, recover_flags, table_flags, part_flags, self_flags;
  int table_k = 3;
  int part_k = 4;

  auto* check = app.add_subcommand("check", "Run the checks declared in a config file");
  add_common(check, check_flags, true);
  auto* recover = app.add_subcommand("recover", "Recover canonical coefficients over a grid");
  add_common(recover, recover_flags, true);
  auto* table = app.add_subcommand("logderiv-table", "Print the partition terms of the k-th log-derivative");
  add_common(table, table_flags, false);
  table->add_option("--k", table_k, "Derivative order")->check(CLI::Range(1, hodiff::kMaxPartitionOrder));
  auto* parts = app.add_subcommand("partitions", "List the multiplicity vectors with sum i*m_i = k");
  add_common(parts, part_flags, false);
  parts->add_option("--k", part_k, "Partition size")->check(CLI::Range(1, hodiff::kMaxPartitionOrder));
  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  add_common(self, self_flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(check_flags);
    if (*recover) return cmd_recover(recover_flags);
    if (*table) return cmd_partitions(table_k, table_flags, true);
    if (*parts) return cmd_partitions(part_k, part_flags, false);
    if (*self) return cmd_selftest(self_flags);
  } catch (const hodiff::ConfigError& e) {
    std::cerr << "hodiff: " << e.what() << '\n';
    return 2;
  } catch (const hodiff::Error& e) {
    std::cerr << "hodiff: " << e.what() << '\n';
    return 2;
  }
  std::cerr << app.help();
  return 2;
}
