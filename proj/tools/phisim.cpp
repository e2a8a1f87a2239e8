// Command-line front end: one subcommand per scenario kind, plus run, suite,
// compare and dump.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phisim/compare.hpp"
#include "phisim/runner.hpp"
#include "phisim/scenario.hpp"
#include "phisim/snapshot.hpp"

namespace {

using namespace phisim;

struct Common {
  std::string scenario;
  std::string out = "runs";
  std::vector<std::string> overrides;
  int threads = 1;
};

void add_common(CLI::App* app, Common& c, bool need_scenario) {
  auto* opt = app->add_option("--scenario", c.scenario, "scenario file");
  if (need_scenario) opt->required();
  app->add_option("--out", c.out, "output root directory")->capture_default_str();
  app->add_option("--override", c.overrides, "section.key=value, repeatable");
  app->add_option("--threads", c.threads, "worker threads for suites")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int report(const RunResult& r, std::string_view name) {
  std::ostream& os = r.exit_code == exit_status::ok ? std::cout : std::cerr;
  os << name << ": " << r.message << '\n';
  for (const auto& v : r.violations) os << "  ceiling exceeded: " << v << '\n';
  if (r.exit_code == exit_status::ok || r.exit_code == exit_status::invariant) {
    std::cout << "  output: " << r.directory.string() << '\n';
  }
  return r.exit_code;
}

int run_one(const Common& c, std::optional<Kind> expected) {
  Scenario s;
  try {
    s = load_scenario(c.scenario, c.overrides);
  } catch (const Error& e) {
    std::cerr << c.scenario << ": " << e.what() << '\n';
    return exit_status::config;
  }
  if (expected && s.kind != *expected) {
    std::cerr << c.scenario << ": scenario kind is " << to_string(s.kind) << ", not "
              << to_string(*expected) << '\n';
    return exit_status::config;
  }
  return report(run_scenario(s, {c.out}), s.name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phisim: wave-function potential and Maxwell vector-potential simulations"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, Kind>> kind_commands;
  std::vector<std::unique_ptr<Common>> commons;
  const std::vector<std::pair<Kind, std::string>> kinds = {
      {Kind::schrodinger, "Crank-Nicolson or dense-spectrum Schroedinger run"},
      {Kind::phi, "wave-function potential run (velocity Verlet)"},
      {Kind::maxwell_fields, "(E, B) run with RK4"},
      {Kind::maxwell_potential, "vector-potential run with velocity Verlet"},
      {Kind::reconstruct_phi, "phi from a recorded Schroedinger run"},
      {Kind::reconstruct_A, "A from a recorded (E, B) run"}};
  for (const auto& [kind, help] : kinds) {
    auto* sub = app.add_subcommand(std::string(to_string(kind)), help);
    commons.push_back(std::make_unique<Common>());
    add_common(sub, *commons.back(), true);
    kind_commands.emplace_back(sub, kind);
  }

  Common run_opts;
  auto* run = app.add_subcommand("run", "run a scenario of any kind");
  add_common(run, run_opts, true);

  Common cmp_opts;
  std::string cmp_a, cmp_b, map_a = "none", map_b = "none", cmp_csv, cmp_json;
  auto* cmp = app.add_subcommand("compare", "compare two recorded runs");
  add_common(cmp, cmp_opts, false);
  cmp->add_option("--a", cmp_a, "first snapshot");
  cmp->add_option("--b", cmp_b, "second snapshot");
  cmp->add_option("--map-a", map_a, "none, to_wavefunction or a_to_fields");
  cmp->add_option("--map-b", map_b, "none, to_wavefunction or a_to_fields");
  cmp->add_option("--json", cmp_json, "write the summary as JSON");
  cmp->add_option("--csv", cmp_csv, "write per-frame differences as CSV");

  Common suite_opts;
  std::vector<std::string> suite_files;
  auto* suite = app.add_subcommand("suite", "run several scenarios");
  add_common(suite, suite_opts, false);
  suite->add_option("scenarios", suite_files, "scenario files")->required();

  std::string dump_in, dump_out;
  auto* dump = app.add_subcommand("dump", "convert a snapshot to CSV");
  dump->add_option("snapshot", dump_in, "snapshot file")->required();
  dump->add_option("--out", dump_out, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_status::config;
  }

  for (std::size_t i = 0; i < kind_commands.size(); ++i) {
    if (kind_commands[i].first->parsed()) return run_one(*commons[i], kind_commands[i].second);
  }
  if (run->parsed()) return run_one(run_opts, std::nullopt);

  if (cmp->parsed()) {
    if (!cmp_opts.scenario.empty()) return run_one(cmp_opts, Kind::compare);
    if (cmp_a.empty() || cmp_b.empty()) {
      std::cerr << "compare needs --scenario or both --a and --b\n";
      return exit_status::config;
    }
    try {
      const CompareReport r = compare_runs(read_snapshot(cmp_a), read_snapshot(cmp_b), map_a, map_b);
      print_compare_table(r, std::cout);
      if (!cmp_json.empty()) write_compare_json(r, cmp_json);
      if (!cmp_csv.empty()) write_compare_csv(r, cmp_csv);
    } catch (const Error& e) {
      std::cerr << "compare: " << e.what() << '\n';
      return exit_status::config;
    }
    return exit_status::ok;
  }

  if (suite->parsed()) {
    std::vector<Scenario> scenarios;
    for (const auto& f : suite_files) {
      try {
        scenarios.push_back(load_scenario(f, suite_opts.overrides));
      } catch (const Error& e) {
        std::cerr << f << ": " << e.what() << '\n';
        return exit_status::config;
      }
    }
    const auto results = run_suite(scenarios, {suite_opts.out}, suite_opts.threads);
    int worst = exit_status::ok;
    for (std::size_t i = 0; i < results.size(); ++i) {
      worst = std::max(worst, report(results[i], scenarios[i].name));
    }
    return worst;
  }

  if (dump->parsed()) {
    try {
      const Snapshot s = read_snapshot(dump_in);
      if (dump_out.empty()) {
        dump_csv(s, std::cout);
      } else {
        std::ofstream out(dump_out);
        if (!out) throw InvalidArgument("cannot write " + dump_out);
        dump_csv(s, out);
      }
    } catch (const Error& e) {
      std::cerr << "dump: " << e.what() << '\n';
      return exit_status::config;
    }
    return exit_status::ok;
  }
  return exit_status::config;
}
