// Copyright 2026 The lincluster Authors
//
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

// Command-line front end: scheme simulation, chain scaling, coincidence-count
// analysis and the built-in verification suite.
//
// Exit codes: 0 success, 2 usage error, 3 parse error, 4 validation or
// configuration error, 5 verification criteria failed.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lincluster/acceptance.hpp"
#include "lincluster/counts.hpp"
#include "lincluster/schemes.hpp"
#include "lincluster/stabilizer.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitValidation = 4;
constexpr int kExitCriteria = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lincluster::parse_error("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string basis_label(std::size_t index, int qubits) {
  std::string s(static_cast<std::size_t>(qubits), '0');
  for (int q = 0; q < qubits; ++q)
    if (index >> (qubits - 1 - q) & 1) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

void print_state_report(const std::string& name, const lincluster::SchemeDescription& scheme,
                        const lincluster::RunResult& result) {
  using namespace lincluster;
  const QubitState shown = canonical_phase(result.state);
  const int n = shown.num_qubits();

  std::cout << "scheme: " << name << "\n";
  std::cout << "qubits: " << n << " (coincidence modes";
  for (int m : scheme.coincidence_modes) std::cout << ' ' << m;
  std::cout << "; H=0, V=1, first mode is the leftmost bit)\n";
  std::cout << "amplitudes:\n";
  for (std::size_t i = 0; i < shown.dimension(); ++i) {
    const auto a = shown.amplitude(i);
    if (std::abs(a) <= 1e-9) continue;
    char line[96];
    std::snprintf(line, sizeof(line), "  %s  %+.6f %+.6fi\n", basis_label(i, n).c_str(),
                  a.real(), a.imag());
    std::cout << line;
  }
  std::cout << "success probability: " << format_fixed(result.probability, 6) << "\n";
  if (n == 4) {
    const double fid =
        fidelity(result.state, cluster_state(4, ClusterConvention::hadamard_ends));
    std::cout << "fidelity vs 4-qubit linear cluster target: " << format_fixed(fid, 6)
              << "\n";
  } else {
    const double fid = fidelity(result.state, cluster_state(n));
    std::cout << "fidelity vs " << n << "-qubit linear cluster (standard form): "
              << format_fixed(fid, 6) << "\n";
  }
}

int cmd_simulate(const std::string& selector, const std::string& scheme_file) {
  using namespace lincluster;
  SchemeDescription scheme;
  std::string name;
  if (!scheme_file.empty()) {
    scheme = parse_scheme(read_file(scheme_file));
    name = scheme_file;
  } else if (selector == "fig1a") {
    scheme = build_fig1a();
    name = selector;
  } else if (selector == "fig1b") {
    scheme = build_fig1b();
    name = selector;
  } else if (selector == "fig1c") {
    scheme = build_fig1c();
    name = selector;
  } else {
    throw validation_error("unknown scheme selector '" + selector + "'");
  }
  print_state_report(name, scheme, run(scheme));
  return 0;
}

int cmd_chain(int pairs, int max_pairs) {
  using namespace lincluster;
  constexpr int kDefaultMaxPairs = 5;
  if (pairs < 2)
    throw validation_error("chain needs at least 2 pairs");
  if (pairs > max_pairs)
    throw validation_error("chain size " + std::to_string(pairs) +
                           " exceeds the configured maximum of " +
                           std::to_string(max_pairs) + " (raise with --max-pairs)");
  if (max_pairs > kDefaultMaxPairs)
    std::cerr << "warning: chain sizes above " << kDefaultMaxPairs
              << " pairs grow exponentially in memory and time\n";

  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run(build_chain(pairs));
  const auto t1 = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();

  const int qubits = 2 * pairs;
  std::cout << "pairs: " << pairs << "\n";
  std::cout << "qubits: " << qubits << "\n";
  std::cout << "success probability: " << format_fixed(result.probability, 6) << "\n";
  const double fid = fidelity(result.state, cluster_state(qubits));
  std::cout << "fidelity vs " << qubits << "-qubit linear cluster (standard form): "
            << format_fixed(fid, 6) << "\n";
  std::cout << "peak intermediate terms: " << result.peak_terms << "\n";
  std::cerr << "elapsed: " << format_fixed(seconds, 3) << " s\n";
  return 0;
}

int cmd_analyze(const std::string& counts_path, const std::string& out_path,
                const std::string& format) {
  using namespace lincluster;
  const auto report = analyze(parse_counts(read_file(counts_path)));
  std::string rendered;
  if (format == "json")
    rendered = to_json(report).dump(2) + "\n";
  else
    rendered = render_table(report);
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw validation_error("cannot write to " + out_path);
    out << rendered;
  }
  return 0;
}

int cmd_verify(const std::string& counts_path) {
  const auto results = lincluster::acceptance::run_acceptance({counts_path});
  const int failures = lincluster::acceptance::print_results(std::cout, results);
  return failures == 0 ? 0 : kExitCriteria;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear-optics cluster-state simulator and coincidence-count analyzer"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "run one optical scheme and report the "
                                                  "post-selected state");
  std::string selector, scheme_file;
  auto* sel_opt =
      simulate->add_option("--scheme", selector, "built-in scheme: fig1a, fig1b or fig1c");
  auto* file_opt =
      simulate->add_option("--scheme-file", scheme_file, "scheme description file");
  sel_opt->excludes(file_opt);

  auto* chain = app.add_subcommand("chain", "chain photon pairs into a 2N-qubit cluster");
  int pairs = 0, max_pairs = 5;
  chain->add_option("--pairs", pairs, "number of photon pairs (N >= 2)")->required();
  chain->add_option("--max-pairs", max_pairs, "override the size guard (default 5)");

  auto* analyze_cmd =
      app.add_subcommand("analyze", "analyze a fourfold-coincidence count table");
  std::string counts_path, out_path, format = "table";
  analyze_cmd->add_option("--counts", counts_path, "CSV count table")->required();
  analyze_cmd->add_option("--out", out_path, "write the report to a file");
  analyze_cmd->add_option("--format", format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));

  auto* verify =
      app.add_subcommand("verify", "run the built-in verification suite");
  std::string verify_counts = "data/table_a1.csv";
  verify->add_option("--counts", verify_counts, "count table used by the data criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      if (selector.empty() && scheme_file.empty())
        throw lincluster::validation_error(
            "simulate needs either --scheme or --scheme-file");
      return cmd_simulate(selector, scheme_file);
    }
    if (chain->parsed()) return cmd_chain(pairs, max_pairs);
    if (analyze_cmd->parsed()) return cmd_analyze(counts_path, out_path, format);
    if (verify->parsed()) return cmd_verify(verify_counts);
  } catch (const lincluster::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
