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

// End-to-end verification of the simulator and the analysis pipeline against
// the bundled reference values.  Used by the `verify` CLI subcommand and by
// the acceptance test binary; everything here is check-only code and stays
// independent of the implementation paths it exercises.

#ifndef LINCLUSTER_ACCEPTANCE_HPP
#define LINCLUSTER_ACCEPTANCE_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lincluster/counts.hpp"
#include "lincluster/elements.hpp"
#include "lincluster/fock.hpp"
#include "lincluster/schemes.hpp"
#include "lincluster/stabilizer.hpp"

namespace lincluster::acceptance {

// Reference correlation table for the bundled dataset (value, sigma per
// signed stabilizer operator) and the quoted per-setting error rates.
struct ReferenceCorrelation {
  const char* element;
  const char* op;
  double value;
  double sigma;
};

inline constexpr std::array<ReferenceCorrelation, 15> kReferenceCorrelations{{
    {"g1", "+ZZII", 0.9864, 0.0032},
    {"g2", "+XXZI", 0.9474, 0.0113},
    {"g3", "+IZXX", 0.9290, 0.0129},
    {"g4", "+IIZZ", 0.9773, 0.0041},
    {"g1g2", "-YYZI", 0.9646, 0.0091},
    {"g1g3", "+ZIXX", 0.9315, 0.0127},
    {"g1g4", "+ZZZZ", 0.9773, 0.0113},
    {"g2g3", "+XYYX", 0.9342, 0.0132},
    {"g2g4", "+XXIZ", 0.9474, 0.0137},
    {"g3g4", "-IZYY", 0.9301, 0.0091},
    {"g1g2g3", "+YXYX", 0.9261, 0.0137},
    {"g1g2g4", "-YYIZ", 0.9646, 0.0091},
    {"g1g3g4", "-ZIYY", 0.9249, 0.0137},
    {"g2g3g4", "+XYXY", 0.9445, 0.0122},
    {"g1g2g3g4", "+YXXY", 0.9429, 0.0123},
}};

struct ReferenceErrorRate {
  const char* setting;
  double rate;
};

inline constexpr std::array<ReferenceErrorRate, 9> kReferenceErrorRates{{
    {"ZZZZ", 0.0148},
    {"ZZXX", 0.0453},
    {"XXZZ", 0.0355},
    {"ZZYY", 0.0376},
    {"YYZZ", 0.0229},
    {"XYXY", 0.0277},
    {"XYYX", 0.0329},
    {"YXXY", 0.0286},
    {"YXYX", 0.0369},
}};

inline constexpr double kReferenceFidelity = 0.9517;
inline constexpr double kReferenceFidelitySigma = 0.0027;
inline constexpr double kWitnessLow = 165.0;
inline constexpr double kWitnessHigh = 169.0;

struct CriterionResult {
  int id = 0;
  std::string summary;
  bool passed = false;
  std::vector<std::string> notes;  // mismatch diagnostics
};

struct AcceptanceOptions {
  std::string counts_path = "data/table_a1.csv";
};

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline Eigen::MatrixXcd random_unitary(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = Amplitude{gauss(rng), gauss(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    Amplitude d = r(c, c);
    q.col(c) *= d / std::abs(d);
  }
  return q;
}

// Reference expansion of a transform: substitute every creation operator and
// multiply the polynomial out one factor at a time (no multinomial shortcut).
inline FockState naive_apply_transform(const FockState& state, const ModeTransform& t) {
  const std::size_t dim = t.modes().size();
  std::vector<std::size_t> pos(dim);
  for (std::size_t k = 0; k < dim; ++k)
    pos[k] = static_cast<std::size_t>(state.mode_index(t.modes()[k]));

  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    Amplitude coeff = amp;
    for (std::size_t k = 0; k < dim; ++k)
      for (int i = 2; i <= occ[pos[k]]; ++i) coeff /= std::sqrt(static_cast<double>(i));

    std::map<std::vector<int>, Amplitude> poly{{std::vector<int>(dim, 0), coeff}};
    for (std::size_t k = 0; k < dim; ++k) {
      for (int rep = 0; rep < occ[pos[k]]; ++rep) {
        std::map<std::vector<int>, Amplitude> next;
        for (const auto& [exp, c] : poly) {
          for (std::size_t j = 0; j < dim; ++j) {
            const Amplitude u = t.matrix()(static_cast<Eigen::Index>(j),
                                           static_cast<Eigen::Index>(k));
            if (std::abs(u) == 0.0) continue;
            auto e2 = exp;
            e2[j] += 1;
            next[e2] += c * u;
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [exp, c] : poly) {
      Occupation next(occ);
      Amplitude contrib = c;
      for (std::size_t k = 0; k < dim; ++k) {
        next[pos[k]] = static_cast<std::uint8_t>(exp[k]);
        for (int i = 2; i <= exp[k]; ++i) contrib *= std::sqrt(static_cast<double>(i));
      }
      out[next] += contrib;
    }
  }
  return FockState::from_terms(state.modes(), std::move(out));
}

inline std::set<int> photon_totals(const FockState& s) {
  std::set<int> totals;
  for (const auto& [occ, amp] : s.terms()) {
    int t = 0;
    for (auto c : occ) t += c;
    totals.insert(t);
  }
  return totals;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// individual criteria

inline CriterionResult check_direct_scheme() {
  CriterionResult r{1, "direct scheme: probability 1/4, unit fidelity with the 4-qubit target", false, {}};
  const auto run_result = run(build_fig1c());
  const auto target = cluster_state(4, ClusterConvention::hadamard_ends);
  const double fid = fidelity(run_result.state, target);
  r.passed = std::abs(run_result.probability - 0.25) <= 1e-10 && fid >= 1.0 - 1e-10;
  if (!r.passed)
    r.notes.push_back("probability " + detail::fixed(run_result.probability, 12) +
                      ", fidelity " + detail::fixed(fid, 12));
  return r;
}

inline CriterionResult check_attenuated_schemes() {
  CriterionResult r{2, "attenuated schemes: probability 1/9, same output state either side", false, {}};
  const auto ra = run(build_fig1a());
  const auto rb = run(build_fig1b());
  const auto target = cluster_state(4, ClusterConvention::hadamard_ends);
  const double fid_a = fidelity(ra.state, target);
  const double fid_ab = fidelity(ra.state, rb.state);
  r.passed = std::abs(ra.probability - 1.0 / 9.0) <= 1e-10 &&
             std::abs(rb.probability - 1.0 / 9.0) <= 1e-10 && fid_a >= 1.0 - 1e-10 &&
             fid_ab >= 1.0 - 1e-10;
  if (!r.passed) {
    r.notes.push_back("prob a " + detail::fixed(ra.probability, 12) + ", prob b " +
                      detail::fixed(rb.probability, 12));
    r.notes.push_back("fidelity vs target " + detail::fixed(fid_a, 12) +
                      ", a-vs-b " + detail::fixed(fid_ab, 12));
  }
  return r;
}

inline CriterionResult check_chains() {
  CriterionResult r{3, "chains N=2,3,4: probability (1/4)^(N-1), unit fidelity with the 2N-qubit cluster", true, {}};
  for (int n : {2, 3, 4}) {
    const auto res = run(build_chain(n));
    const double want = std::pow(0.25, n - 1);
    const double fid = fidelity(res.state, cluster_state(2 * n));
    if (std::abs(res.probability - want) > 1e-10 || fid < 1.0 - 1e-10) {
      r.passed = false;
      r.notes.push_back("N=" + std::to_string(n) + ": probability " +
                        detail::fixed(res.probability, 12) + " (want " +
                        detail::fixed(want, 12) + "), fidelity " +
                        detail::fixed(fid, 12));
    }
  }
  return r;
}

inline CriterionResult check_cluster_oracle() {
  CriterionResult r{4, "cluster recurrence agrees with the controlled-phase construction, n=2..8", true, {}};
  for (int n = 2; n <= 8; ++n) {
    const double fid = fidelity(cluster_state(n), cluster_state_by_cphase(n));
    if (fid < 1.0 - 1e-12) {
      r.passed = false;
      r.notes.push_back("n=" + std::to_string(n) + ": fidelity " + detail::fixed(fid, 15));
    }
  }
  return r;
}

inline CriterionResult check_schmidt() {
  CriterionResult r{5, "middle-source Schmidt coefficients (sqrt(7)+/-1)/4", false, {}};
  Eigen::Matrix2cd m;
  const double s3 = std::sqrt(3.0) / 4.0;
  m << 0.25, s3, s3, -0.75;
  const auto form = schmidt_decompose(m);
  const double hi = (std::sqrt(7.0) + 1.0) / 4.0;
  const double lo = (std::sqrt(7.0) - 1.0) / 4.0;
  r.passed = std::abs(form.coefficients[0] - hi) <= 1e-12 &&
             std::abs(form.coefficients[1] - lo) <= 1e-12;
  if (!r.passed)
    r.notes.push_back("coefficients " + detail::fixed(form.coefficients[0], 15) + ", " +
                      detail::fixed(form.coefficients[1], 15));
  return r;
}

inline CriterionResult check_correlations(const AnalysisReport& report) {
  CriterionResult r{6, "dataset reproduces the reference correlation table, fidelity and witness", true, {}};
  int value_ok = 0, sigma_ok = 0;
  for (const auto& ref : kReferenceCorrelations) {
    const CorrelationRow* row = nullptr;
    for (const auto& c : report.correlations)
      if (c.element == ref.element) row = &c;
    if (row == nullptr || row->op.str() != ref.op) {
      r.passed = false;
      r.notes.push_back(std::string(ref.element) + ": operator mismatch");
      continue;
    }
    const double v = report_round(row->value);
    const double s = report_round(row->sigma);
    if (std::abs(v - ref.value) <= 1e-4 + 1e-9) {
      ++value_ok;
    } else {
      r.passed = false;
      r.notes.push_back(std::string(ref.element) + " " + row->op.str_indexed() +
                        ": value " + detail::fixed(v, 4) + " (reference " +
                        detail::fixed(ref.value, 4) + ")");
    }
    if (std::abs(s - ref.sigma) <= 2e-4 + 1e-9) {
      ++sigma_ok;
    } else {
      r.passed = false;
      r.notes.push_back(std::string(ref.element) + " " + row->op.str_indexed() +
                        ": sigma " + detail::fixed(s, 4) + " (reference " +
                        detail::fixed(ref.sigma, 4) + ")");
    }
  }
  const bool fid_ok = std::abs(report.fidelity - kReferenceFidelity) <= 1e-4 + 1e-9;
  const bool fsig_ok =
      std::abs(report.fidelity_sigma - kReferenceFidelitySigma) <= 2e-4 + 1e-9;
  const bool wit_ok =
      report.witness_sigmas >= kWitnessLow && report.witness_sigmas <= kWitnessHigh;
  if (!fid_ok)
    r.notes.push_back("fidelity " + detail::fixed(report.fidelity, 6) + " (reference " +
                      detail::fixed(kReferenceFidelity, 4) + ")");
  if (!fsig_ok)
    r.notes.push_back("fidelity sigma " + detail::fixed(report.fidelity_sigma, 6) +
                      " (reference " + detail::fixed(kReferenceFidelitySigma, 4) + ")");
  if (!wit_ok)
    r.notes.push_back("witness " + detail::fixed(report.witness_sigmas, 2) +
                      " outside [" + detail::fixed(kWitnessLow, 0) + ", " +
                      detail::fixed(kWitnessHigh, 0) + "]");
  r.passed = r.passed && fid_ok && fsig_ok && wit_ok;
  r.notes.insert(r.notes.begin(),
                 "values " + std::to_string(value_ok) + "/15, sigmas " +
                     std::to_string(sigma_ok) + "/15 within tolerance; fidelity " +
                     detail::fixed(report_round(report.fidelity), 4) + " +/- " +
                     detail::fixed(report_round(report.fidelity_sigma), 4) +
                     ", witness " + detail::fixed(report.witness_sigmas, 1));
  return r;
}

inline CriterionResult check_error_rates(const AnalysisReport& report) {
  CriterionResult r{7, "dataset reproduces the reference error rates, max attribution, 1/4 threshold", true, {}};
  int rate_ok = 0;
  for (const auto& ref : kReferenceErrorRates) {
    const SettingErrorRate* row = nullptr;
    for (const auto& er : report.error_rates)
      if (er.setting == ref.setting) row = &er;
    if (row == nullptr) {
      r.passed = false;
      r.notes.push_back(std::string(ref.setting) + ": missing");
      continue;
    }
    const double v = report_round(row->error.rate);
    if (std::abs(v - ref.rate) <= 1e-4 + 1e-9) {
      ++rate_ok;
    } else {
      r.passed = false;
      r.notes.push_back(std::string(ref.setting) + ": rate " + detail::fixed(v, 4) +
                        " (reference " + detail::fixed(ref.rate, 4) + ")");
    }
  }
  const bool attribution_ok = report.max_flip.setting == "ZZYY" &&
                              report.max_flip.op.str().substr(1) == "ZIYY";
  if (!attribution_ok) {
    r.passed = false;
    r.notes.push_back("max flip attributed to " + report.max_flip.op.str_indexed() +
                      " on " + report.max_flip.setting);
  }
  if (!report.all_rates_below_threshold) {
    r.passed = false;
    r.notes.push_back("an error rate reaches the 0.25 threshold");
  }
  r.notes.insert(r.notes.begin(),
                 "rates " + std::to_string(rate_ok) + "/9 within tolerance; max flip " +
                     detail::fixed(report_round(report.max_flip.flip.rate), 4) + " at " +
                     report.max_flip.op.str_indexed() + " (" + report.max_flip.setting +
                     "); all below 1/4: " +
                     (report.all_rates_below_threshold ? "yes" : "no"));
  return r;
}

inline CriterionResult check_lhv() {
  CriterionResult r{8, "GHZ-type argument: contradiction holds and is tight under single sign flips", true, {}};
  const std::array<std::pair<const char*, int>, 4> base{{
      {"XXZI", +1}, {"YYZI", -1}, {"XYYX", +1}, {"YXYX", +1}}};
  std::vector<std::pair<PauliString, int>> constraints;
  for (const auto& [op, s] : base) constraints.emplace_back(PauliString::parse(op), s);
  if (!lhv_contradiction(constraints).contradiction) {
    r.passed = false;
    r.notes.push_back("base constraints unexpectedly satisfiable");
  }
  for (std::size_t flip = 0; flip < 4; ++flip) {
    auto flipped = constraints;
    flipped[flip].second = -flipped[flip].second;
    const auto res = lhv_contradiction(flipped);
    bool ok = !res.contradiction && res.witness.has_value();
    if (ok) {
      // the witness must actually satisfy every constraint
      for (const auto& [op, required] : flipped) {
        int prod = op.sign;
        for (std::size_t q = 0; q < op.size(); ++q)
          if (op.letters[q] != Pauli::I)
            prod *= res.witness->values.at({static_cast<int>(q), pauli_char(op.letters[q])});
        ok = ok && prod == required;
      }
    }
    if (!ok) {
      r.passed = false;
      r.notes.push_back("flip of constraint " + std::to_string(flip + 1) +
                        " did not yield a valid witness");
    }
  }
  return r;
}

inline CriterionResult check_properties() {
  CriterionResult r{9, "property suites: unitarity, photon number, bosonic bookkeeping, group closure, negative control", true, {}};
  std::mt19937 rng(0x5eed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // random couplers stay unitary
  for (int i = 0; i < 100; ++i) {
    const auto t = pdbs({1, 2, uni(rng), uni(rng)});
    if (!t.is_unitary(1e-12)) {
      r.passed = false;
      r.notes.push_back("random coupler " + std::to_string(i) + " is not unitary");
      break;
    }
  }

  // random unitaries preserve norm and photon-number content
  const auto reg = spatial_register({1, 2});
  for (int i = 0; i < 100; ++i) {
    FockState::TermMap terms;
    const int total = 1 + static_cast<int>(uni(rng) * 4.0);
    for (int t = 0; t < 5; ++t) {
      Occupation occ(4, 0);
      int left = total;
      for (std::size_t m = 0; m < 4 && left > 0; ++m) {
        const int take = (m == 3) ? left : static_cast<int>(uni(rng) * (left + 1));
        occ[m] = static_cast<std::uint8_t>(take);
        left -= take;
      }
      terms[occ] = Amplitude{uni(rng) - 0.5, uni(rng) - 0.5};
    }
    double n2 = 0.0;
    for (auto& [occ, amp] : terms) n2 += std::norm(amp);
    for (auto& [occ, amp] : terms) amp /= std::sqrt(n2);
    const auto state = FockState::from_terms(reg, std::move(terms));
    const ModeTransform u(reg, detail::random_unitary(4, rng));
    const auto evolved = apply_transform(state, u);
    if (std::abs(evolved.norm_squared() - 1.0) > 1e-10 ||
        detail::photon_totals(evolved) != detail::photon_totals(state)) {
      r.passed = false;
      r.notes.push_back("norm or photon number broken on random state " +
                        std::to_string(i));
      break;
    }
  }

  // multinomial bookkeeping vs one-factor-at-a-time reference expansion
  for (int n = 0; n <= 4 && r.passed; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      FockState::TermMap terms;
      Occupation occ(4, 0);
      occ[1] = static_cast<std::uint8_t>(n);
      terms[occ] = 1.0;
      const auto state = FockState::from_terms(reg, std::move(terms));
      const ModeTransform u(reg, detail::random_unitary(4, rng));
      const auto fast = apply_transform(state, u);
      const auto slow = detail::naive_apply_transform(state, u);
      double maxdiff = 0.0;
      for (const auto& [o, a] : slow.terms())
        maxdiff = std::max(maxdiff, std::abs(a - fast.amplitude(o)));
      for (const auto& [o, a] : fast.terms())
        maxdiff = std::max(maxdiff, std::abs(a - slow.amplitude(o)));
      if (maxdiff > 1e-12) {
        r.passed = false;
        r.notes.push_back("bookkeeping differs from reference expansion at n=" +
                          std::to_string(n) + " (" + detail::fixed(maxdiff, 15) + ")");
        break;
      }
    }
  }

  // stabilizer group closure and projector identity
  const auto group =
      stabilizer_group(cluster_generators(4, ClusterConvention::hadamard_ends));
  if (group.size() != 16) {
    r.passed = false;
    r.notes.push_back("group size " + std::to_string(group.size()));
  } else {
    const auto target = cluster_state(4, ClusterConvention::hadamard_ends);
    Eigen::MatrixXcd proj = group_projector(group);
    Eigen::VectorXcd psi(16);
    for (int i = 0; i < 16; ++i) psi(i) = target.amplitude(static_cast<std::size_t>(i));
    const Eigen::MatrixXcd outer = psi * psi.adjoint();
    const double dev = (proj - outer).cwiseAbs().maxCoeff();
    if (dev > 1e-10) {
      r.passed = false;
      r.notes.push_back("projector identity off by " + detail::fixed(dev, 15));
    }
  }

  // removing the attenuators must break the output state
  SchemeDescription stripped = build_fig1a();
  stripped.elements = {stripped.elements.front()};
  const auto control = run(stripped);
  const double fid =
      fidelity(control.state, cluster_state(4, ClusterConvention::hadamard_ends));
  if (!(fid < 1.0 - 1e-6)) {
    r.passed = false;
    r.notes.push_back("negative control fidelity " + detail::fixed(fid, 12));
  }
  return r;
}

// ---------------------------------------------------------------------------

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> results;
  auto guarded = [&](int id, const std::function<CriterionResult()>& f) {
    try {
      results.push_back(f());
    } catch (const std::exception& e) {
      results.push_back({id, "criterion raised an error", false, {e.what()}});
    }
  };
  guarded(1, check_direct_scheme);
  guarded(2, check_attenuated_schemes);
  guarded(3, check_chains);
  guarded(4, check_cluster_oracle);
  guarded(5, check_schmidt);

  bool have_report = false;
  AnalysisReport report;
  try {
    std::ifstream in(options.counts_path);
    if (!in) throw validation_error("cannot open counts file: " + options.counts_path);
    std::stringstream buf;
    buf << in.rdbuf();
    report = analyze(parse_counts(buf.str()));
    have_report = true;
  } catch (const std::exception& e) {
    results.push_back({6, "dataset analysis", false, {e.what()}});
    results.push_back({7, "dataset error rates", false, {e.what()}});
  }
  if (have_report) {
    guarded(6, [&] { return check_correlations(report); });
    guarded(7, [&] { return check_error_rates(report); });
  }
  guarded(8, check_lhv);
  guarded(9, check_properties);
  return results;
}

// One line per criterion; returns the number of failures.
inline int print_results(std::ostream& os, const std::vector<CriterionResult>& results) {
  int failures = 0;
  for (const auto& r : results) {
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.summary << "\n";
    for (const auto& n : r.notes) os << "       - " << n << "\n";
    if (!r.passed) ++failures;
  }
  os << (failures == 0 ? "all criteria passed"
                       : std::to_string(failures) + " criterion(s) failed")
     << "\n";
  return failures;
}

}  // namespace lincluster::acceptance

#endif  // LINCLUSTER_ACCEPTANCE_HPP
