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

#ifndef LINCLUSTER_COUNTS_HPP
#define LINCLUSTER_COUNTS_HPP

#include <array>
#include <cfenv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lincluster/errors.hpp"
#include "lincluster/qubit_state.hpp"
#include "lincluster/stabilizer.hpp"

namespace lincluster {

// The nine joint local measurement settings the analysis supports, in the
// canonical order used throughout reports.
inline const std::array<std::string, 9>& supported_settings() {
  static const std::array<std::string, 9> s{"ZZZZ", "ZZXX", "XXZZ", "ZZYY", "YYZZ",
                                            "XYXY", "XYYX", "YXXY", "YXYX"};
  return s;
}

// One local measurement per photon; no identity slots.
struct MeasurementSetting {
  std::string label;               // e.g. "ZZXX"
  std::array<Pauli, 4> letters{};  // per qubit

  static MeasurementSetting from_label(const std::string& label) {
    if (label.size() != 4)
      throw validation_error("setting label must have exactly four letters");
    MeasurementSetting s;
    s.label = label;
    for (std::size_t i = 0; i < 4; ++i) {
      switch (label[i]) {
        case 'X': s.letters[i] = Pauli::X; break;
        case 'Y': s.letters[i] = Pauli::Y; break;
        case 'Z': s.letters[i] = Pauli::Z; break;
        default:
          throw validation_error("setting letters must be X, Y or Z");
      }
    }
    return s;
  }
};

// Fourfold-coincidence counts for one setting.  Outcome index packs the four
// detector bits with the first photon most significant; bit 0 means the
// +1-eigenstate port fired.
struct OutcomeCounts {
  MeasurementSetting setting;
  std::array<long, 16> counts{};
  double duration_s = 0.0;  // metadata only

  long total() const {
    long t = 0;
    for (long c : counts) t += c;
    return t;
  }
};

// ---------------------------------------------------------------------------
// CSV input: header row, then "<label>,<16 counts>[,<duration>]" per setting.

inline std::vector<OutcomeCounts> parse_counts(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<OutcomeCounts> rows;
  std::map<std::string, int> seen;
  int line_no = 0;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!header_skipped) {
      header_skipped = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 17 && fields.size() != 18)
      throw parse_error("expected a setting label, 16 counts and an optional duration (" +
                            std::to_string(fields.size()) + " fields found)",
                        line_no);

    OutcomeCounts row;
    bool known = false;
    for (const auto& s : supported_settings()) known = known || s == fields[0];
    if (!known) throw parse_error("unknown setting label '" + fields[0] + "'", line_no);
    if (auto it = seen.find(fields[0]); it != seen.end())
      throw parse_error("setting '" + fields[0] + "' already given on line " +
                            std::to_string(it->second),
                        line_no);
    seen[fields[0]] = line_no;
    row.setting = MeasurementSetting::from_label(fields[0]);

    for (std::size_t i = 0; i < 16; ++i) {
      long v = 0;
      std::size_t used = 0;
      try {
        v = std::stol(fields[i + 1], &used);
      } catch (const std::exception&) {
        throw parse_error("invalid count '" + fields[i + 1] + "'", line_no);
      }
      if (used != fields[i + 1].size())
        throw parse_error("invalid count '" + fields[i + 1] + "'", line_no);
      if (v < 0) throw parse_error("negative count " + std::to_string(v), line_no);
      row.counts[i] = v;
    }
    if (fields.size() == 18) {
      try {
        row.duration_s = std::stod(fields[17]);
      } catch (const std::exception&) {
        throw parse_error("invalid duration '" + fields[17] + "'", line_no);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// operator bookkeeping

namespace detail {

inline const StabilizerGroup& analysis_group() {
  static const StabilizerGroup group = StabilizerGroup::from_generators(
      cluster_generators(4, ClusterConvention::hadamard_ends));
  return group;
}

// does the setting measure this operator (non-identity letters agree)?
inline bool setting_measures(const MeasurementSetting& s, const PauliString& op) {
  for (std::size_t q = 0; q < 4; ++q)
    if (op.letters[q] != Pauli::I && op.letters[q] != s.letters[q]) return false;
  return true;
}

// the canonical source setting of a group element: first match in the
// nine-setting order
inline std::string source_setting(const PauliString& op) {
  for (const auto& label : supported_settings())
    if (setting_measures(MeasurementSetting::from_label(label), op)) return label;
  return {};
}

}  // namespace detail

// The signed stabilizer correlations measurable from one setting: every
// non-identity group element whose canonical source setting this is.
// ZZZZ carries three operators, the other Z/Z-X/Y pairs two, the four
// all-different settings one each.
inline std::vector<PauliString> derivable_operators(const MeasurementSetting& setting) {
  bool known = false;
  for (const auto& s : supported_settings()) known = known || s == setting.label;
  if (!known)
    throw validation_error("setting '" + setting.label + "' is not one of the nine");
  std::vector<PauliString> ops;
  const auto& group = detail::analysis_group();
  for (const auto& e : group.elements()) {
    bool identity = true;
    for (Pauli p : e.letters) identity = identity && p == Pauli::I;
    if (identity) continue;
    if (detail::source_setting(e) == setting.label) ops.push_back(e);
  }
  return ops;
}

struct ExpectationEstimate {
  PauliString op;              // signed, as published
  double value = 0.0;          // sign * raw parity estimate
  double sigma = 0.0;
  std::string source_setting;  // label of the setting the counts came from
};

// value = sign * sum_i s_i n_i / N with s_i the outcome parity over the
// operator's non-identity positions; sigma^2 = sum_i n_i (s_i - E)^2 / N^2
// treating each bin as an independent Poisson count.
inline ExpectationEstimate estimate_expectation(const OutcomeCounts& counts,
                                                const PauliString& op) {
  if (op.size() != 4) throw contract_error("operator must act on four qubits");
  if (!detail::setting_measures(counts.setting, op))
    throw contract_error("operator " + op.str() + " is not measured by setting " +
                         counts.setting.label);
  const long total = counts.total();
  if (total <= 0) throw validation_error("setting " + counts.setting.label +
                                         " has no recorded counts");

  double num = 0.0;
  for (std::size_t idx = 0; idx < 16; ++idx) {
    int parity = 0;
    for (std::size_t q = 0; q < 4; ++q)
      if (op.letters[q] != Pauli::I) parity ^= (idx >> (3 - q)) & 1;
    num += parity ? -static_cast<double>(counts.counts[idx])
                  : static_cast<double>(counts.counts[idx]);
  }
  const double raw = num / static_cast<double>(total);
  double var = 0.0;
  for (std::size_t idx = 0; idx < 16; ++idx) {
    int parity = 0;
    for (std::size_t q = 0; q < 4; ++q)
      if (op.letters[q] != Pauli::I) parity ^= (idx >> (3 - q)) & 1;
    const double s = parity ? -1.0 : 1.0;
    var += static_cast<double>(counts.counts[idx]) * (s - raw) * (s - raw);
  }
  var /= static_cast<double>(total) * static_cast<double>(total);

  ExpectationEstimate est;
  est.op = op;
  est.value = op.sign * raw;
  est.sigma = std::sqrt(var);
  est.source_setting = counts.setting.label;
  return est;
}

// ---------------------------------------------------------------------------
// error rates

namespace detail {

// probability of each 16-outcome bin when `ideal` is measured in the
// setting's product eigenbasis; bit 0 <-> +1 eigenstate
inline std::array<double, 16> ideal_outcome_probs(const MeasurementSetting& setting,
                                                  const QubitState& ideal) {
  if (ideal.num_qubits() != 4) throw validation_error("ideal state must have 4 qubits");
  // per-letter eigenvector components <e_b| applied to computational |c>
  auto comp = [](Pauli letter, int bit, int basis) -> std::complex<double> {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (letter) {
      case Pauli::Z:
        return bit == basis ? 1.0 : 0.0;
      case Pauli::X:
        return (bit && basis) ? -inv_sqrt2 : inv_sqrt2;
      case Pauli::Y:
        // |y+-> = (|0> +- i|1>)/sqrt(2); conjugated for the bra
        if (!basis) return inv_sqrt2;
        return std::complex<double>{0.0, bit ? 1.0 : -1.0} * inv_sqrt2;
      default:
        throw validation_error("settings cannot contain identity");
    }
  };
  std::array<double, 16> probs{};
  for (std::size_t idx = 0; idx < 16; ++idx) {
    std::complex<double> amp{0.0, 0.0};
    for (std::size_t c = 0; c < 16; ++c) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t q = 0; q < 4; ++q)
        w *= comp(setting.letters[q], static_cast<int>((idx >> (3 - q)) & 1),
                  static_cast<int>((c >> (3 - q)) & 1));
      amp += w * ideal.amplitude(c);
    }
    probs[idx] = std::norm(amp);
  }
  return probs;
}

}  // namespace detail

struct ErrorRate {
  long incorrect = 0;
  long total = 0;
  double rate = 0.0;
  double sigma = 0.0;
};

// Fraction of counts on outcomes the ideal state forbids (probability below
// 1e-10 in the setting's eigenbasis), with binomial error.
inline ErrorRate error_rate(const OutcomeCounts& counts, const QubitState& ideal) {
  const auto probs = detail::ideal_outcome_probs(counts.setting, ideal);
  ErrorRate er;
  er.total = counts.total();
  if (er.total <= 0)
    throw validation_error("setting " + counts.setting.label + " has no recorded counts");
  for (std::size_t idx = 0; idx < 16; ++idx)
    if (probs[idx] < 1e-10) er.incorrect += counts.counts[idx];
  er.rate = static_cast<double>(er.incorrect) / static_cast<double>(er.total);
  er.sigma = std::sqrt(er.rate * (1.0 - er.rate) / static_cast<double>(er.total));
  return er;
}

// Fraction of counts whose outcome parity contradicts the operator's ideal
// +1 correlation (the "data flipping" rate of one stabilizer measurement).
inline ErrorRate flip_rate(const OutcomeCounts& counts, const PauliString& op) {
  if (!detail::setting_measures(counts.setting, op))
    throw contract_error("operator " + op.str() + " is not measured by setting " +
                         counts.setting.label);
  ErrorRate er;
  er.total = counts.total();
  if (er.total <= 0)
    throw validation_error("setting " + counts.setting.label + " has no recorded counts");
  for (std::size_t idx = 0; idx < 16; ++idx) {
    int parity = 0;
    for (std::size_t q = 0; q < 4; ++q)
      if (op.letters[q] != Pauli::I) parity ^= (idx >> (3 - q)) & 1;
    const int s = parity ? -1 : 1;
    if (s * op.sign < 0) er.incorrect += counts.counts[idx];
  }
  er.rate = static_cast<double>(er.incorrect) / static_cast<double>(er.total);
  er.sigma = std::sqrt(er.rate * (1.0 - er.rate) / static_cast<double>(er.total));
  return er;
}

// ---------------------------------------------------------------------------
// full analysis

// report values are quoted at four decimals, round-half-even
inline double report_round(double v) { return std::nearbyint(v * 1e4) / 1e4; }

struct CorrelationRow {
  std::string element;  // "g1", "g1g2", ..., "I"
  PauliString op;
  double value = 0.0;
  double sigma = 0.0;
  std::string setting;  // "-" for the identity row
};

struct SettingErrorRate {
  std::string setting;
  ErrorRate error;
};

struct FlipAttribution {
  PauliString op;
  std::string setting;
  ErrorRate flip;
};

struct LhvSection {
  std::array<int, 4> measured_signs{};  // for XXZI, YYZI, XYYX, YXYX
  bool contradiction = false;
};

inline constexpr double kNonlocalityThreshold = 0.25;
inline constexpr double kWitnessBound = 0.5;

struct AnalysisReport {
  std::vector<CorrelationRow> correlations;  // 16 rows, identity last
  double fidelity = 0.0;                     // mean of the 16 values
  double fidelity_sigma = 0.0;               // quadrature of the 15 sigmas / 16
  double witness_sigmas = 0.0;               // (F - 1/2)/sigma_F at report precision
  std::vector<SettingErrorRate> error_rates;  // nine settings, canonical order
  FlipAttribution max_flip;                   // worst single-operator flip rate
  bool all_rates_below_threshold = false;
  LhvSection lhv;
};

inline AnalysisReport analyze(const std::vector<OutcomeCounts>& all_counts) {
  if (all_counts.empty()) throw validation_error("no measurement settings to analyze");
  std::map<std::string, const OutcomeCounts*> by_label;
  for (const auto& c : all_counts) by_label[c.setting.label] = &c;
  std::string missing;
  for (const auto& s : supported_settings())
    if (!by_label.contains(s)) missing += missing.empty() ? s : ", " + s;
  if (!missing.empty())
    throw validation_error("missing measurement settings: " + missing);

  const auto& group = detail::analysis_group();
  AnalysisReport report;
  double value_sum = 0.0;
  double var_sum = 0.0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    const auto& e = group.elements()[i];
    CorrelationRow row;
    row.element = group.labels()[i];
    row.op = e;
    if (row.element == "I") {
      row.value = 1.0;
      row.sigma = 0.0;
      row.setting = "-";
    } else {
      row.setting = detail::source_setting(e);
      const auto est = estimate_expectation(*by_label.at(row.setting), e);
      row.value = est.value;
      row.sigma = est.sigma;
    }
    value_sum += row.value;
    var_sum += row.sigma * row.sigma;
    report.correlations.push_back(std::move(row));
  }
  report.fidelity = value_sum / 16.0;
  report.fidelity_sigma = std::sqrt(var_sum) / 16.0;
  report.witness_sigmas = (report_round(report.fidelity) - kWitnessBound) /
                          report_round(report.fidelity_sigma);

  const QubitState ideal = cluster_state(4, ClusterConvention::hadamard_ends);
  report.all_rates_below_threshold = true;
  for (const auto& label : supported_settings()) {
    SettingErrorRate ser{label, error_rate(*by_label.at(label), ideal)};
    report.all_rates_below_threshold =
        report.all_rates_below_threshold && ser.error.rate < kNonlocalityThreshold;
    report.error_rates.push_back(std::move(ser));
  }

  bool first = true;
  for (const auto& row : report.correlations) {
    if (row.element == "I") continue;
    ErrorRate fr = flip_rate(*by_label.at(row.setting), row.op);
    if (first || fr.rate > report.max_flip.flip.rate) {
      report.max_flip = {row.op, row.setting, fr};
      first = false;
    }
  }

  // GHZ-type argument: take the measured signs of the four correlations and
  // ask whether any deterministic local assignment reproduces them.
  const std::array<std::string, 4> arg_ops{"XXZI", "YYZI", "XYYX", "YXYX"};
  std::vector<std::pair<PauliString, int>> constraints;
  for (std::size_t i = 0; i < 4; ++i) {
    const PauliString op = PauliString::parse(arg_ops[i]);
    const auto est = estimate_expectation(*by_label.at(detail::source_setting(op)), op);
    const int sign = est.value >= 0.0 ? +1 : -1;
    report.lhv.measured_signs[i] = sign;
    constraints.emplace_back(op, sign);
  }
  report.lhv.contradiction = lhv_contradiction(constraints).contradiction;
  return report;
}

// ---------------------------------------------------------------------------
// rendering

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace detail

// Plain-text table mirroring the correlation-table layout, followed by the
// error-rate and locality sections.
inline std::string render_table(const AnalysisReport& report) {
  std::string out;
  out += "stabilizer correlations\n";
  out += "  element     operator       value     sigma   setting\n";
  for (const auto& row : report.correlations) {
    char line[128];
    std::snprintf(line, sizeof(line), "  %-10s  %-11s  %8.4f  %8.4f   %s\n",
                  row.element.c_str(), row.op.str_indexed().c_str(),
                  report_round(row.value), report_round(row.sigma), row.setting.c_str());
    out += line;
  }
  out += "  fidelity: " + detail::fixed(report_round(report.fidelity), 4) + " +/- " +
         detail::fixed(report_round(report.fidelity_sigma), 4) + "\n";
  out += "  witness: " + detail::fixed(report.witness_sigmas, 1) +
         " standard deviations above the " + detail::fixed(kWitnessBound, 1) +
         " bound\n";
  out += "\nerror rates\n";
  out += "  setting   incorrect   total     rate    sigma\n";
  for (const auto& ser : report.error_rates) {
    char line[128];
    std::snprintf(line, sizeof(line), "  %-7s   %9ld   %5ld   %6.4f   %6.4f\n",
                  ser.setting.c_str(), ser.error.incorrect, ser.error.total,
                  report_round(ser.error.rate), report_round(ser.error.sigma));
    out += line;
  }
  out += "  max flip rate: " + detail::fixed(report_round(report.max_flip.flip.rate), 4) +
         " +/- " + detail::fixed(report_round(report.max_flip.flip.sigma), 4) +
         " (operator " + report.max_flip.op.str_indexed() + ", setting " +
         report.max_flip.setting + ")\n";
  out += std::string("  nonlocality threshold ") +
         detail::fixed(kNonlocalityThreshold, 2) + ": " +
         (report.all_rates_below_threshold ? "all rates below" : "EXCEEDED") + "\n";
  out += "\nlocal-realism check\n  signs:";
  for (int s : report.lhv.measured_signs) out += s > 0 ? " +1" : " -1";
  out += std::string("  -> ") +
         (report.lhv.contradiction ? "contradiction (no deterministic local assignment)"
                                   : "satisfiable by a deterministic local assignment") +
         "\n";
  return out;
}

inline nlohmann::ordered_json to_json(const AnalysisReport& report) {
  nlohmann::ordered_json j;
  j["correlations"] = nlohmann::ordered_json::array();
  for (const auto& row : report.correlations) {
    j["correlations"].push_back({{"element", row.element},
                                 {"operator", row.op.str_indexed()},
                                 {"value", report_round(row.value)},
                                 {"sigma", report_round(row.sigma)},
                                 {"setting", row.setting}});
  }
  j["fidelity"] = {{"value", report_round(report.fidelity)},
                   {"sigma", report_round(report.fidelity_sigma)}};
  j["witness"] = {{"sigmas", report.witness_sigmas}, {"bound", kWitnessBound}};
  j["error_rates"] = nlohmann::ordered_json::array();
  for (const auto& ser : report.error_rates) {
    j["error_rates"].push_back({{"setting", ser.setting},
                                {"incorrect", ser.error.incorrect},
                                {"total", ser.error.total},
                                {"rate", report_round(ser.error.rate)},
                                {"sigma", report_round(ser.error.sigma)}});
  }
  j["max_flip"] = {{"operator", report.max_flip.op.str_indexed()},
                   {"setting", report.max_flip.setting},
                   {"rate", report_round(report.max_flip.flip.rate)},
                   {"sigma", report_round(report.max_flip.flip.sigma)}};
  j["nonlocality"] = {{"threshold", kNonlocalityThreshold},
                      {"all_rates_below", report.all_rates_below_threshold}};
  nlohmann::ordered_json signs = nlohmann::ordered_json::array();
  for (int s : report.lhv.measured_signs) signs.push_back(s);
  j["lhv"] = {{"signs", signs},
              {"verdict", report.lhv.contradiction ? "contradiction" : "satisfiable"}};
  return j;
}

}  // namespace lincluster

#endif  // LINCLUSTER_COUNTS_HPP
