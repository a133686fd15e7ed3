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

#ifndef LINCLUSTER_SCHEMES_HPP
#define LINCLUSTER_SCHEMES_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "lincluster/elements.hpp"
#include "lincluster/errors.hpp"
#include "lincluster/fock.hpp"
#include "lincluster/qubit_state.hpp"

namespace lincluster {

struct PairSourceSpec {
  int mode_a = 0;
  int mode_b = 0;
  std::vector<PairTerm> terms;
};

using ElementSpec = std::variant<PdbsSpec, AttenuatorSpec>;

// A complete linear-optical circuit: photon-pair sources, an ordered list of
// elements, and the spatial modes whose fourfold (2N-fold) coincidence is
// post-selected.  Loss modes never appear in the coincidence list.
struct SchemeDescription {
  std::vector<PairSourceSpec> sources;
  std::vector<ElementSpec> elements;
  std::vector<int> coincidence_modes;
};

namespace detail {

struct SchemeModes {
  std::set<int> source_modes;
  std::set<int> ancilla_modes;
};

inline SchemeModes validate_scheme(const SchemeDescription& scheme) {
  if (scheme.sources.empty()) throw config_error("scheme declares no sources");
  SchemeModes modes;
  for (const auto& s : scheme.sources) {
    if (s.mode_a == s.mode_b)
      throw config_error("source uses the same spatial mode twice");
    if (!modes.source_modes.insert(s.mode_a).second ||
        !modes.source_modes.insert(s.mode_b).second)
      throw config_error("two sources share a spatial mode");
  }
  for (const auto& e : scheme.elements) {
    if (const auto* att = std::get_if<AttenuatorSpec>(&e)) {
      if (!modes.source_modes.contains(att->mode))
        throw config_error("attenuator acts on undeclared mode " +
                           std::to_string(att->mode));
      if (modes.source_modes.contains(att->ancilla) ||
          !modes.ancilla_modes.insert(att->ancilla).second)
        throw config_error("attenuator loss mode " + std::to_string(att->ancilla) +
                           " collides with an active mode");
    }
  }
  for (const auto& e : scheme.elements) {
    if (const auto* bs = std::get_if<PdbsSpec>(&e)) {
      for (int m : {bs->mode_a, bs->mode_b})
        if (!modes.source_modes.contains(m) && !modes.ancilla_modes.contains(m))
          throw config_error("beam splitter references undeclared mode " +
                             std::to_string(m));
    }
  }
  if (scheme.coincidence_modes.empty())
    throw config_error("scheme declares no coincidence modes");
  std::set<int> seen;
  for (int m : scheme.coincidence_modes) {
    if (!seen.insert(m).second)
      throw config_error("duplicate coincidence mode " + std::to_string(m));
    if (modes.ancilla_modes.contains(m))
      throw config_error("coincidence mode " + std::to_string(m) + " is a loss mode");
    if (!modes.source_modes.contains(m))
      throw config_error("coincidence mode " + std::to_string(m) + " is undeclared");
  }
  return modes;
}

}  // namespace detail

struct RunResult {
  QubitState state;
  double probability = 0.0;
  std::size_t peak_terms = 0;  // largest intermediate term count
};

// tensor the sources, apply the elements in order, post-select the
// coincidence, and read the polarization qubits.
inline RunResult run(const SchemeDescription& scheme) {
  const auto modes = detail::validate_scheme(scheme);

  std::optional<FockState> state;
  for (const auto& s : scheme.sources) {
    FockState src = create_pair_state(s.terms, s.mode_a, s.mode_b);
    state = state ? tensor(*state, src) : src;
  }
  if (!modes.ancilla_modes.empty()) {
    std::vector<int> anc(modes.ancilla_modes.begin(), modes.ancilla_modes.end());
    state = tensor(*state, vacuum(spatial_register(anc)));
  }

  std::size_t peak = state->term_count();
  for (const auto& e : scheme.elements) {
    ModeTransform t = std::holds_alternative<PdbsSpec>(e)
                          ? pdbs(std::get<PdbsSpec>(e))
                          : attenuator(std::get<AttenuatorSpec>(e));
    state = apply_transform(*state, t);
    peak = std::max(peak, state->term_count());
  }

  auto post = postselect_coincidence(*state, scheme.coincidence_modes);
  if (post.state.empty())
    throw validation_error("post-selection removed every term of the output state");
  return {extract_qubit_state(post.state, scheme.coincidence_modes), post.probability,
          peak};
}

// ---------------------------------------------------------------------------
// circuit builders

namespace detail {

inline std::vector<PairTerm> bell_phi_plus() {
  const double a = 1.0 / std::sqrt(2.0);
  return {{Pol::H, Pol::H, a}, {Pol::V, Pol::V, a}};
}

// 1/2 |HH> + sqrt(3)/2 |VV>
inline std::vector<PairTerm> skewed_pair() {
  return {{Pol::H, Pol::H, 0.5}, {Pol::V, Pol::V, std::sqrt(3.0) / 2.0}};
}

// 1/2 |+H> + sqrt(3)/2 |-V>, written in the H/V basis
inline std::vector<PairTerm> chain_head_source() {
  const double s = 1.0 / std::sqrt(2.0);
  const double r3 = std::sqrt(3.0) / 2.0;
  return {{Pol::H, Pol::H, 0.5 * s},
          {Pol::V, Pol::H, 0.5 * s},
          {Pol::H, Pol::V, r3 * s},
          {Pol::V, Pol::V, -r3 * s}};
}

// 1/2 |H+> + sqrt(3)/2 |V->
inline std::vector<PairTerm> chain_tail_source() {
  const double s = 1.0 / std::sqrt(2.0);
  const double r3 = std::sqrt(3.0) / 2.0;
  return {{Pol::H, Pol::H, 0.5 * s},
          {Pol::H, Pol::V, 0.5 * s},
          {Pol::V, Pol::H, r3 * s},
          {Pol::V, Pol::V, -r3 * s}};
}

// 1/4 |HH> + sqrt(3)/4 |HV> + sqrt(3)/4 |VH> - 3/4 |VV>
inline std::vector<PairTerm> chain_middle_source() {
  const double r3 = std::sqrt(3.0) / 4.0;
  return {{Pol::H, Pol::H, 0.25},
          {Pol::H, Pol::V, r3},
          {Pol::V, Pol::H, r3},
          {Pol::V, Pol::V, -0.75}};
}

}  // namespace detail

// Two Bell pairs, the central coupler (T_H = 1, T_V = 1/3), and complementary
// attenuators (T_H = 1/3, T_V = 1) on the two interfering output arms.
inline SchemeDescription build_fig1a() {
  SchemeDescription s;
  s.sources = {{1, 2, detail::bell_phi_plus()}, {3, 4, detail::bell_phi_plus()}};
  s.elements = {PdbsSpec{2, 3, 1.0, 1.0 / 3.0}, AttenuatorSpec{2, 5, 1.0 / 3.0, 1.0},
                AttenuatorSpec{3, 6, 1.0 / 3.0, 1.0}};
  s.coincidence_modes = {1, 2, 3, 4};
  return s;
}

// Same as build_fig1a with the attenuators moved to the input side.
inline SchemeDescription build_fig1b() {
  SchemeDescription s;
  s.sources = {{1, 2, detail::bell_phi_plus()}, {3, 4, detail::bell_phi_plus()}};
  s.elements = {AttenuatorSpec{2, 5, 1.0 / 3.0, 1.0}, AttenuatorSpec{3, 6, 1.0 / 3.0, 1.0},
                PdbsSpec{2, 3, 1.0, 1.0 / 3.0}};
  s.coincidence_modes = {1, 2, 3, 4};
  return s;
}

// Non-maximally entangled sources and the central coupler alone; the
// attenuation is folded into the source amplitudes.
inline SchemeDescription build_fig1c() {
  SchemeDescription s;
  s.sources = {{1, 2, detail::skewed_pair()}, {3, 4, detail::skewed_pair()}};
  s.elements = {PdbsSpec{2, 3, 1.0, 1.0 / 3.0}};
  s.coincidence_modes = {1, 2, 3, 4};
  return s;
}

// n_pairs photon-pair sources chained by (n_pairs - 1) couplers into a
// 2*n_pairs-qubit linear cluster state; coincidence over every mode.
inline SchemeDescription build_chain(int n_pairs) {
  if (n_pairs < 2) throw validation_error("chain needs at least two photon pairs");
  SchemeDescription s;
  for (int k = 0; k < n_pairs; ++k) {
    std::vector<PairTerm> terms;
    if (k == 0)
      terms = detail::chain_head_source();
    else if (k == n_pairs - 1)
      terms = detail::chain_tail_source();
    else
      terms = detail::chain_middle_source();
    s.sources.push_back({2 * k + 1, 2 * k + 2, std::move(terms)});
  }
  for (int k = 1; k < n_pairs; ++k)
    s.elements.push_back(PdbsSpec{2 * k, 2 * k + 1, 1.0, 1.0 / 3.0});
  for (int m = 1; m <= 2 * n_pairs; ++m) s.coincidence_modes.push_back(m);
  return s;
}

// ---------------------------------------------------------------------------
// scheme text format: one declaration per line
//
//   source <a> <b> <PP>=<re>[,<im>] ...
//   pdbs <a> <b> th=<t> tv=<t>
//   attenuator <mode> ancilla=<mode> th=<t> tv=<t>
//   coincidence <m1> <m2> ...
//
// '#' starts a comment; elements apply in file order.

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

inline int parse_int(const std::string& tok, int line_no) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw parse_error("expected an integer, got '" + tok + "'", line_no);
  }
  if (used != tok.size())
    throw parse_error("expected an integer, got '" + tok + "'", line_no);
  return v;
}

inline double parse_real(const std::string& tok, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw parse_error("expected a number, got '" + tok + "'", line_no);
  }
  if (used != tok.size())
    throw parse_error("expected a number, got '" + tok + "'", line_no);
  return v;
}

// key=value with a fixed expected key
inline std::string expect_kv(const std::string& tok, std::string_view key, int line_no) {
  const auto eq = tok.find('=');
  if (eq == std::string::npos || tok.substr(0, eq) != key)
    throw parse_error("expected '" + std::string(key) + "=...', got '" + tok + "'",
                      line_no);
  return tok.substr(eq + 1);
}

inline Amplitude parse_amplitude(const std::string& text, int line_no) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_real(text, line_no), 0.0};
  return {parse_real(text.substr(0, comma), line_no),
          parse_real(text.substr(comma + 1), line_no)};
}

inline Pol parse_pol(char c, int line_no) {
  if (c == 'H') return Pol::H;
  if (c == 'V') return Pol::V;
  throw parse_error(std::string("invalid polarization '") + c + "'", line_no);
}

inline std::string format_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline SchemeDescription parse_scheme(std::string_view text) {
  SchemeDescription scheme;
  bool have_coincidence = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    const std::string& kind = tokens[0];

    if (kind == "source") {
      if (tokens.size() < 4)
        throw parse_error("source needs two modes and at least one term", line_no);
      PairSourceSpec src;
      src.mode_a = detail::parse_int(tokens[1], line_no);
      src.mode_b = detail::parse_int(tokens[2], line_no);
      for (std::size_t i = 3; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq != 2)
          throw parse_error("expected '<PP>=<re>[,<im>]', got '" + tokens[i] + "'",
                            line_no);
        PairTerm term;
        term.pol_a = detail::parse_pol(tokens[i][0], line_no);
        term.pol_b = detail::parse_pol(tokens[i][1], line_no);
        term.amp = detail::parse_amplitude(tokens[i].substr(3), line_no);
        src.terms.push_back(term);
      }
      scheme.sources.push_back(std::move(src));
    } else if (kind == "pdbs") {
      if (tokens.size() != 5)
        throw parse_error("pdbs needs '<a> <b> th=<t> tv=<t>'", line_no);
      PdbsSpec spec;
      spec.mode_a = detail::parse_int(tokens[1], line_no);
      spec.mode_b = detail::parse_int(tokens[2], line_no);
      spec.t_h = detail::parse_real(detail::expect_kv(tokens[3], "th", line_no), line_no);
      spec.t_v = detail::parse_real(detail::expect_kv(tokens[4], "tv", line_no), line_no);
      scheme.elements.push_back(spec);
    } else if (kind == "attenuator") {
      if (tokens.size() != 5)
        throw parse_error("attenuator needs '<mode> ancilla=<m> th=<t> tv=<t>'", line_no);
      AttenuatorSpec spec;
      spec.mode = detail::parse_int(tokens[1], line_no);
      spec.ancilla =
          detail::parse_int(detail::expect_kv(tokens[2], "ancilla", line_no), line_no);
      spec.t_h = detail::parse_real(detail::expect_kv(tokens[3], "th", line_no), line_no);
      spec.t_v = detail::parse_real(detail::expect_kv(tokens[4], "tv", line_no), line_no);
      scheme.elements.push_back(spec);
    } else if (kind == "coincidence") {
      if (have_coincidence)
        throw parse_error("duplicate coincidence declaration", line_no);
      if (tokens.size() < 2)
        throw parse_error("coincidence needs at least one mode", line_no);
      for (std::size_t i = 1; i < tokens.size(); ++i)
        scheme.coincidence_modes.push_back(detail::parse_int(tokens[i], line_no));
      have_coincidence = true;
    } else {
      throw parse_error("unknown declaration '" + kind + "'", line_no);
    }
  }
  if (scheme.sources.empty()) throw parse_error("scheme declares no sources");
  if (!have_coincidence) throw parse_error("scheme declares no coincidence modes");
  return scheme;
}

inline std::string format_scheme(const SchemeDescription& scheme) {
  std::string out;
  for (const auto& s : scheme.sources) {
    out += "source " + std::to_string(s.mode_a) + " " + std::to_string(s.mode_b);
    for (const auto& t : s.terms) {
      out += ' ';
      out += pol_char(t.pol_a);
      out += pol_char(t.pol_b);
      out += '=';
      out += detail::format_real(t.amp.real());
      if (t.amp.imag() != 0.0) out += "," + detail::format_real(t.amp.imag());
    }
    out += '\n';
  }
  for (const auto& e : scheme.elements) {
    if (const auto* bs = std::get_if<PdbsSpec>(&e)) {
      out += "pdbs " + std::to_string(bs->mode_a) + " " + std::to_string(bs->mode_b) +
             " th=" + detail::format_real(bs->t_h) + " tv=" + detail::format_real(bs->t_v) +
             '\n';
    } else {
      const auto& att = std::get<AttenuatorSpec>(e);
      out += "attenuator " + std::to_string(att.mode) +
             " ancilla=" + std::to_string(att.ancilla) +
             " th=" + detail::format_real(att.t_h) + " tv=" + detail::format_real(att.t_v) +
             '\n';
    }
  }
  out += "coincidence";
  for (int m : scheme.coincidence_modes) out += " " + std::to_string(m);
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Schmidt decomposition of a two-qubit pure state

// amps = U * diag(coefficients) * V^dagger with coefficients descending.
// The state reads sum_i c_i |u_i>|v_i*> for columns u_i of U, v_i of V.
struct SchmidtForm {
  std::array<double, 2> coefficients{};
  Eigen::Matrix2cd basis_a;
  Eigen::Matrix2cd basis_b;
};

inline SchmidtForm schmidt_decompose(const Eigen::Matrix2cd& amps) {
  const double fro = amps.norm();
  if (fro == 0.0) throw validation_error("cannot decompose the zero matrix");
  if (std::abs(fro - 1.0) > kCompareTol)
    throw validation_error("amplitude matrix is not normalized");
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(amps,
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtForm form;
  form.coefficients = {svd.singularValues()(0), svd.singularValues()(1)};
  form.basis_a = svd.matrixU();
  form.basis_b = svd.matrixV();
  return form;
}

}  // namespace lincluster

#endif  // LINCLUSTER_SCHEMES_HPP
