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

#ifndef LINCLUSTER_FOCK_HPP
#define LINCLUSTER_FOCK_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lincluster/errors.hpp"
#include "lincluster/qubit_state.hpp"

namespace lincluster {

inline constexpr double kPruneTol = 1e-12;    // amplitudes below this are dropped
inline constexpr double kCompareTol = 1e-10;  // norm / probability comparisons
inline constexpr double kUnitaryTol = 1e-12;  // U'U == I check

using Amplitude = std::complex<double>;

enum class Pol : std::uint8_t { H = 0, V = 1 };

inline char pol_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

// One polarization-resolved spatial mode.  Canonical order: spatial index
// ascending, H before V; every register and matrix in this module uses it.
struct ModeId {
  int spatial = 0;
  Pol pol = Pol::H;
  friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

inline std::string mode_name(ModeId m) {
  return std::to_string(m.spatial) + pol_char(m.pol);
}

// Occupation numbers, one per register mode.  Keys of the sparse term map;
// std::map keeps them in lexicographic order for deterministic output.
using Occupation = std::vector<std::uint8_t>;

namespace detail {

inline double factorial(int n) {
  static const auto table = [] {
    std::vector<double> t(33, 1.0);
    for (int i = 1; i < 33; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table.at(static_cast<std::size_t>(n));
}

inline double sqrt_factorial(int n) { return std::sqrt(factorial(n)); }

// exact repeated multiplication; std::pow on complex goes through exp/log
inline Amplitude ipow(Amplitude base, int exp) {
  Amplitude r{1.0, 0.0};
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

// Both-polarization register for a sorted list of spatial modes.
inline std::vector<ModeId> spatial_register(std::vector<int> spatials) {
  std::sort(spatials.begin(), spatials.end());
  std::vector<ModeId> reg;
  reg.reserve(2 * spatials.size());
  for (int s : spatials) {
    reg.push_back({s, Pol::H});
    reg.push_back({s, Pol::V});
  }
  return reg;
}

// Sparse superposition over occupation vectors of a fixed mode register.
// Immutable after construction; all evolution happens through free functions
// returning new states.
class FockState {
 public:
  using TermMap = std::map<Occupation, Amplitude>;

  static FockState from_terms(std::vector<ModeId> modes, TermMap terms) {
    if (modes.empty()) throw config_error("mode register must not be empty");
    if (!std::is_sorted(modes.begin(), modes.end()))
      throw config_error("mode register must be in canonical order");
    if (std::adjacent_find(modes.begin(), modes.end()) != modes.end())
      throw config_error("duplicate mode in register");
    for (auto it = terms.begin(); it != terms.end();) {
      if (it->first.size() != modes.size())
        throw config_error("occupation length does not match register size");
      if (!std::isfinite(it->second.real()) || !std::isfinite(it->second.imag()))
        throw validation_error("non-finite amplitude");
      if (std::abs(it->second) < kPruneTol)
        it = terms.erase(it);
      else
        ++it;
    }
    return FockState(std::move(modes), std::move(terms));
  }

  const std::vector<ModeId>& modes() const { return modes_; }
  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Amplitude amplitude(const Occupation& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? Amplitude{0.0, 0.0} : it->second;
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& [occ, amp] : terms_) s += std::norm(amp);
    return s;
  }

  // Position of a mode in the register, or -1.
  int mode_index(ModeId m) const {
    auto it = std::lower_bound(modes_.begin(), modes_.end(), m);
    if (it == modes_.end() || *it != m) return -1;
    return static_cast<int>(it - modes_.begin());
  }

 private:
  FockState(std::vector<ModeId> modes, TermMap terms)
      : modes_(std::move(modes)), terms_(std::move(terms)) {}

  std::vector<ModeId> modes_;
  TermMap terms_;
};

inline FockState vacuum(std::vector<ModeId> modes) {
  std::sort(modes.begin(), modes.end());
  FockState::TermMap terms;
  terms.emplace(Occupation(modes.size(), 0), Amplitude{1.0, 0.0});
  return FockState::from_terms(std::move(modes), std::move(terms));
}

// One photon pair shared between two spatial modes, e.g.
// {(H,H) -> 1/2, (V,V) -> sqrt(3)/2}.  Amplitudes must be normalized.
struct PairTerm {
  Pol pol_a;
  Pol pol_b;
  Amplitude amp;
};

inline FockState create_pair_state(const std::vector<PairTerm>& terms, int spatial_a,
                                   int spatial_b) {
  if (spatial_a == spatial_b)
    throw config_error("pair state needs two distinct spatial modes");
  if (terms.empty()) throw validation_error("pair state needs at least one term");
  double n2 = 0.0;
  for (const auto& t : terms) n2 += std::norm(t.amp);
  if (std::abs(n2 - 1.0) > kCompareTol)
    throw validation_error("pair-state amplitudes are not normalized");

  auto reg = spatial_register({spatial_a, spatial_b});
  FockState::TermMap map;
  for (const auto& t : terms) {
    Occupation occ(reg.size(), 0);
    auto bump = [&](ModeId m) {
      auto it = std::lower_bound(reg.begin(), reg.end(), m);
      occ[static_cast<std::size_t>(it - reg.begin())] += 1;
    };
    bump({spatial_a, t.pol_a});
    bump({spatial_b, t.pol_b});
    map[occ] += t.amp;
  }
  return FockState::from_terms(std::move(reg), std::move(map));
}

inline FockState tensor(const FockState& a, const FockState& b) {
  std::vector<ModeId> merged;
  merged.reserve(a.modes().size() + b.modes().size());
  std::merge(a.modes().begin(), a.modes().end(), b.modes().begin(), b.modes().end(),
             std::back_inserter(merged));
  if (std::adjacent_find(merged.begin(), merged.end()) != merged.end())
    throw config_error("tensor: registers overlap");

  // positions of each factor's modes inside the merged register
  auto positions = [&](const std::vector<ModeId>& ms) {
    std::vector<std::size_t> pos(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
      auto it = std::lower_bound(merged.begin(), merged.end(), ms[i]);
      pos[i] = static_cast<std::size_t>(it - merged.begin());
    }
    return pos;
  };
  const auto pa = positions(a.modes());
  const auto pb = positions(b.modes());

  FockState::TermMap out;
  for (const auto& [oa, va] : a.terms()) {
    for (const auto& [ob, vb] : b.terms()) {
      Occupation occ(merged.size(), 0);
      for (std::size_t i = 0; i < pa.size(); ++i) occ[pa[i]] = oa[i];
      for (std::size_t i = 0; i < pb.size(); ++i) occ[pb[i]] = ob[i];
      out[std::move(occ)] += va * vb;
    }
  }
  return FockState::from_terms(std::move(merged), std::move(out));
}

// Linear map on the creation operators of a declared mode subset;
// matrix(j, k) is the coefficient of output mode j in the image of input
// mode k.  Modes outside the subset are untouched.
class ModeTransform {
 public:
  ModeTransform(std::vector<ModeId> modes, Eigen::MatrixXcd matrix)
      : modes_(std::move(modes)), matrix_(std::move(matrix)) {
    if (modes_.empty()) throw config_error("transform needs at least one mode");
    if (!std::is_sorted(modes_.begin(), modes_.end()) ||
        std::adjacent_find(modes_.begin(), modes_.end()) != modes_.end())
      throw config_error("transform modes must be canonical and distinct");
    if (matrix_.rows() != matrix_.cols())
      throw config_error("transform matrix must be square");
    if (static_cast<std::size_t>(matrix_.rows()) != modes_.size())
      throw config_error("transform matrix dimension does not match mode count");
  }

  const std::vector<ModeId>& modes() const { return modes_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  bool is_unitary(double tol = kUnitaryTol) const {
    Eigen::MatrixXcd g = matrix_.adjoint() * matrix_;
    g -= Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
    return g.cwiseAbs().maxCoeff() <= tol;
  }

 private:
  std::vector<ModeId> modes_;
  Eigen::MatrixXcd matrix_;
};

// second(first(.)) as a single transform; both must act on the same modes.
inline ModeTransform compose(const ModeTransform& second, const ModeTransform& first) {
  if (second.modes() != first.modes())
    throw config_error("compose: transforms act on different mode sets");
  return ModeTransform(second.modes(), second.matrix() * first.matrix());
}

namespace detail {

using Monomial = std::vector<std::uint8_t>;             // exponents over transform modes
using Polynomial = std::map<Monomial, Amplitude>;       // creation-operator polynomial

// (sum_j U(j,k) b_j)^n expanded with multinomial coefficients over the
// nonzero entries of column k.
inline Polynomial column_power(const std::vector<std::pair<std::size_t, Amplitude>>& col,
                               int n, std::size_t dim) {
  Polynomial out;
  std::vector<int> exps(col.size(), 0);
  auto recurse = [&](auto&& self, std::size_t entry, int remaining, Amplitude coeff) -> void {
    if (entry + 1 == col.size()) {
      Amplitude c = coeff * ipow(col[entry].second, remaining) / factorial(remaining);
      Monomial m(dim, 0);
      exps[entry] = remaining;
      for (std::size_t i = 0; i < col.size(); ++i)
        m[col[i].first] = static_cast<std::uint8_t>(exps[i]);
      out[m] += c * factorial(n);  // multinomial n! / prod k_i!
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      exps[entry] = k;
      self(self, entry + 1, remaining - k,
           coeff * ipow(col[entry].second, k) / factorial(k));
    }
  };
  if (col.empty()) return out;  // column is all zero: operator annihilates into nothing
  recurse(recurse, 0, n, Amplitude{1.0, 0.0});
  return out;
}

inline Polynomial convolve(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      out[std::move(m)] += ca * cb;
    }
  }
  return out;
}

}  // namespace detail

// Re-expresses every term as a creation-operator monomial, substitutes each
// operator by its image under the transform, expands, and converts back to
// occupation terms with the sqrt(n!) bookkeeping.
inline FockState apply_transform(const FockState& state, const ModeTransform& t) {
  const std::size_t dim = t.modes().size();
  std::vector<std::size_t> pos(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    int p = state.mode_index(t.modes()[k]);
    if (p < 0)
      throw config_error("transform mode " + mode_name(t.modes()[k]) +
                         " is not in the state register");
    pos[k] = static_cast<std::size_t>(p);
  }

  std::vector<std::vector<std::pair<std::size_t, Amplitude>>> cols(dim);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t j = 0; j < dim; ++j)
      if (std::abs(t.matrix()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))) >
          0.0)
        cols[k].emplace_back(j, t.matrix()(static_cast<Eigen::Index>(j),
                                           static_cast<Eigen::Index>(k)));

  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    Amplitude coeff = amp;
    for (std::size_t k = 0; k < dim; ++k)
      coeff /= detail::sqrt_factorial(occ[pos[k]]);

    detail::Polynomial poly;
    poly.emplace(detail::Monomial(dim, 0), coeff);
    bool annihilated = false;
    for (std::size_t k = 0; k < dim && !annihilated; ++k) {
      int n = occ[pos[k]];
      if (n == 0) continue;
      auto factor = detail::column_power(cols[k], n, dim);
      if (factor.empty()) {
        annihilated = true;
        break;
      }
      poly = detail::convolve(poly, factor);
    }
    if (annihilated) continue;

    for (const auto& [mono, c] : poly) {
      Occupation next(occ);
      for (std::size_t k = 0; k < dim; ++k) next[pos[k]] = mono[k];
      Amplitude contrib = c;
      for (std::size_t k = 0; k < dim; ++k)
        contrib *= detail::sqrt_factorial(next[pos[k]]);
      out[std::move(next)] += contrib;
    }
  }
  return FockState::from_terms(state.modes(), std::move(out));
}

inline Amplitude inner_product(const FockState& a, const FockState& b) {
  if (a.modes() != b.modes())
    throw config_error("inner product requires identical registers");
  Amplitude s{0.0, 0.0};
  const bool a_smaller = a.term_count() <= b.term_count();
  const FockState& lhs = a_smaller ? a : b;
  const FockState& rhs = a_smaller ? b : a;
  for (const auto& [occ, amp] : lhs.terms()) {
    Amplitude other = rhs.amplitude(occ);
    s += a_smaller ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return s;
}

// |<a|b>|^2 / (|a|^2 |b|^2); insensitive to global phase.
inline double fidelity(const FockState& a, const FockState& b) {
  double na = a.norm_squared(), nb = b.norm_squared();
  if (na <= 0.0 || nb <= 0.0) throw validation_error("fidelity of a zero-norm state");
  return std::norm(inner_product(a, b)) / (na * nb);
}

struct PostselectResult {
  FockState state;     // renormalized surviving component; empty when nothing survives
  double probability;  // squared norm of the surviving component
};

// Keeps terms with exactly one photon in every listed spatial mode and zero
// photons everywhere else (ancilla/loss modes included).
inline PostselectResult postselect_coincidence(const FockState& state,
                                               const std::vector<int>& spatials) {
  std::vector<std::pair<std::size_t, std::size_t>> hv;  // (H,V) index per listed mode
  hv.reserve(spatials.size());
  for (int s : spatials) {
    int h = state.mode_index({s, Pol::H});
    int v = state.mode_index({s, Pol::V});
    if (h < 0 || v < 0)
      throw config_error("coincidence mode " + std::to_string(s) +
                         " is missing a polarization mode in the register");
    hv.emplace_back(static_cast<std::size_t>(h), static_cast<std::size_t>(v));
  }
  std::vector<bool> listed(state.modes().size(), false);
  for (auto [h, v] : hv) listed[h] = listed[v] = true;

  FockState::TermMap kept;
  double prob = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    bool ok = true;
    for (auto [h, v] : hv)
      if (occ[h] + occ[v] != 1) {
        ok = false;
        break;
      }
    if (ok)
      for (std::size_t i = 0; i < occ.size(); ++i)
        if (!listed[i] && occ[i] != 0) {
          ok = false;
          break;
        }
    if (!ok) continue;
    kept.emplace(occ, amp);
    prob += std::norm(amp);
  }
  if (kept.empty())
    return {FockState::from_terms(state.modes(), {}), 0.0};
  const double scale = 1.0 / std::sqrt(prob);
  for (auto& [occ, amp] : kept) amp *= scale;
  return {FockState::from_terms(state.modes(), std::move(kept)), prob};
}

// Reads one polarization qubit per listed spatial mode (H -> bit 0, V -> bit 1),
// first listed mode being the most significant bit.
inline QubitState extract_qubit_state(const FockState& state,
                                      const std::vector<int>& spatials) {
  const std::size_t n = spatials.size();
  if (n == 0) throw config_error("no spatial modes listed");
  if (n > 24) throw validation_error("qubit extraction limited to 24 modes");
  std::vector<std::size_t> hidx(n), vidx(n);
  std::vector<bool> listed(state.modes().size(), false);
  for (std::size_t q = 0; q < n; ++q) {
    int h = state.mode_index({spatials[q], Pol::H});
    int v = state.mode_index({spatials[q], Pol::V});
    if (h < 0 || v < 0)
      throw config_error("spatial mode " + std::to_string(spatials[q]) +
                         " is missing from the register");
    hidx[q] = static_cast<std::size_t>(h);
    vidx[q] = static_cast<std::size_t>(v);
    listed[hidx[q]] = listed[vidx[q]] = true;
  }

  std::vector<Amplitude> amps(std::size_t{1} << n, Amplitude{0.0, 0.0});
  for (const auto& [occ, amp] : state.terms()) {
    std::size_t index = 0;
    for (std::size_t q = 0; q < n; ++q) {
      int h = occ[hidx[q]];
      int v = occ[vidx[q]];
      if (h + v != 1)
        throw contract_error("term does not hold exactly one photon in mode " +
                             std::to_string(spatials[q]));
      index = (index << 1) | static_cast<std::size_t>(v);
    }
    for (std::size_t i = 0; i < occ.size(); ++i)
      if (!listed[i] && occ[i] != 0)
        throw contract_error("term holds photons outside the listed modes");
    amps[index] += amp;
  }
  return QubitState(std::move(amps));
}

// Line-oriented text form: occupation TAB re TAB im, lexicographic order.
inline std::string to_text(const FockState& state) {
  std::string out;
  for (const auto& [occ, amp] : state.terms()) {
    std::string line;
    for (std::size_t i = 0; i < occ.size(); ++i) {
      if (i) line += ' ';
      line += std::to_string(static_cast<int>(occ[i]));
    }
    line += '\t';
    line += detail::format_double(amp.real());
    line += '\t';
    line += detail::format_double(amp.imag());
    line += '\n';
    out += line;
  }
  return out;
}

// Global phase fixed so the first stored amplitude is real positive.
// Display helper only; state comparisons go through fidelity().
inline FockState canonical_phase(const FockState& state) {
  if (state.empty()) return state;
  Amplitude first = state.terms().begin()->second;
  Amplitude rot = std::abs(first) / first;
  FockState::TermMap terms = state.terms();
  for (auto& [occ, amp] : terms) amp *= rot;
  return FockState::from_terms(state.modes(), std::move(terms));
}

}  // namespace lincluster

#endif  // LINCLUSTER_FOCK_HPP
