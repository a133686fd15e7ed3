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

#ifndef LINCLUSTER_STABILIZER_HPP
#define LINCLUSTER_STABILIZER_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lincluster/errors.hpp"
#include "lincluster/qubit_state.hpp"

namespace lincluster {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) {
  constexpr std::array<char, 4> c{'I', 'X', 'Y', 'Z'};
  return c[static_cast<std::size_t>(p)];
}

// Signed tensor product of single-qubit Pauli operators.
struct PauliString {
  int sign = +1;  // +1 or -1
  std::vector<Pauli> letters;

  PauliString() = default;
  PauliString(int s, std::vector<Pauli> l) : sign(s), letters(std::move(l)) {
    if (sign != 1 && sign != -1) throw validation_error("sign must be +1 or -1");
  }

  // Accepts "ZZII", "+XXZI", "-YYZI".
  static PauliString parse(std::string_view text) {
    int sign = +1;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      sign = text.front() == '-' ? -1 : +1;
      text.remove_prefix(1);
    }
    if (text.empty()) throw parse_error("empty operator string");
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) {
      switch (c) {
        case 'I': letters.push_back(Pauli::I); break;
        case 'X': letters.push_back(Pauli::X); break;
        case 'Y': letters.push_back(Pauli::Y); break;
        case 'Z': letters.push_back(Pauli::Z); break;
        default: throw parse_error(std::string("invalid operator letter '") + c + "'");
      }
    }
    return PauliString(sign, std::move(letters));
  }

  std::size_t size() const { return letters.size(); }

  std::string str() const {
    std::string s(sign < 0 ? "-" : "+");
    for (Pauli p : letters) s += pauli_char(p);
    return s;
  }

  // "Z1Z2I3I4" style, sign prefixed only when negative
  std::string str_indexed() const {
    std::string s(sign < 0 ? "-" : "");
    for (std::size_t i = 0; i < letters.size(); ++i) {
      s += pauli_char(letters[i]);
      s += std::to_string(i + 1);
    }
    return s;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

namespace detail {

// single-site product a*b = i^phase * c, phase in {0,1,3}
inline std::pair<int, Pauli> pauli_mul(Pauli a, Pauli b) {
  if (a == Pauli::I) return {0, b};
  if (b == Pauli::I) return {0, a};
  if (a == b) return {0, Pauli::I};
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  // cyclic X->Y->Z->X gives +i, the reverse gives -i
  const bool forward = (ib - ia + 3) % 3 == 1;
  const Pauli c = static_cast<Pauli>(6 - ia - ib);  // the remaining letter
  return {forward ? 1 : 3, c};
}

}  // namespace detail

// Product with the i^k phase tracked explicitly.
struct TrackedProduct {
  int phase_quarter = 0;  // overall phase is i^phase_quarter times sign product
  std::vector<Pauli> letters;
};

inline TrackedProduct multiply_tracked(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) throw validation_error("operator lengths differ");
  TrackedProduct out;
  out.letters.reserve(a.size());
  int phase = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [q, c] = detail::pauli_mul(a.letters[i], b.letters[i]);
    phase = (phase + q) % 4;
    out.letters.push_back(c);
  }
  if (a.sign * b.sign < 0) phase = (phase + 2) % 4;
  out.phase_quarter = phase;
  return out;
}

inline bool commutes(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) throw validation_error("operator lengths differ");
  int anti = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Pauli x = a.letters[i], y = b.letters[i];
    if (x != Pauli::I && y != Pauli::I && x != y) ++anti;
  }
  return anti % 2 == 0;
}

// Product of two commuting signed operators; the result has a real sign.
inline PauliString operator*(const PauliString& a, const PauliString& b) {
  TrackedProduct p = multiply_tracked(a, b);
  if (p.phase_quarter % 2 != 0)
    throw validation_error("product of anticommuting operators has imaginary phase");
  return PauliString(p.phase_quarter == 0 ? +1 : -1, std::move(p.letters));
}

// All 2^m signed products of m independent commuting generators, ordered by
// subset size then lexicographic subset, identity last.
class StabilizerGroup {
 public:
  static StabilizerGroup from_generators(const std::vector<PauliString>& generators) {
    if (generators.empty()) throw validation_error("no generators given");
    const std::size_t n = generators.front().size();
    for (const auto& g : generators)
      if (g.size() != n) throw validation_error("generator lengths differ");
    for (std::size_t i = 0; i < generators.size(); ++i)
      for (std::size_t j = i + 1; j < generators.size(); ++j)
        if (!commutes(generators[i], generators[j]))
          throw validation_error("generators " + std::to_string(i + 1) + " and " +
                                 std::to_string(j + 1) + " do not commute");

    StabilizerGroup group;
    group.num_qubits_ = static_cast<int>(n);
    std::set<std::vector<Pauli>> seen;
    auto add_subset = [&](const std::vector<std::size_t>& subset) {
      PauliString e(+1, std::vector<Pauli>(n, Pauli::I));
      std::string label;
      for (std::size_t gi : subset) {
        e = e * generators[gi];
        label += "g" + std::to_string(gi + 1);
      }
      if (label.empty()) label = "I";
      if (!seen.insert(e.letters).second)
        throw validation_error("generators are not independent");
      group.elements_.push_back(std::move(e));
      group.labels_.push_back(std::move(label));
    };

    const std::size_t m = generators.size();
    std::vector<std::size_t> subset;
    for (std::size_t size = 1; size <= m; ++size) {
      subset.assign(size, 0);
      // lexicographic combinations of {0..m-1} of the given size
      auto emit = [&](auto&& self, std::size_t pos, std::size_t start) -> void {
        if (pos == size) {
          add_subset(subset);
          return;
        }
        for (std::size_t v = start; v < m; ++v) {
          subset[pos] = v;
          self(self, pos + 1, v + 1);
        }
      };
      emit(emit, 0, 0);
    }
    add_subset({});  // identity
    return group;
  }

  const std::vector<PauliString>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return elements_.size(); }
  int num_qubits() const { return num_qubits_; }

 private:
  std::vector<PauliString> elements_;
  std::vector<std::string> labels_;
  int num_qubits_ = 0;
};

inline StabilizerGroup stabilizer_group(const std::vector<PauliString>& generators) {
  return StabilizerGroup::from_generators(generators);
}

// ---------------------------------------------------------------------------
// linear cluster states

// Two conventions for the 4-qubit chain: the standard graph-state form built
// from |+> qubits, and the computational-basis form reached from it by
// Hadamards on the two end qubits.
enum class ClusterConvention { standard, hadamard_ends };

// Builds |C_n> through the recurrence
//   |C_n> = (|C_{n-1}>|H> + Z_{n-1}|C_{n-1}>|V>)/sqrt(2),  |C_1> = |+>.
inline QubitState cluster_state(int n, ClusterConvention conv = ClusterConvention::standard) {
  if (n < 1) throw validation_error("cluster state needs at least one qubit");
  if (n > 24) throw validation_error("cluster state limited to 24 qubits");
  if (conv == ClusterConvention::hadamard_ends && n != 4)
    throw validation_error("the hadamard_ends convention is defined for n = 4");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<std::complex<double>> amps{inv_sqrt2, inv_sqrt2};  // |+>
  for (int k = 2; k <= n; ++k) {
    std::vector<std::complex<double>> next(amps.size() * 2);
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const double zsign = (i & 1) ? -1.0 : 1.0;  // Z on the previous last qubit
      next[2 * i] = amps[i] * inv_sqrt2;
      next[2 * i + 1] = amps[i] * inv_sqrt2 * zsign;
    }
    amps = std::move(next);
  }
  QubitState state{std::move(amps)};
  if (conv == ClusterConvention::hadamard_ends)
    state = apply_hadamard(apply_hadamard(state, 0), n - 1);
  return state;
}

// Independent construction: CPhase gates between neighbors on |+>^n.
inline QubitState cluster_state_by_cphase(int n) {
  if (n < 1) throw validation_error("cluster state needs at least one qubit");
  if (n > 24) throw validation_error("cluster state limited to 24 qubits");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::complex<double>> amps(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  for (int k = 0; k + 1 < n; ++k) {
    const std::size_t b1 = std::size_t{1} << (n - 1 - k);
    const std::size_t b2 = std::size_t{1} << (n - 2 - k);
    for (std::size_t i = 0; i < dim; ++i)
      if ((i & b1) && (i & b2)) amps[i] = -amps[i];
  }
  return QubitState(std::move(amps));
}

// Stabilizer generators fixing cluster_state(n, conv): the usual X-with-Z-
// neighbors pattern, conjugated by the end Hadamards for the 4-qubit variant.
inline std::vector<PauliString> cluster_generators(
    int n, ClusterConvention conv = ClusterConvention::standard) {
  if (n < 1) throw validation_error("cluster generators need at least one qubit");
  if (conv == ClusterConvention::hadamard_ends) {
    if (n != 4)
      throw validation_error("the hadamard_ends convention is defined for n = 4");
    return {PauliString::parse("ZZII"), PauliString::parse("XXZI"),
            PauliString::parse("IZXX"), PauliString::parse("IIZZ")};
  }
  std::vector<PauliString> gens;
  gens.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::I);
    letters[static_cast<std::size_t>(i)] = Pauli::X;
    if (i > 0) letters[static_cast<std::size_t>(i - 1)] = Pauli::Z;
    if (i + 1 < n) letters[static_cast<std::size_t>(i + 1)] = Pauli::Z;
    gens.emplace_back(+1, std::move(letters));
  }
  return gens;
}

// ---------------------------------------------------------------------------
// expectations and fidelity

// op|psi> for a signed Pauli string; Y = [[0, -i], [i, 0]].
inline QubitState apply_pauli(const QubitState& state, const PauliString& op) {
  if (static_cast<int>(op.size()) != state.num_qubits())
    throw validation_error("operator length does not match qubit count");
  const int n = state.num_qubits();
  std::vector<std::complex<double>> out(state.dimension(), {0.0, 0.0});
  std::size_t flip = 0;
  for (int q = 0; q < n; ++q) {
    Pauli p = op.letters[static_cast<std::size_t>(q)];
    if (p == Pauli::X || p == Pauli::Y) flip |= std::size_t{1} << (n - 1 - q);
  }
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    std::complex<double> phase{static_cast<double>(op.sign), 0.0};
    for (int q = 0; q < n; ++q) {
      const std::size_t bit = (i >> (n - 1 - q)) & 1;
      switch (op.letters[static_cast<std::size_t>(q)]) {
        case Pauli::Z:
          if (bit) phase = -phase;
          break;
        case Pauli::Y:
          // Y|0> = i|1>, Y|1> = -i|0>
          phase *= bit ? std::complex<double>{0.0, -1.0} : std::complex<double>{0.0, 1.0};
          break;
        default:
          break;
      }
    }
    out[i ^ flip] += phase * state.amplitude(i);
  }
  return QubitState(std::move(out));
}

// <psi|op|psi>; real for Hermitian signed Pauli strings.
inline double expectation(const QubitState& state, const PauliString& op) {
  const std::complex<double> v = overlap(state, apply_pauli(state, op));
  if (std::abs(v.imag()) > 1e-10)
    throw validation_error("expectation value has a non-negligible imaginary part");
  return v.real();
}

// Mean of the 2^N stabilizer expectation values = overlap with the target
// projector.  The fixed-size overload mirrors the 4-qubit analysis table.
inline double fidelity_projector(std::span<const double> expectations) {
  if (expectations.size() != 16)
    throw validation_error("expected exactly 16 expectation values");
  double s = 0.0;
  for (double v : expectations) s += v;
  return s / 16.0;
}

inline double fidelity_projector(const QubitState& state, const StabilizerGroup& group) {
  if (group.num_qubits() != state.num_qubits())
    throw validation_error("group and state qubit counts differ");
  double s = 0.0;
  for (const auto& e : group.elements()) s += expectation(state, e);
  return s / static_cast<double>(group.size());
}

inline Eigen::MatrixXcd pauli_matrix(const PauliString& op) {
  using Mat = Eigen::MatrixXcd;
  const std::complex<double> im{0.0, 1.0};
  Mat x(2, 2), y(2, 2), z(2, 2), id = Mat::Identity(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -im, im, 0;
  z << 1, 0, 0, -1;
  Mat m = Mat::Identity(1, 1);
  for (Pauli p : op.letters) {
    const Mat* f = &id;
    if (p == Pauli::X) f = &x;
    else if (p == Pauli::Y) f = &y;
    else if (p == Pauli::Z) f = &z;
    Mat next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        next.block(2 * r, 2 * c, 2, 2) = m(r, c) * (*f);
    m = std::move(next);
  }
  return static_cast<double>(op.sign) * m;
}

// (1/|S|) sum of the group elements as a dense matrix.
inline Eigen::MatrixXcd group_projector(const StabilizerGroup& group) {
  const Eigen::Index dim = Eigen::Index{1} << group.num_qubits();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : group.elements()) acc += pauli_matrix(e);
  return acc / static_cast<double>(group.size());
}

// ---------------------------------------------------------------------------
// local-hidden-variable check

// One deterministic local assignment: a value +/-1 for every (qubit, letter)
// pair that appears in the constraints.
struct LhvAssignment {
  std::map<std::pair<int, char>, int> values;
};

struct LhvResult {
  bool contradiction = false;
  std::optional<LhvAssignment> witness;  // set when satisfiable
};

// Exhaustive search over deterministic local values for the letters actually
// used; a constraint (op, s) requires the product of the assigned values over
// op's non-identity positions to equal s.
inline LhvResult lhv_contradiction(
    const std::vector<std::pair<PauliString, int>>& constraints) {
  if (constraints.empty()) return {false, LhvAssignment{}};
  std::set<std::pair<int, char>> used_set;
  for (const auto& [op, required] : constraints) {
    if (required != 1 && required != -1)
      throw validation_error("required correlation must be +1 or -1");
    for (std::size_t q = 0; q < op.size(); ++q)
      if (op.letters[q] != Pauli::I)
        used_set.insert({static_cast<int>(q), pauli_char(op.letters[q])});
  }
  std::vector<std::pair<int, char>> used(used_set.begin(), used_set.end());
  if (used.size() > 24)
    throw validation_error("too many local observables for exhaustive search");

  for (std::size_t mask = 0; mask < (std::size_t{1} << used.size()); ++mask) {
    auto value = [&](std::size_t v) { return (mask >> v) & 1 ? -1 : +1; };
    bool ok = true;
    for (const auto& [op, required] : constraints) {
      int prod = op.sign;
      for (std::size_t q = 0; q < op.size(); ++q) {
        if (op.letters[q] == Pauli::I) continue;
        const std::pair<int, char> key{static_cast<int>(q), pauli_char(op.letters[q])};
        const auto it = std::lower_bound(used.begin(), used.end(), key);
        prod *= value(static_cast<std::size_t>(it - used.begin()));
      }
      if (prod != required) {
        ok = false;
        break;
      }
    }
    if (ok) {
      LhvAssignment a;
      for (std::size_t v = 0; v < used.size(); ++v) a.values[used[v]] = value(v);
      return {false, std::move(a)};
    }
  }
  return {true, std::nullopt};
}

}  // namespace lincluster

#endif  // LINCLUSTER_STABILIZER_HPP
