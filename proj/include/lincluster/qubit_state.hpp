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

#ifndef LINCLUSTER_QUBIT_STATE_HPP
#define LINCLUSTER_QUBIT_STATE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "lincluster/errors.hpp"

namespace lincluster {

// Normalized pure state of n polarization qubits.  Amplitude index packs the
// qubits with qubit 0 (the first listed mode) as the most significant bit;
// bit value 0 is H, 1 is V.
class QubitState {
 public:
  explicit QubitState(std::vector<std::complex<double>> amps) : amps_(std::move(amps)) {
    std::size_t n = amps_.size();
    if (n == 0 || (n & (n - 1)) != 0)
      throw validation_error("amplitude vector length must be a power of two");
    num_qubits_ = 0;
    while ((std::size_t{1} << num_qubits_) < n) ++num_qubits_;
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-10)
      throw validation_error("qubit state is not normalized");
  }

  // Normalizes before constructing; rejects the zero vector.
  static QubitState normalized(std::vector<std::complex<double>> amps) {
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    if (n2 <= 0.0) throw validation_error("cannot normalize a zero vector");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= s;
    return QubitState(std::move(amps));
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
  std::complex<double> amplitude(std::size_t index) const { return amps_.at(index); }

 private:
  std::vector<std::complex<double>> amps_;
  int num_qubits_ = 0;
};

inline std::complex<double> overlap(const QubitState& a, const QubitState& b) {
  if (a.num_qubits() != b.num_qubits())
    throw config_error("overlap of states with different qubit counts");
  std::complex<double> s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dimension(); ++i)
    s += std::conj(a.amplitude(i)) * b.amplitude(i);
  return s;
}

inline double fidelity(const QubitState& a, const QubitState& b) {
  return std::norm(overlap(a, b));
}

// qubit indices are 0-based, qubit 0 = most significant bit
inline QubitState apply_hadamard(const QubitState& state, int qubit) {
  if (qubit < 0 || qubit >= state.num_qubits())
    throw validation_error("qubit index out of range");
  const std::size_t bit = std::size_t{1} << (state.num_qubits() - 1 - qubit);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<std::complex<double>> out(state.dimension());
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const std::size_t j = i ^ bit;
    if (i & bit)
      out[i] = (state.amplitude(j) - state.amplitude(i)) * inv_sqrt2;
    else
      out[i] = (state.amplitude(i) + state.amplitude(j)) * inv_sqrt2;
  }
  return QubitState(std::move(out));
}

inline QubitState apply_pauli_z(const QubitState& state, int qubit) {
  if (qubit < 0 || qubit >= state.num_qubits())
    throw validation_error("qubit index out of range");
  const std::size_t bit = std::size_t{1} << (state.num_qubits() - 1 - qubit);
  std::vector<std::complex<double>> out = state.amplitudes();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (i & bit) out[i] = -out[i];
  return QubitState(std::move(out));
}

// Global phase fixed so the first nonzero amplitude is real positive.
inline QubitState canonical_phase(const QubitState& state) {
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const auto a = state.amplitude(i);
    if (std::abs(a) > 1e-12) {
      const std::complex<double> rot = std::abs(a) / a;
      std::vector<std::complex<double>> out = state.amplitudes();
      for (auto& v : out) v *= rot;
      return QubitState(std::move(out));
    }
  }
  return state;
}

}  // namespace lincluster

#endif  // LINCLUSTER_QUBIT_STATE_HPP
