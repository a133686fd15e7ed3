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

#ifndef LINCLUSTER_TESTS_HELPERS_HPP
#define LINCLUSTER_TESTS_HELPERS_HPP

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lincluster/fock.hpp"

namespace test_helpers {

inline Eigen::MatrixXcd random_unitary(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      g(r, c) = std::complex<double>{gauss(rng), gauss(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const std::complex<double> d = r(c, c);
    q.col(c) *= d / std::abs(d);
  }
  return q;
}

// Reference expansion used as the independent oracle for the transform
// bookkeeping: substitute each creation operator and multiply the polynomial
// out one factor at a time, with explicit sqrt(n!) conversions.
inline lincluster::FockState naive_apply_transform(const lincluster::FockState& state,
                                                   const lincluster::ModeTransform& t) {
  using namespace lincluster;
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

inline double max_amplitude_diff(const lincluster::FockState& a,
                                 const lincluster::FockState& b) {
  double d = 0.0;
  for (const auto& [occ, amp] : a.terms())
    d = std::max(d, std::abs(amp - b.amplitude(occ)));
  for (const auto& [occ, amp] : b.terms())
    d = std::max(d, std::abs(amp - a.amplitude(occ)));
  return d;
}

}  // namespace test_helpers

#endif  // LINCLUSTER_TESTS_HELPERS_HPP
