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

#ifndef LINCLUSTER_ELEMENTS_HPP
#define LINCLUSTER_ELEMENTS_HPP

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "lincluster/errors.hpp"
#include "lincluster/fock.hpp"

namespace lincluster {

// Polarization-dependent beam splitter between two spatial modes.  Each
// polarization p couples through the unitary block
//   [ sqrt(T_p)        i sqrt(1-T_p) ]
//   [ i sqrt(1-T_p)    sqrt(T_p)     ]
// i.e. the reflected part picks up a factor i.
struct PdbsSpec {
  int mode_a = 0;
  int mode_b = 1;
  double t_h = 1.0;
  double t_v = 1.0;
};

// Polarization-dependent attenuation of one mode, kept unitary by coupling
// the discarded part into a dedicated loss mode.  The loss mode must start
// in vacuum and stay outside the coincidence set.
struct AttenuatorSpec {
  int mode = 0;
  int ancilla = 1;
  double t_h = 1.0;
  double t_v = 1.0;
};

namespace detail {

inline void check_transmission(double t, const char* which) {
  if (!(t >= 0.0 && t <= 1.0))
    throw validation_error(std::string(which) + " transmission must lie in [0, 1]");
}

inline ModeTransform polarization_coupler(int a, int b, double t_h, double t_v) {
  check_transmission(t_h, "H");
  check_transmission(t_v, "V");
  if (a == b) throw config_error("coupler needs two distinct spatial modes");
  auto modes = spatial_register({a, b});  // [aH, aV, bH, bV] with a < b
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  const Amplitude ih{0.0, std::sqrt(1.0 - t_h)};
  const Amplitude iv{0.0, std::sqrt(1.0 - t_v)};
  u(0, 0) = std::sqrt(t_h);
  u(2, 2) = std::sqrt(t_h);
  u(0, 2) = ih;
  u(2, 0) = ih;
  u(1, 1) = std::sqrt(t_v);
  u(3, 3) = std::sqrt(t_v);
  u(1, 3) = iv;
  u(3, 1) = iv;
  return ModeTransform(std::move(modes), u);
}

}  // namespace detail

inline ModeTransform pdbs(const PdbsSpec& spec) {
  return detail::polarization_coupler(spec.mode_a, spec.mode_b, spec.t_h, spec.t_v);
}

inline ModeTransform attenuator(const AttenuatorSpec& spec) {
  if (spec.ancilla == spec.mode)
    throw config_error("attenuator loss mode must differ from the attenuated mode");
  return detail::polarization_coupler(spec.mode, spec.ancilla, spec.t_h, spec.t_v);
}

}  // namespace lincluster

#endif  // LINCLUSTER_ELEMENTS_HPP
