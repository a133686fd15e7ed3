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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lincluster/elements.hpp"
#include "lincluster/fock.hpp"
#include "helpers.hpp"

using namespace lincluster;

TEST_CASE("central coupler realizes the polarization-split blocks") {
  const auto t = pdbs({2, 3, 1.0, 1.0 / 3.0});
  const auto& u = t.matrix();
  // mode order [2H, 2V, 3H, 3V]
  const double s13 = std::sqrt(1.0 / 3.0);
  const double s23 = std::sqrt(2.0 / 3.0);
  REQUIRE(std::abs(u(0, 0) - 1.0) < 1e-15);      // H passes
  REQUIRE(std::abs(u(2, 2) - 1.0) < 1e-15);
  REQUIRE(std::abs(u(2, 0)) < 1e-15);
  REQUIRE(std::abs(u(1, 1) - s13) < 1e-15);      // V splits with the i cross phase
  REQUIRE(std::abs(u(3, 3) - s13) < 1e-15);
  REQUIRE(std::abs(u(3, 1) - Amplitude{0.0, s23}) < 1e-15);
  REQUIRE(std::abs(u(1, 3) - Amplitude{0.0, s23}) < 1e-15);
  REQUIRE(t.is_unitary());
}

TEST_CASE("full transmission is the identity") {
  const auto t = pdbs({1, 2, 1.0, 1.0});
  REQUIRE((t.matrix() - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("balanced splitter is unitary") {
  const auto t = pdbs({1, 2, 0.5, 0.5});
  REQUIRE(t.is_unitary(1e-12));
}

TEST_CASE("polarization-independent couplers commute with global rotations") {
  std::mt19937 rng(7);
  const auto bs = pdbs({1, 2, 0.5, 0.5});
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXcd r = test_helpers::random_unitary(2, rng);
    Eigen::Matrix4cd rot = Eigen::Matrix4cd::Zero();
    rot.block(0, 0, 2, 2) = r;  // rotate (H, V) of mode 1
    rot.block(2, 2, 2, 2) = r;  // and of mode 2
    const Eigen::Matrix4cd comm = bs.matrix() * rot - rot * bs.matrix();
    REQUIRE(comm.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("couplers are unitary across the whole parameter square") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep)
    REQUIRE(pdbs({1, 2, uni(rng), uni(rng)}).is_unitary(1e-12));
}

TEST_CASE("coupler symmetry under swapping the spatial modes") {
  const auto t = pdbs({1, 2, 0.7, 0.2});
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();  // swap the two spatial blocks
  p(0, 2) = p(1, 3) = p(2, 0) = p(3, 1) = 1.0;
  REQUIRE((p * t.matrix() * p - t.matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("transmissions outside [0,1] are rejected") {
  REQUIRE_THROWS_AS(pdbs({1, 2, -0.1, 0.5}), validation_error);
  REQUIRE_THROWS_AS(pdbs({1, 2, 0.5, 1.1}), validation_error);
  REQUIRE_THROWS_AS(pdbs({1, 1, 0.5, 0.5}), config_error);
}

TEST_CASE("attenuator leaks into its loss mode") {
  FockState::TermMap terms;
  Occupation occ(4, 0);
  occ[0] = 1;  // single H photon in mode 1; register [1H, 1V, 5H, 5V]
  terms[occ] = 1.0;
  const auto in = FockState::from_terms(spatial_register({1, 5}), std::move(terms));
  const auto out = apply_transform(in, attenuator({1, 5, 1.0 / 3.0, 1.0}));

  Occupation stay(4, 0), leak(4, 0);
  stay[0] = 1;
  leak[2] = 1;
  REQUIRE(std::abs(out.amplitude(stay) - std::sqrt(1.0 / 3.0)) < 1e-12);
  REQUIRE(std::abs(out.amplitude(leak) - Amplitude{0.0, std::sqrt(2.0 / 3.0)}) < 1e-12);

  const auto [kept, prob] = postselect_coincidence(out, {1});
  REQUIRE(std::abs(prob - 1.0 / 3.0) < 1e-12);
  REQUIRE(kept.term_count() == 1);
}

TEST_CASE("identity attenuator never populates the loss mode") {
  FockState::TermMap terms;
  Occupation occ(4, 0);
  occ[0] = 1;
  occ[1] = 1;
  terms[occ] = 1.0;
  const auto in = FockState::from_terms(spatial_register({1, 5}), std::move(terms));
  const auto out = apply_transform(in, attenuator({1, 5, 1.0, 1.0}));
  REQUIRE(out.term_count() == 1);
  REQUIRE(std::abs(out.amplitude(occ) - 1.0) < 1e-15);
}

TEST_CASE("attenuator loss mode must be distinct") {
  REQUIRE_THROWS_AS(attenuator({1, 1, 0.5, 1.0}), config_error);
}

TEST_CASE("attenuators are unitary on the enlarged register") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep)
    REQUIRE(attenuator({1, 9, uni(rng), uni(rng)}).is_unitary(1e-12));
}
