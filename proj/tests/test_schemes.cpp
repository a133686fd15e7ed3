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
#include <complex>
#include <random>
#include <vector>

#include "lincluster/schemes.hpp"
#include "lincluster/stabilizer.hpp"
#include "helpers.hpp"

using namespace lincluster;

namespace {

QubitState four_qubit_target() { return cluster_state(4, ClusterConvention::hadamard_ends); }

// (|C_{n}>|0> + sqrt(3) Z_n|C_{n}>|1>)/2 for the chain-growth checks
QubitState partial_chain_target(int n) {
  const auto c = cluster_state(n);
  std::vector<std::complex<double>> amps(c.dimension() * 2, {0.0, 0.0});
  const double r3 = std::sqrt(3.0) / 2.0;
  for (std::size_t i = 0; i < c.dimension(); ++i) {
    const double zsign = (i & 1) ? -1.0 : 1.0;
    amps[2 * i] = 0.5 * c.amplitude(i);
    amps[2 * i + 1] = r3 * zsign * c.amplitude(i);
  }
  return QubitState(std::move(amps));
}

}  // namespace

TEST_CASE("direct scheme yields the cluster state with probability 1/4") {
  const auto res = run(build_fig1c());
  REQUIRE(std::abs(res.probability - 0.25) < 1e-10);
  REQUIRE(res.state.num_qubits() == 4);
  const auto shown = canonical_phase(res.state);
  REQUIRE(std::abs(shown.amplitude(0b0000) - 0.5) < 1e-10);
  REQUIRE(std::abs(shown.amplitude(0b0011) - 0.5) < 1e-10);
  REQUIRE(std::abs(shown.amplitude(0b1100) - 0.5) < 1e-10);
  REQUIRE(std::abs(shown.amplitude(0b1111) + 0.5) < 1e-10);
  REQUIRE(fidelity(res.state, four_qubit_target()) >= 1.0 - 1e-10);

  // the whole stabilizer group fixes the simulated output
  const auto group =
      stabilizer_group(cluster_generators(4, ClusterConvention::hadamard_ends));
  REQUIRE(std::abs(fidelity_projector(res.state, group) - 1.0) < 1e-10);
}

TEST_CASE("attenuated schemes reach the same state at probability 1/9") {
  const auto ra = run(build_fig1a());
  const auto rb = run(build_fig1b());
  REQUIRE(std::abs(ra.probability - 1.0 / 9.0) < 1e-10);
  REQUIRE(std::abs(rb.probability - 1.0 / 9.0) < 1e-10);
  REQUIRE(fidelity(ra.state, four_qubit_target()) >= 1.0 - 1e-10);
  REQUIRE(fidelity(ra.state, rb.state) >= 1.0 - 1e-10);
  const auto rc = run(build_fig1c());
  REQUIRE(fidelity(rb.state, rc.state) >= 1.0 - 1e-10);
}

TEST_CASE("removing the attenuators skews the output weights") {
  SchemeDescription stripped = build_fig1a();
  stripped.elements = {stripped.elements.front()};  // central coupler only
  const auto res = run(stripped);
  const double fid = fidelity(res.state, four_qubit_target());
  REQUIRE(fid < 1.0 - 1e-3);
  REQUIRE(std::abs(fid - 0.870512701892) < 1e-9);
  // the four coincidence amplitudes are no longer balanced
  const auto shown = canonical_phase(res.state);
  REQUIRE(std::abs(shown.amplitude(0b0000) - 0.75) < 1e-9);
  REQUIRE(std::abs(shown.amplitude(0b0011) - std::sqrt(3.0) / 4.0) < 1e-9);
  REQUIRE(std::abs(shown.amplitude(0b1111) + 0.25) < 1e-9);
}

TEST_CASE("a scheme without elements returns the source state unchanged") {
  SchemeDescription s;
  s.sources = {{1, 2, {{Pol::H, Pol::H, 0.5}, {Pol::V, Pol::V, std::sqrt(3.0) / 2.0}}}};
  s.coincidence_modes = {1, 2};
  const auto res = run(s);
  REQUIRE(std::abs(res.probability - 1.0) < 1e-12);
  REQUIRE(std::abs(res.state.amplitude(0b00) - 0.5) < 1e-12);
  REQUIRE(std::abs(res.state.amplitude(0b11) - std::sqrt(3.0) / 2.0) < 1e-12);
}

TEST_CASE("unitarity keeps the coincidence and failure weights complementary") {
  const auto scheme = build_fig1c();
  auto state = tensor(create_pair_state(scheme.sources[0].terms, 1, 2),
                      create_pair_state(scheme.sources[1].terms, 3, 4));
  state = apply_transform(state, pdbs(std::get<PdbsSpec>(scheme.elements[0])));
  REQUIRE(std::abs(state.norm_squared() - 1.0) < 1e-10);
  const auto [kept, prob] = postselect_coincidence(state, scheme.coincidence_modes);
  REQUIRE(std::abs(prob + (state.norm_squared() - prob) - 1.0) < 1e-10);
  REQUIRE(std::abs(prob - 0.25) < 1e-10);
}

TEST_CASE("chains reach the 2N-qubit cluster at the closed-form probability") {
  for (int n : {2, 3}) {
    const auto res = run(build_chain(n));
    REQUIRE(std::abs(res.probability - std::pow(0.25, n - 1)) < 1e-10);
    REQUIRE(fidelity(res.state, cluster_state(2 * n)) >= 1.0 - 1e-10);
  }
  REQUIRE_THROWS_AS(build_chain(1), validation_error);
}

TEST_CASE("partial chains grow by the cluster recurrence") {
  // take the first k sources of the four-pair chain, connect them, and
  // post-select the first 2k modes
  const auto full = build_chain(4);
  for (int k = 1; k <= 3; ++k) {
    SchemeDescription part;
    part.sources.assign(full.sources.begin(), full.sources.begin() + k);
    part.elements.assign(full.elements.begin(), full.elements.begin() + (k - 1));
    for (int m = 1; m <= 2 * k; ++m) part.coincidence_modes.push_back(m);

    const auto res = run(part);
    REQUIRE(std::abs(res.probability - std::pow(0.25, k - 1)) < 1e-10);
    const auto target = partial_chain_target(2 * k - 1);
    REQUIRE(fidelity(res.state, target) >= 1.0 - 1e-10);

    // weight 1/2 sits on the grown-cluster branch ending in H
    const auto c = cluster_state(2 * k - 1);
    std::complex<double> branch{0.0, 0.0};
    for (std::size_t i = 0; i < c.dimension(); ++i)
      branch += std::conj(c.amplitude(i)) * res.state.amplitude(2 * i);
    REQUIRE(std::abs(std::abs(branch) - 0.5) < 1e-10);
  }
}

TEST_CASE("connection order does not matter") {
  const auto base = build_chain(3);
  SchemeDescription swapped = base;
  std::swap(swapped.elements[0], swapped.elements[1]);
  const auto a = run(base);
  const auto b = run(swapped);
  REQUIRE(std::abs(a.probability - b.probability) < 1e-12);
  REQUIRE(fidelity(a.state, b.state) >= 1.0 - 1e-12);
}

TEST_CASE("scheme validation rejects bad wiring") {
  SchemeDescription s = build_fig1a();
  SECTION("coincidence on a loss mode") {
    s.coincidence_modes = {1, 2, 3, 5};
    REQUIRE_THROWS_AS(run(s), config_error);
  }
  SECTION("loss mode colliding with a source mode") {
    s.elements[1] = AttenuatorSpec{2, 4, 1.0 / 3.0, 1.0};
    REQUIRE_THROWS_AS(run(s), config_error);
  }
  SECTION("coupler on an undeclared mode") {
    s.elements[0] = PdbsSpec{2, 9, 1.0, 1.0 / 3.0};
    REQUIRE_THROWS_AS(run(s), config_error);
  }
  SECTION("sources sharing a mode") {
    s.sources[1].mode_a = 2;
    REQUIRE_THROWS_AS(run(s), config_error);
  }
}

TEST_CASE("scheme files round-trip through the text format") {
  for (const auto& scheme : {build_fig1a(), build_fig1b(), build_fig1c(), build_chain(2)}) {
    const auto parsed = parse_scheme(format_scheme(scheme));
    const auto a = run(scheme);
    const auto b = run(parsed);
    REQUIRE(std::abs(a.probability - b.probability) < 1e-12);
    REQUIRE(fidelity(a.state, b.state) >= 1.0 - 1e-12);
  }
}

TEST_CASE("scheme parse errors carry line numbers") {
  try {
    parse_scheme("source 1 2 HH=1\nbogus 3 4\n");
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    REQUIRE(e.line() == 2);
    REQUIRE(std::string(e.what()).find("bogus") != std::string::npos);
  }
  REQUIRE_THROWS_AS(parse_scheme("source 1 2 HH=1\n"), parse_error);  // no coincidence
  REQUIRE_THROWS_AS(parse_scheme("source 1 2 XX=1\ncoincidence 1 2\n"), parse_error);
  REQUIRE_THROWS_AS(parse_scheme("pdbs 1 2 th=1\ncoincidence 1 2\n"), parse_error);
  REQUIRE_THROWS_AS(
      parse_scheme("source 1 2 HH=1\ncoincidence 1 2\ncoincidence 1\n"), parse_error);
  REQUIRE_THROWS_AS(parse_scheme("source 1 2 HH=one\ncoincidence 1 2\n"), parse_error);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto scheme = parse_scheme(
      "# a two-mode source\n"
      "\n"
      "source 1 2 HH=0.5 VV=0.86602540378443865   # skewed pair\n"
      "coincidence 1 2\n");
  REQUIRE(scheme.sources.size() == 1);
  const auto res = run(scheme);
  REQUIRE(std::abs(res.probability - 1.0) < 1e-10);
}

TEST_CASE("middle-source amplitudes have the quoted Schmidt coefficients") {
  Eigen::Matrix2cd m;
  const double s3 = std::sqrt(3.0) / 4.0;
  m << 0.25, s3, s3, -0.75;
  const auto form = schmidt_decompose(m);
  REQUIRE(std::abs(form.coefficients[0] - (std::sqrt(7.0) + 1.0) / 4.0) < 1e-12);
  REQUIRE(std::abs(form.coefficients[1] - (std::sqrt(7.0) - 1.0) / 4.0) < 1e-12);
}

TEST_CASE("schmidt of product and maximally entangled states") {
  Eigen::Matrix2cd product = Eigen::Matrix2cd::Zero();
  product(0, 0) = 1.0;
  const auto p = schmidt_decompose(product);
  REQUIRE(std::abs(p.coefficients[0] - 1.0) < 1e-12);
  REQUIRE(std::abs(p.coefficients[1]) < 1e-12);

  Eigen::Matrix2cd bell = Eigen::Matrix2cd::Zero();
  bell(0, 0) = bell(1, 1) = 1.0 / std::sqrt(2.0);
  const auto b = schmidt_decompose(bell);
  REQUIRE(std::abs(b.coefficients[0] - 1.0 / std::sqrt(2.0)) < 1e-12);
  REQUIRE(std::abs(b.coefficients[1] - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("schmidt rejects degenerate input") {
  REQUIRE_THROWS_AS(schmidt_decompose(Eigen::Matrix2cd::Zero()), validation_error);
  REQUIRE_THROWS_AS(schmidt_decompose(Eigen::Matrix2cd::Identity()), validation_error);
}

TEST_CASE("schmidt coefficients are invariant under local rotations") {
  std::mt19937 rng(29);
  Eigen::Matrix2cd m;
  const double s3 = std::sqrt(3.0) / 4.0;
  m << 0.25, s3, s3, -0.75;
  const auto base = schmidt_decompose(m);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Matrix2cd a = test_helpers::random_unitary(2, rng);
    const Eigen::Matrix2cd b = test_helpers::random_unitary(2, rng);
    const Eigen::Matrix2cd rotated = a * m * b.transpose();
    const auto form = schmidt_decompose(rotated);
    REQUIRE(std::abs(form.coefficients[0] - base.coefficients[0]) < 1e-12);
    REQUIRE(std::abs(form.coefficients[1] - base.coefficients[1]) < 1e-12);
  }
}

TEST_CASE("schmidt factors reconstruct the input matrix") {
  std::mt19937 rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::Matrix2cd m = test_helpers::random_unitary(2, rng);
    m *= 1.0 / m.norm();
    const auto form = schmidt_decompose(m);
    Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
    diag(0, 0) = form.coefficients[0];
    diag(1, 1) = form.coefficients[1];
    const Eigen::Matrix2cd rebuilt = form.basis_a * diag * form.basis_b.adjoint();
    REQUIRE((rebuilt - m).cwiseAbs().maxCoeff() < 1e-10);
  }
}
