// Copyright 2026 The zne-lab Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "zne/circuit.hpp"

using namespace zne;

namespace {

// Classical truth: propagate the bitstring through CNOTs by hand, without
// touching the library's ideal_output_bits.
std::string propagate(const std::string& initial,
                      const std::vector<CnotGate>& gates) {
  std::string bits = initial;
  for (const auto& g : gates) {
    if (bits[g.control] == '1') {
      bits[g.target] = bits[g.target] == '1' ? '0' : '1';
    }
  }
  return bits;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd h;
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

}  // namespace

TEST_CASE("register construction is validated") {
  CHECK_NOTHROW(Circuit(1, "0"));
  CHECK_NOTHROW(Circuit(10, std::string(10, '1')));
  CHECK_THROWS_AS(Circuit(0, ""), ValidationError);
  CHECK_THROWS_AS(Circuit(11, std::string(11, '0')), ValidationError);
  CHECK_THROWS_AS(Circuit(2, "1"), ValidationError);    // wrong length
  CHECK_THROWS_AS(Circuit(2, "1x"), ValidationError);   // bad character
}

TEST_CASE("append validates gates against the register") {
  Circuit c(2, "00");
  CHECK_NOTHROW(c.append(CnotGate{0, 1}));
  CHECK_THROWS_AS(c.append(CnotGate{0, 2}), ValidationError);
  CHECK_THROWS_AS(c.append(CnotGate{2, 0}), ValidationError);
  CHECK_THROWS_AS(c.append(CnotGate{1, 1}), ValidationError);

  CHECK_NOTHROW(c.append(OneQubitGate{0, hadamard()}));
  Eigen::Matrix2cd not_unitary = hadamard();
  not_unitary(0, 0) += 1e-6;
  CHECK_THROWS_AS(c.append(OneQubitGate{0, not_unitary}), ValidationError);
  CHECK_THROWS_AS(c.append(OneQubitGate{2, hadamard()}), ValidationError);
}

TEST_CASE("cnot bookkeeping skips one-qubit gates") {
  Circuit c(3, "000");
  c.append(OneQubitGate{0, hadamard()});
  c.append(CnotGate{0, 1});
  c.append(OneQubitGate{2, hadamard()});
  c.append(CnotGate{2, 1});

  CHECK(c.n_cnots() == 2);
  CHECK(c.cnot_positions() == std::vector<std::size_t>{1, 3});
  CHECK(c.cnot_pair(0) == std::pair<QubitId, QubitId>{0, 1});
  // Pairs are reported unordered with the smaller index first.
  CHECK(c.cnot_pair(1) == std::pair<QubitId, QubitId>{1, 2});
  CHECK_THROWS_AS(c.cnot_pair(2), ValidationError);
}

TEST_CASE("chain generator alternates orientation") {
  const Circuit c = generate_cnot_chain(5, "00");
  REQUIRE(c.n_cnots() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    const auto& g = std::get<CnotGate>(c.gates()[k]);
    CHECK(g.control == (k % 2 == 0 ? 0 : 1));
    CHECK(g.target == (k % 2 == 0 ? 1 : 0));
  }
  CHECK_THROWS_AS(generate_cnot_chain(0, "00"), ValidationError);
}

TEST_CASE("chain ideal outputs follow classical propagation") {
  for (const std::string init : {"00", "01", "10", "11"}) {
    for (std::size_t n = 1; n <= 12; ++n) {
      const Circuit c = generate_cnot_chain(n, init);
      std::vector<CnotGate> gates;
      for (const auto& g : c.gates()) gates.push_back(std::get<CnotGate>(g));
      CHECK(ideal_output_bits(c) == propagate(init, gates));
    }
  }
}

TEST_CASE("chain output is periodic with period six") {
  // Two alternating CNOTs cycle three of the four basis states, so six
  // gates bring every input back to itself; "00" never moves at all.
  for (const std::string init : {"00", "01", "10", "11"}) {
    CHECK(ideal_output_bits(generate_cnot_chain(6, init)) == init);
    CHECK(ideal_output_bits(generate_cnot_chain(12, init)) == init);
  }
  for (std::size_t n = 1; n <= 6; ++n) {
    CHECK(ideal_output_bits(generate_cnot_chain(n, "00")) == "00");
  }
}

TEST_CASE("four-cnot chain on input 10 lands on 11") {
  CHECK(ideal_output_bits(generate_cnot_chain(4, "10")) == "11");
}

TEST_CASE("pair ladder cycles nearest-neighbour pairs") {
  const Circuit c = generate_pair_ladder(3, 5, "111");
  REQUIRE(c.n_cnots() == 5);
  const std::vector<std::pair<QubitId, QubitId>> expected{
      {0, 1}, {1, 2}, {0, 1}, {1, 2}, {0, 1}};
  for (std::size_t k = 0; k < 5; ++k) CHECK(c.cnot_pair(k) == expected[k]);
  CHECK_THROWS_AS(generate_pair_ladder(1, 2, "1"), ValidationError);
}

TEST_CASE("ideal_output_bits rejects non-classical circuits") {
  Circuit c(2, "00");
  c.append(OneQubitGate{0, hadamard()});
  CHECK_THROWS_AS(ideal_output_bits(c), ValidationError);
}

TEST_CASE("replication vectors must be odd, positive, one per cnot") {
  const Circuit c = generate_cnot_chain(3, "00");
  CHECK_NOTHROW(validate_replication(c, {1, 3, 5}));
  CHECK_THROWS_AS(validate_replication(c, {1, 3}), ValidationError);
  CHECK_THROWS_AS(validate_replication(c, {1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(validate_replication(c, {1, -3, 3}), ValidationError);
  CHECK_THROWS_AS(validate_replication(c, {0, 1, 1}), ValidationError);
}

TEST_CASE("is_unitary tolerance") {
  CHECK(is_unitary(hadamard()));
  Eigen::Matrix2cd m = hadamard();
  m(1, 0) += 1e-9;
  CHECK_FALSE(is_unitary(m));
  CHECK(is_unitary(m, 1e-6));
}
