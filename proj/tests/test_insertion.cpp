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

#include <vector>

#include "zne/density_matrix.hpp"
#include "zne/insertion.hpp"

using namespace zne;

namespace {

Rational q(long long num, long long den) { return Rational(num, den); }

// Structural plan equality: the delegating builders must return plans that
// are indistinguishable from their targets.
void check_same_plan(const MitigationPlan& a, const MitigationPlan& b) {
  CHECK(method_label(a.method) == method_label(b.method));
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].coefficient == b.entries[i].coefficient);
    CHECK(a.entries[i].label == b.entries[i].label);
    CHECK(a.entries[i].replication == b.entries[i].replication);
  }
}

// Exact moment checks: coefficients sum to one, and the per-gate first
// moment vanishes for folded gates (stays one for untouched gates).
void check_cancellation(const MitigationPlan& plan,
                        const std::vector<bool>& targeted) {
  Rational total(0);
  for (const auto& e : plan.entries) total += e.coefficient;
  CHECK(total == Rational(1));
  for (std::size_t gate = 0; gate < targeted.size(); ++gate) {
    Rational moment(0);
    for (const auto& e : plan.entries) {
      moment += e.coefficient * e.replication[gate];
    }
    CHECK(moment == (targeted[gate] ? Rational(0) : Rational(1)));
  }
}

}  // namespace

TEST_CASE("richardson coefficients at the standard fold points") {
  CHECK(richardson_coefficients({1, 3}) ==
        std::vector<Rational>{q(3, 2), q(-1, 2)});
  CHECK(richardson_coefficients({1, 3, 5}) ==
        std::vector<Rational>{q(15, 8), q(-5, 4), q(3, 8)});
  CHECK(richardson_coefficients({1, 3, 5, 7}) ==
        std::vector<Rational>{q(35, 16), q(-35, 16), q(21, 16), q(-5, 16)});
  CHECK(richardson_coefficients({1}) == std::vector<Rational>{q(1, 1)});
}

TEST_CASE("richardson coefficients solve the moment system exactly") {
  const std::vector<int> r{1, 3, 9, 11};
  const auto c = richardson_coefficients(r);
  for (std::size_t m = 0; m < r.size(); ++m) {
    Rational moment(0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      Rational power(1);
      for (std::size_t k = 0; k < m; ++k) power *= r[i];
      moment += c[i] * power;
    }
    CHECK(moment == (m == 0 ? Rational(1) : Rational(0)));
  }
}

TEST_CASE("richardson input validation") {
  CHECK_THROWS_AS(richardson_coefficients({}), ValidationError);
  CHECK_THROWS_AS(richardson_coefficients({1, 2}), ValidationError);
  CHECK_THROWS_AS(richardson_coefficients({-1, 3}), ValidationError);
  CHECK_THROWS_AS(richardson_coefficients({1, 3, 3}), ValidationError);
}

TEST_CASE("fold replicates individual cnots in place") {
  const Circuit base = generate_cnot_chain(3, "11");
  const Circuit folded = fold(base, {1, 3, 1});
  REQUIRE(folded.n_cnots() == 5);
  // The middle CNOT (1, 0) appears three times consecutively.
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto& g = std::get<CnotGate>(folded.gates()[k]);
    CHECK(g.control == 1);
    CHECK(g.target == 0);
  }
  CHECK_THROWS_AS(fold(base, {1, 1}), ValidationError);
  CHECK_THROWS_AS(fold(base, {1, 2, 1}), ValidationError);
}

TEST_CASE("folding preserves the noiseless state") {
  const Circuit base = generate_cnot_chain(4, "10");
  const auto want = simulate(base, NoiseModel::noiseless());
  for (const auto& replication :
       std::vector<std::vector<int>>{{3, 1, 1, 1}, {3, 3, 3, 3}, {1, 5, 1, 3}}) {
    const auto got = simulate(fold(base, replication), NoiseModel::noiseless());
    CHECK((got.matrix() - want.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  const auto deepened = simulate(deepen(base, 5), NoiseModel::noiseless());
  CHECK((deepened.matrix() - want.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(deepen(base, 5).n_cnots() == 20);
  CHECK_THROWS_AS(deepen(base, 2), ValidationError);
}

TEST_CASE("uniform-fold plan structure") {
  const Circuit c = generate_cnot_chain(4, "10");

  const auto first = fiim_plan(c, 1);
  REQUIRE(first.entries.size() == 2);
  CHECK(first.entries[0].label == "nominal");
  CHECK(first.entries[0].coefficient == q(3, 2));
  CHECK(first.entries[0].replication == std::vector<int>{1, 1, 1, 1});
  CHECK(first.entries[1].label == "fold-all-r3");
  CHECK(first.entries[1].coefficient == q(-1, 2));
  CHECK(first.entries[1].replication == std::vector<int>{3, 3, 3, 3});
  CHECK(first.entries[1].circuit.n_cnots() == 12);  // 3 n_c
  CHECK(total_cnots(first) == 16);

  const auto second = fiim_plan(c, 2);
  REQUIRE(second.entries.size() == 3);
  CHECK(second.entries[0].coefficient == q(15, 8));
  CHECK(second.entries[1].coefficient == q(-5, 4));
  CHECK(second.entries[2].coefficient == q(3, 8));
  CHECK(second.entries[2].replication == std::vector<int>{5, 5, 5, 5});

  check_cancellation(first, {true, true, true, true});
  check_cancellation(second, {true, true, true, true});
  CHECK_THROWS_AS(fiim_plan(c, 0), ValidationError);
}

TEST_CASE("per-gate plan structure") {
  const Circuit c = generate_cnot_chain(4, "10");
  const auto plan = riim_plan(c);
  REQUIRE(plan.entries.size() == 5);
  CHECK(plan.entries[0].coefficient == q(3, 1));  // (2 + 4) / 2
  for (std::size_t i = 1; i <= 4; ++i) {
    CHECK(plan.entries[i].coefficient == q(-1, 2));
    std::vector<int> want(4, 1);
    want[i - 1] = 3;
    CHECK(plan.entries[i].replication == want);
    CHECK(plan.entries[i].circuit.n_cnots() == 6);  // n_c + 2
  }
  check_cancellation(plan, {true, true, true, true});
}

TEST_CASE("list plans fold only the listed gates") {
  const Circuit c = generate_cnot_chain(4, "10");

  const auto lf = liim_fiim_plan(c, {0, 2});
  REQUIRE(lf.entries.size() == 2);
  CHECK(lf.entries[0].coefficient == q(3, 2));
  CHECK(lf.entries[1].coefficient == q(-1, 2));
  CHECK(lf.entries[1].replication == std::vector<int>{3, 1, 3, 1});
  check_cancellation(lf, {true, false, true, false});

  const auto lr = liim_riim_plan(c, {1, 3});
  REQUIRE(lr.entries.size() == 3);
  CHECK(lr.entries[0].coefficient == q(2, 1));  // (2 + |L|) / 2
  CHECK(lr.entries[1].replication == std::vector<int>{1, 3, 1, 1});
  CHECK(lr.entries[2].replication == std::vector<int>{1, 1, 1, 3});
  check_cancellation(lr, {false, true, false, true});

  CHECK_THROWS_AS(liim_fiim_plan(c, {}), ValidationError);
  CHECK_THROWS_AS(liim_fiim_plan(c, {0, 0}), ValidationError);
  CHECK_THROWS_AS(liim_riim_plan(c, {4}), ValidationError);
}

TEST_CASE("set plan partitions contiguously, larger sets first") {
  const Circuit c = generate_cnot_chain(7, "11");
  const auto plan = siim_plan(c, 3);
  REQUIRE(plan.entries.size() == 4);
  CHECK(plan.entries[0].coefficient == q(5, 2));  // (2 + 3) / 2
  CHECK(plan.entries[1].replication ==
        std::vector<int>{3, 3, 3, 1, 1, 1, 1});
  CHECK(plan.entries[2].replication ==
        std::vector<int>{1, 1, 1, 3, 3, 1, 1});
  CHECK(plan.entries[3].replication ==
        std::vector<int>{1, 1, 1, 1, 1, 3, 3});
  check_cancellation(plan, std::vector<bool>(7, true));

  // Auxiliary sizes are n_c + 2 * set size.
  CHECK(plan.entries[1].circuit.n_cnots() == 13);
  CHECK(plan.entries[2].circuit.n_cnots() == 11);

  CHECK_THROWS_AS(siim_plan(c, 0), ValidationError);
  CHECK_THROWS_AS(siim_plan(c, 8), ValidationError);
}

TEST_CASE("degenerate set counts delegate to the simpler builders") {
  const Circuit c = generate_cnot_chain(5, "01");
  check_same_plan(siim_plan(c, 1), fiim_plan(c, 1));
  check_same_plan(siim_plan(c, 5), riim_plan(c));
  check_same_plan(liim_fiim_plan(c, {0, 1, 2, 3, 4}), fiim_plan(c, 1));
  check_same_plan(liim_riim_plan(c, {0, 1, 2, 3, 4}), riim_plan(c));
}

TEST_CASE("method labels are stable") {
  CHECK(method_label(UnmitigatedMethod{}) == "none");
  CHECK(method_label(FiimMethod{2}) == "fiim2");
  CHECK(method_label(RiimMethod{}) == "riim");
  CHECK(method_label(LiimFiimMethod{{0}}) == "liim_fiim");
  CHECK(method_label(LiimRiimMethod{{0}}) == "liim_riim");
  CHECK(method_label(SiimMethod{3}) == "siim3");
}

TEST_CASE("build_plan dispatches on the method descriptor") {
  const Circuit c = generate_cnot_chain(4, "10");
  check_same_plan(build_plan(c, FiimMethod{2}), fiim_plan(c, 2));
  check_same_plan(build_plan(c, RiimMethod{}), riim_plan(c));
  check_same_plan(build_plan(c, SiimMethod{2}), siim_plan(c, 2));
  check_same_plan(build_plan(c, UnmitigatedMethod{}), unmitigated_plan(c));
  const auto bare = build_plan(c, UnmitigatedMethod{});
  REQUIRE(bare.entries.size() == 1);
  CHECK(bare.entries[0].coefficient == Rational(1));
}

TEST_CASE("effective set counts drive shot scaling") {
  CHECK(effective_sets(UnmitigatedMethod{}, 6) == 1);
  CHECK(effective_sets(FiimMethod{3}, 6) == 1);
  CHECK(effective_sets(RiimMethod{}, 6) == 6);
  CHECK(effective_sets(LiimFiimMethod{{0, 2}}, 6) == 1);
  CHECK(effective_sets(LiimRiimMethod{{0, 2}}, 6) == 2);
  CHECK(effective_sets(SiimMethod{3}, 6) == 3);
}
