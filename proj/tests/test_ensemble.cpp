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

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "zne/circuit.hpp"
#include "zne/ensemble.hpp"
#include "zne/errors.hpp"
#include "zne/estimator.hpp"
#include "zne/insertion.hpp"
#include "zne/rng.hpp"

using namespace zne;

namespace {

// Minimal profile that passes validation: one qubit pair, full calibration.
DeviceProfile make_valid_profile(const std::string& name) {
  DeviceProfile p;
  p.name = name;
  p.t1_us = {50.0, 60.0};
  p.t2_us = {70.0, 80.0};
  p.frequency_ghz = {5.0, 5.1};
  p.p0_given_1 = {0.02, 0.03};
  p.p1_given_0 = {0.01, 0.015};
  p.x_error = {2e-4, 3e-4};
  p.x_length_ns = 35.0;
  p.cx_error[{0, 1}] = 0.01;
  p.cx_length_ns[{0, 1}] = 300.0;
  return p;
}

// Bare synthetic profile with a single pair rate, like the normal sampler's.
DeviceProfile make_rate_profile(const std::string& name, double eps) {
  DeviceProfile p;
  p.name = name;
  p.cx_error[{0, 1}] = eps;
  p.cx_length_ns[{0, 1}] = 0.0;
  return p;
}

// Closed form for the two-gate alternating chain prepared in |11>, whose
// ideal output is |10> with BitValue 1.  Pair depolarizing noise keeps the
// coherent part with weight (1 - eps) per gate and the fully mixed state
// scores 1.5, so after g gates the expectation is 1.5 - 0.5 (1 - eps)^g.
double chain2_bitvalue(double eps, int gates) {
  return 1.5 - 0.5 * std::pow(1.0 - eps, gates);
}

double fiim1_combo(double e_nominal, double e_folded) {
  return 1.5 * e_nominal - 0.5 * e_folded;
}

}  // namespace

TEST_CASE("profile validation rejects malformed calibration data") {
  CHECK_NOTHROW(make_valid_profile("ok").validate());

  auto p = make_valid_profile("x");
  p.name = "";
  CHECK_THROWS_AS(p.validate(), ValidationError);

  p = make_valid_profile("x");
  p.t2_us.pop_back();
  CHECK_THROWS_AS(p.validate(), ValidationError);

  p = make_valid_profile("x");
  p.t1_us[0] = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);

  p = make_valid_profile("x");
  p.p0_given_1[1] = 1.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);

  p = make_valid_profile("x");
  p.cx_error.clear();
  p.cx_error[{1, 1}] = 0.01;  // pair must be strictly ordered
  CHECK_THROWS_AS(p.validate(), ValidationError);

  p = make_valid_profile("x");
  p.cx_error[{0, 1}] = 1.2;
  CHECK_THROWS_AS(p.validate(), ValidationError);

  p = make_valid_profile("x");
  p.x_length_ns = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);

  p = make_valid_profile("x");
  p.cx_length_ns[{0, 1}] = -5.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("ensemble validation needs unique active profiles") {
  DeviceEnsemble e;
  CHECK_THROWS_AS(e.validate(), ValidationError);

  e.profiles = {make_valid_profile("a"), make_valid_profile("b")};
  CHECK_NOTHROW(e.validate());

  e.profiles[1].name = "a";
  CHECK_THROWS_AS(e.validate(), ValidationError);

  e.profiles[1].name = "b";
  e.profiles[1].retired = true;
  CHECK_THROWS_AS(e.validate(), ValidationError);
}

TEST_CASE("active_profiles drops retired systems and keeps order") {
  std::vector<DeviceProfile> all = {make_valid_profile("a"),
                                    make_valid_profile("b"),
                                    make_valid_profile("c")};
  all[1].retired = true;
  const auto active = active_profiles(all);
  REQUIRE(active.size() == 2);
  CHECK(active[0].name == "a");
  CHECK(active[1].name == "c");
}

TEST_CASE("normal profile sampling is deterministic and in range") {
  SUBCASE("zero spread pins every device to the mean") {
    const auto e = sample_normal_profiles(3, 0.02, 0.0, 99);
    REQUIRE(e.size() == 3);
    CHECK(e.profiles[0].name == "normal-000");
    CHECK(e.profiles[1].name == "normal-001");
    CHECK(e.profiles[2].name == "normal-002");
    for (const auto& p : e.profiles) {
      CHECK(p.cx_error.at({0, 1}) == 0.02);
      CHECK(p.cx_length_ns.at({0, 1}) == 0.0);
    }
  }

  SUBCASE("same arguments reproduce the same rates") {
    const auto a = sample_normal_profiles(4, 0.05, 0.02, 7);
    const auto b = sample_normal_profiles(4, 0.05, 0.02, 7);
    for (std::size_t d = 0; d < 4; ++d) {
      CHECK(a.profiles[d].cx_error.at({0, 1}) ==
            b.profiles[d].cx_error.at({0, 1}));
    }
  }

  SUBCASE("device d does not depend on the ensemble size") {
    const auto small = sample_normal_profiles(3, 0.05, 0.02, 7);
    const auto large = sample_normal_profiles(8, 0.05, 0.02, 7);
    for (std::size_t d = 0; d < 3; ++d) {
      CHECK(small.profiles[d].cx_error.at({0, 1}) ==
            large.profiles[d].cx_error.at({0, 1}));
    }
  }

  SUBCASE("different seeds give different rates") {
    const auto a = sample_normal_profiles(1, 0.05, 0.02, 7);
    const auto b = sample_normal_profiles(1, 0.05, 0.02, 8);
    CHECK(a.profiles[0].cx_error.at({0, 1}) !=
          b.profiles[0].cx_error.at({0, 1}));
  }

  SUBCASE("wide distributions are clipped into (0, 1] by redrawing") {
    const auto e = sample_normal_profiles(200, 0.5, 2.0, 11);
    for (const auto& p : e.profiles) {
      const double eps = p.cx_error.at({0, 1});
      CHECK(eps > 0.0);
      CHECK(eps <= 1.0);
    }
  }

  SUBCASE("sample mean matches the requested mean") {
    // mu / sigma = 5, so the redraw rule trims < 1e-6 of the mass and the
    // sample mean should sit within 5 standard errors of mu.
    const std::size_t n = 10000;
    const auto e = sample_normal_profiles(n, 0.05, 0.01, 21);
    double total = 0.0;
    for (const auto& p : e.profiles) total += p.cx_error.at({0, 1});
    const double mean = total / static_cast<double>(n);
    const double se = 0.01 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mean - 0.05) < 5.0 * se);
  }

  SUBCASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(sample_normal_profiles(0, 0.05, 0.01, 1), ValidationError);
    CHECK_THROWS_AS(sample_normal_profiles(2, 0.0, 0.01, 1), ValidationError);
    CHECK_THROWS_AS(sample_normal_profiles(2, -0.1, 0.01, 1), ValidationError);
    CHECK_THROWS_AS(sample_normal_profiles(2, 1.5, 0.01, 1), ValidationError);
    CHECK_THROWS_AS(sample_normal_profiles(2, 0.05, -1.0, 1), ValidationError);
  }
}

TEST_CASE("noise_model_of maps calibration onto pair strengths") {
  auto p = make_valid_profile("dev");
  p.cx_error[{1, 2}] = 0.03;
  p.cx_length_ns[{1, 2}] = 500.0;
  // validate() requires matching per-qubit lengths only, so extra pairs on
  // qubits beyond the calibrated ones are fine for this synthetic check.

  SUBCASE("pair strengths are unordered lookups") {
    const NoiseModel nm = noise_model_of(p, false);
    CHECK(nm.epsilon_for(0, 1) == 0.01);
    CHECK(nm.epsilon_for(1, 0) == 0.01);
    CHECK(nm.epsilon_for(1, 2) == 0.03);
    CHECK_THROWS_AS(nm.epsilon_for(0, 2), ValidationError);
    CHECK_FALSE(nm.has_damping());
  }

  SUBCASE("damping uses the mean CNOT duration") {
    const NoiseModel nm = noise_model_of(p, true);
    REQUIRE(nm.has_damping());
    // Durations 300 and 500 average to 400; qubit 0 has T1 = 50 us.
    const double expected = 1.0 - std::exp(-400.0 * 1e-3 / 50.0);
    CHECK(nm.gamma_for(0) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("profiles without calibration cannot build a model") {
    auto bare = make_valid_profile("bare");
    bare.cx_error.clear();
    bare.cx_length_ns.clear();
    CHECK_THROWS_AS(noise_model_of(bare, false), ValidationError);

    auto no_t1 = make_rate_profile("no-t1", 0.01);
    CHECK_NOTHROW(noise_model_of(no_t1, false));
    CHECK_THROWS_AS(noise_model_of(no_t1, true), ValidationError);
  }
}

TEST_CASE("replicated run on one device equals a plain plan run") {
  const Circuit base = generate_cnot_chain(4, "10");
  const auto plan = fiim_plan(base, 1);
  const std::vector<long long> shots(plan.entries.size(), 2048);
  const std::uint64_t seed = 31;

  DeviceEnsemble single;
  single.profiles = {make_rate_profile("solo", 0.04)};

  const Estimate ens =
      run_replicated(plan, single, shots, seed, BitValue{});
  const Estimate direct =
      run_plan(plan, NoiseModel::uniform_depolarizing(0.04), shots,
               rng::derive_stream(seed, {rng::kReplicaStreamTag, 0}),
               BitValue{});
  CHECK(ens.value == direct.value);
  CHECK(ens.variance == direct.variance);
  CHECK(ens.shots_used == direct.shots_used);
}

TEST_CASE("replicated run averages per-device estimates") {
  const Circuit base = generate_cnot_chain(2, "11");
  const auto plan = fiim_plan(base, 1);
  const std::vector<long long> shots(plan.entries.size(), 1024);
  const std::uint64_t seed = 77;
  const auto ensemble = sample_normal_profiles(3, 0.05, 0.02, 5);

  std::vector<Estimate> per_device;
  for (std::size_t d = 0; d < ensemble.size(); ++d) {
    const NoiseModel nm = noise_model_of(ensemble.profiles[d], false);
    per_device.push_back(
        run_plan(plan, nm, shots,
                 rng::derive_stream(seed, {rng::kReplicaStreamTag, d}),
                 BitValue{}));
  }
  double mean = 0.0;
  double mean_var = 0.0;
  long long total_shots = 0;
  for (const auto& est : per_device) {
    mean += est.value;
    mean_var += est.variance;
    total_shots += est.shots_used;
  }
  mean /= 3.0;
  mean_var /= 3.0;

  const Estimate ens =
      run_replicated(plan, ensemble, shots, seed, BitValue{});
  CHECK(ens.value == doctest::Approx(mean).epsilon(1e-15));
  // Averaging three independent estimates divides the variance by three.
  CHECK(ens.variance == doctest::Approx(mean_var / 3.0).epsilon(1e-15));
  CHECK(ens.shots_used == total_shots);

  SUBCASE("worker count does not change the result") {
    RunOptions four_workers;
    four_workers.workers = 4;
    RunOptions all_cores;
    all_cores.workers = 0;
    const Estimate par4 =
        run_replicated(plan, ensemble, shots, seed, BitValue{}, four_workers);
    const Estimate par0 =
        run_replicated(plan, ensemble, shots, seed, BitValue{}, all_cores);
    CHECK(par4.value == ens.value);
    CHECK(par4.variance == ens.variance);
    CHECK(par0.value == ens.value);
  }
}

TEST_CASE("replicated variance tracks the observed spread over seeds") {
  const Circuit base = generate_cnot_chain(2, "11");
  const auto plan = fiim_plan(base, 1);
  const std::vector<long long> shots(plan.entries.size(), 256);
  const auto ensemble = sample_normal_profiles(4, 0.05, 0.0, 5);

  const int n_seeds = 600;
  std::vector<double> values;
  double predicted = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    const Estimate est = run_replicated(plan, ensemble, shots,
                                        1000 + static_cast<std::uint64_t>(s),
                                        BitValue{});
    values.push_back(est.value);
    predicted += est.variance;
  }
  predicted /= n_seeds;

  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / n_seeds;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double empirical = ss / (n_seeds - 1);

  // The sample variance of 600 draws has a relative spread of about
  // sqrt(2/599) ~ 6%, so a 20% band is a three-sigma check.
  CHECK(empirical == doctest::Approx(predicted).epsilon(0.20));
}

TEST_CASE("exact replicated run averages per-device combinations") {
  const Circuit base = generate_cnot_chain(2, "11");
  const auto plan = fiim_plan(base, 1);

  DeviceEnsemble pairle;
  pairle.profiles = {make_rate_profile("lo", 0.01),
                     make_rate_profile("hi", 0.03)};
  const Estimate ens = run_replicated_exact(plan, pairle, BitValue{});

  const double lo = fiim1_combo(chain2_bitvalue(0.01, 2),
                                chain2_bitvalue(0.01, 6));
  const double hi = fiim1_combo(chain2_bitvalue(0.03, 2),
                                chain2_bitvalue(0.03, 6));
  CHECK(ens.value == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));

  // A single-profile ensemble reduces to the plain exact combination.
  DeviceEnsemble single;
  single.profiles = {make_rate_profile("solo", 0.01)};
  const Estimate one = run_replicated_exact(plan, single, BitValue{});
  const Estimate direct = run_plan_exact(
      plan, NoiseModel::uniform_depolarizing(0.01), BitValue{});
  CHECK(one.value == doctest::Approx(direct.value).epsilon(1e-15));

  // The spread penalty is just the distance between the two estimates.
  CHECK(additional_error(ens, direct) ==
        doctest::Approx(std::abs(ens.value - direct.value)).epsilon(1e-15));
}

TEST_CASE("sharded run places entries round robin across devices") {
  const Circuit base = generate_cnot_chain(4, "10");
  const auto plan = riim_plan(base);
  REQUIRE(plan.entries.size() == 5);
  const std::vector<long long> shots(plan.entries.size(), 512);
  const std::uint64_t seed = 13;
  const auto ensemble = sample_normal_profiles(2, 0.05, 0.02, 5);

  std::vector<Estimate> per_entry;
  for (std::size_t p = 0; p < plan.entries.size(); ++p) {
    const NoiseModel nm =
        noise_model_of(ensemble.profiles[p % 2], false);
    const auto result =
        sample(plan.entries[p].circuit, nm, shots[p],
               rng::derive_stream(seed, {rng::kShardStreamTag, p}));
    per_entry.push_back(estimate_observable(result, BitValue{}));
  }
  const Estimate expected = combine(plan, per_entry);

  const Estimate got =
      run_sharded(plan, ensemble, shots, RoundRobin{}, seed, BitValue{});
  CHECK(got.value == expected.value);
  CHECK(got.variance == expected.variance);
  CHECK(got.shots_used == expected.shots_used);

  SUBCASE("explicit placement overrides the rotation") {
    ExplicitAssignment all_first;
    all_first.device_of_entry = {0, 0, 0, 0, 0};
    const Estimate pinned = run_sharded(plan, ensemble, shots, all_first,
                                        seed, BitValue{});
    // Same shard streams, different noise on entries 1 and 3.
    CHECK(pinned.value != got.value);
  }

  SUBCASE("malformed placements are rejected") {
    ExplicitAssignment wrong_size;
    wrong_size.device_of_entry = {0, 1};
    CHECK_THROWS_AS(run_sharded(plan, ensemble, shots, wrong_size, seed,
                                BitValue{}),
                    ValidationError);
    ExplicitAssignment out_of_range;
    out_of_range.device_of_entry = {0, 1, 0, 1, 2};
    CHECK_THROWS_AS(run_sharded(plan, ensemble, shots, out_of_range, seed,
                                BitValue{}),
                    ValidationError);
    CHECK_THROWS_AS(run_sharded(plan, ensemble, {512, 512}, RoundRobin{},
                                seed, BitValue{}),
                    ValidationError);
  }
}

TEST_CASE("exact sharded run mixes rates across the combination") {
  const Circuit base = generate_cnot_chain(2, "11");
  const auto plan = fiim_plan(base, 1);
  DeviceEnsemble pairle;
  pairle.profiles = {make_rate_profile("lo", 0.02),
                     make_rate_profile("hi", 0.05)};

  // Nominal entry lands on device 0, the folded entry on device 1.
  const Estimate mixed = run_sharded_exact(plan, pairle, RoundRobin{},
                                           BitValue{});
  const double expected = fiim1_combo(chain2_bitvalue(0.02, 2),
                                      chain2_bitvalue(0.05, 6));
  CHECK(mixed.value == doctest::Approx(expected).epsilon(1e-12));

  ExplicitAssignment swap;
  swap.device_of_entry = {1, 0};
  const Estimate swapped = run_sharded_exact(plan, pairle, swap, BitValue{});
  const double expected_swapped = fiim1_combo(chain2_bitvalue(0.05, 2),
                                              chain2_bitvalue(0.02, 6));
  CHECK(swapped.value == doctest::Approx(expected_swapped).epsilon(1e-12));
}

TEST_CASE("batching splits demands and packs jobs in order") {
  SUBCASE("a demand under both limits stays one job") {
    const auto jobs =
        batch_jobs({{0, 8192}}, JobLimits{8192, 75});
    REQUIRE(jobs.size() == 1);
    REQUIRE(jobs[0].items.size() == 1);
    CHECK(jobs[0].items[0].circuit_index == 0);
    CHECK(jobs[0].items[0].shots == 8192);
  }

  SUBCASE("oversized demands split with the remainder last") {
    const auto jobs =
        batch_jobs({{3, 20000}}, JobLimits{8192, 75});
    REQUIRE(jobs.size() == 1);
    REQUIRE(jobs[0].items.size() == 3);
    CHECK(jobs[0].items[0].shots == 8192);
    CHECK(jobs[0].items[1].shots == 8192);
    CHECK(jobs[0].items[2].shots == 3616);
    for (const auto& item : jobs[0].items) CHECK(item.circuit_index == 3);
  }

  SUBCASE("many small demands fill jobs up to the circuit limit") {
    std::vector<ShotDemand> demands;
    for (std::size_t i = 0; i < 150; ++i) demands.push_back({i, 1000});
    const auto jobs = batch_jobs(demands, JobLimits{8192, 75});
    REQUIRE(jobs.size() == 2);
    CHECK(jobs[0].items.size() == 75);
    CHECK(jobs[1].items.size() == 75);
    CHECK(jobs[0].items[74].circuit_index == 74);
    CHECK(jobs[1].items[0].circuit_index == 75);
  }

  SUBCASE("random demands keep totals, order, and limits") {
    rng::Xoshiro256pp gen(rng::derive_stream(4242, {1}));
    std::vector<ShotDemand> demands;
    for (std::size_t i = 0; i < 20; ++i) {
      demands.push_back(
          ShotDemand{i, 1 + static_cast<long long>(gen() % 30000)});
    }
    const JobLimits limits{7000, 4};
    const auto jobs = batch_jobs(demands, limits);

    std::vector<ShotDemand> flat;
    for (const auto& job : jobs) {
      CHECK(job.items.size() <= limits.max_circuits_per_job);
      CHECK(!job.items.empty());
      for (const auto& item : job.items) {
        CHECK(item.shots >= 1);
        CHECK(item.shots <= limits.max_shots_per_circuit);
        flat.push_back(item);
      }
    }

    // Walking the flattened chunks must replay the demands in order.
    std::size_t cursor = 0;
    for (const auto& demand : demands) {
      long long remaining = demand.shots;
      while (remaining > 0) {
        REQUIRE(cursor < flat.size());
        CHECK(flat[cursor].circuit_index == demand.circuit_index);
        const long long expected_chunk =
            std::min(remaining, limits.max_shots_per_circuit);
        CHECK(flat[cursor].shots == expected_chunk);
        remaining -= expected_chunk;
        ++cursor;
      }
    }
    CHECK(cursor == flat.size());
  }

  SUBCASE("degenerate limits and demands are rejected") {
    CHECK_THROWS_AS(batch_jobs({{0, 100}}, JobLimits{0, 5}), ValidationError);
    CHECK_THROWS_AS(batch_jobs({{0, 100}}, JobLimits{100, 0}),
                    ValidationError);
    CHECK_THROWS_AS(batch_jobs({{0, 0}}, JobLimits{100, 5}), ValidationError);
  }
}
