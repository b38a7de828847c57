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

#include "zne/estimator.hpp"

#include <cmath>

#include "zne/rng.hpp"

namespace zne {

namespace {


double observable_value(const std::string& bits, const Observable& obs) {
  if (std::holds_alternative<BitValue>(obs)) {
    return static_cast<double>(bitstring_to_index(bits));
  }
  const auto& target = std::get<TargetProbability>(obs);
  if (target.bitstring.size() != bits.size()) {
    throw ValidationError("observable: target bitstring length mismatch");
  }
  return bits == target.bitstring ? 1.0 : 0.0;
}

long long ceil_scaled(long long base, long long num, long long den) {
  // ceil(base * num / den) without floating point.
  const long long prod = base * num;
  return (prod + den - 1) / den;
}

}  // namespace

ShotResult sample(const Circuit& circuit, const NoiseModel& noise,
                  long long shots, std::uint64_t seed) {
  if (shots < 1) {
    throw ValidationError("sample: shot count must be positive");
  }
  const auto probs = probabilities(simulate(circuit, noise));
  rng::Xoshiro256pp gen(seed);
  const auto raw = rng::multinomial(gen, probs, shots);
  ShotResult result{shots, seed, {}};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] > 0) {
      result.counts[index_to_bitstring(i, circuit.n_qubits())] = raw[i];
    }
  }
  return result;
}

Estimate estimate_observable(const ShotResult& result, const Observable& obs) {
  if (result.shots < 1 || result.counts.empty()) {
    throw ValidationError("estimate: empty shot result");
  }
  long long total = 0;
  for (const auto& [bits, count] : result.counts) {
    if (count < 0) throw ValidationError("estimate: negative count");
    total += count;
  }
  if (total != result.shots) {
    throw ValidationError("estimate: counts do not sum to the shot count");
  }
  const double n = static_cast<double>(result.shots);
  double mean = 0.0;
  for (const auto& [bits, count] : result.counts) {
    mean += observable_value(bits, obs) * static_cast<double>(count);
  }
  mean /= n;
  double ss = 0.0;
  for (const auto& [bits, count] : result.counts) {
    const double d = observable_value(bits, obs) - mean;
    ss += d * d * static_cast<double>(count);
  }
  const double sample_var = result.shots > 1 ? ss / (n - 1.0) : 0.0;
  return Estimate{mean, sample_var / n, result.shots};
}

Estimate combine(const MitigationPlan& plan,
                 const std::vector<Estimate>& estimates) {
  if (estimates.size() != plan.entries.size()) {
    throw ValidationError("combine: need one estimate per plan entry");
  }
  Estimate out;
  for (std::size_t p = 0; p < estimates.size(); ++p) {
    const double c = to_double(plan.entries[p].coefficient);
    out.value += c * estimates[p].value;
    out.variance += c * c * estimates[p].variance;
    out.shots_used += estimates[p].shots_used;
  }
  return out;
}

std::vector<long long> allocate_shots(const MitigationPlan& plan,
                                      const ShotBudget& base,
                                      AllocationMode mode) {
  if (base.nominal < 1 || base.per_auxiliary < 0) {
    throw ValidationError("allocate: invalid base budget");
  }
  if (plan.entries.empty()) {
    throw ValidationError("allocate: plan has no entries");
  }
  const auto n_sets = static_cast<long long>(
      effective_sets(plan.method, plan.base.n_cnots()));
  const long long nominal_factor_sq =
      mode == AllocationMode::kSelfConsistent
          ? (2 + n_sets) * (2 + n_sets)
          : (1 + 2 * n_sets) * (1 + 2 * n_sets);
  std::vector<long long> shots(plan.entries.size());
  shots[0] = ceil_scaled(base.nominal, nominal_factor_sq, 9);
  for (std::size_t p = 1; p < shots.size(); ++p) {
    shots[p] = base.per_auxiliary * n_sets;
  }
  return shots;
}

Estimate run_plan(const MitigationPlan& plan, const NoiseModel& noise,
                  const std::vector<long long>& shots_per_entry,
                  std::uint64_t seed, const Observable& obs) {
  if (shots_per_entry.size() != plan.entries.size()) {
    throw ValidationError("run plan: need one shot count per entry");
  }
  std::vector<Estimate> estimates;
  estimates.reserve(plan.entries.size());
  for (std::size_t p = 0; p < plan.entries.size(); ++p) {
    const std::uint64_t stream =
        rng::derive_stream(seed, {rng::kEntryStreamTag, p});
    const auto result =
        sample(plan.entries[p].circuit, noise, shots_per_entry[p], stream);
    estimates.push_back(estimate_observable(result, obs));
  }
  return combine(plan, estimates);
}

Estimate run_plan_exact(const MitigationPlan& plan, const NoiseModel& noise,
                        const Observable& obs) {
  std::vector<Estimate> estimates;
  estimates.reserve(plan.entries.size());
  for (const auto& entry : plan.entries) {
    estimates.push_back(
        Estimate{expectation_exact(entry.circuit, noise, obs), 0.0, 0});
  }
  return combine(plan, estimates);
}

double expectation_exact(const Circuit& circuit, const NoiseModel& noise,
                         const Observable& obs) {
  return expectation(simulate(circuit, noise), obs);
}

}  // namespace zne
