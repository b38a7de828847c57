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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zne/density_matrix.hpp"
#include "zne/insertion.hpp"

namespace zne {

// Counted measurement outcomes of one circuit execution.
struct ShotResult {
  long long shots = 0;
  std::uint64_t seed = 0;
  std::map<std::string, long long> counts;  // bitstring -> occurrences
};

// Monte-Carlo estimate of an observable.  variance refers to the estimator
// (i.e. of the mean), not the per-shot spread.
struct Estimate {
  double value = 0.0;
  double variance = 0.0;
  long long shots_used = 0;
};

struct ShotBudget {
  long long nominal = 0;
  long long per_auxiliary = 0;
};

enum class AllocationMode {
  // Scales the nominal budget by ((2 + n_sets)/3)^2 so the extrapolated
  // variance matches the uniform-fold baseline at equal auxiliary cost.
  kSelfConsistent,
  // Scales the nominal budget by (1 + 2 n_sets)^2 / 9 instead.
  kPaperTable,
};

// Simulates the circuit under the noise model and draws `shots` outcomes
// from the exact distribution.  Identical (circuit, noise, shots, seed)
// yield identical counts.
ShotResult sample(const Circuit& circuit, const NoiseModel& noise,
                  long long shots, std::uint64_t seed);

// Sample mean of the observable over the counts; variance is the unbiased
// sample variance divided by the shot count (0 when shots == 1).
Estimate estimate_observable(const ShotResult& result, const Observable& obs);

// Weighted sum of per-entry estimates with the plan's coefficients.
// Entries are independent, so variances combine as sum c_p^2 var_p.
Estimate combine(const MitigationPlan& plan,
                 const std::vector<Estimate>& estimates);

// Per-entry shot counts (aligned with plan.entries).  The nominal entry is
// scaled by the mode's factor; every auxiliary receives
// base.per_auxiliary * n_sets.  Fractions round up.
std::vector<long long> allocate_shots(const MitigationPlan& plan,
                                      const ShotBudget& base,
                                      AllocationMode mode);

// Samples every entry with its own seed stream derived from (seed, entry
// index) and combines.  Entry results do not depend on evaluation order.
Estimate run_plan(const MitigationPlan& plan, const NoiseModel& noise,
                  const std::vector<long long>& shots_per_entry,
                  std::uint64_t seed, const Observable& obs);

// Infinite-shot limit: exact expectations combined with the plan
// coefficients (variance 0, shots 0).
Estimate run_plan_exact(const MitigationPlan& plan, const NoiseModel& noise,
                        const Observable& obs);

// Exact expectation of one circuit under the noise model.
double expectation_exact(const Circuit& circuit, const NoiseModel& noise,
                         const Observable& obs);

}  // namespace zne
