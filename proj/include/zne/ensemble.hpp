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
#include <variant>
#include <vector>

#include "zne/estimator.hpp"

namespace zne {

// Calibration snapshot of one backend.  Per-qubit vectors share indexing;
// two-qubit entries are keyed by the unordered pair.  Synthetic profiles may
// leave everything but cx_error empty.
struct DeviceProfile {
  std::string name;
  bool retired = false;
  std::vector<double> t1_us;
  std::vector<double> t2_us;
  std::vector<double> frequency_ghz;
  std::vector<double> p0_given_1;  // readout: P(read 0 | prepared 1)
  std::vector<double> p1_given_0;
  std::vector<double> x_error;
  double x_length_ns = 0.0;
  std::map<std::pair<std::size_t, std::size_t>, double> cx_error;
  std::map<std::pair<std::size_t, std::size_t>, double> cx_length_ns;

  // Throws ValidationError on out-of-range probabilities, non-positive
  // times, or mismatched per-qubit vector lengths.
  void validate() const;
};

struct DeviceEnsemble {
  std::vector<DeviceProfile> profiles;

  // Non-empty, unique names, no retired entries, every profile valid.
  void validate() const;
  std::size_t size() const { return profiles.size(); }
};

// Drops retired profiles; used when building an ensemble from a dataset.
std::vector<DeviceProfile> active_profiles(
    const std::vector<DeviceProfile>& profiles);

// n single-pair profiles named "normal-000", "normal-001", ... whose pair
// (0,1) error is drawn from N(mu, sigma^2), redrawing any value outside
// (0, 1].  sigma == 0 yields exactly mu.  Draws are keyed per profile index,
// so profile d is the same for any n >= d.
DeviceEnsemble sample_normal_profiles(std::size_t n, double mu, double sigma,
                                      std::uint64_t seed);

// Reads a profile dataset from a JSON file (see json_io.hpp for the
// format).  Returns every system in the file, including retired markers.
std::vector<DeviceProfile> load_device_profiles(const std::string& path);

// Depolarizing strengths from the profile's CNOT errors.  When
// include_damping is set, T1 relaxation is attached with the mean CNOT
// duration (requires per-qubit T1 data).
NoiseModel noise_model_of(const DeviceProfile& profile, bool include_damping);

// Entry placement for sharded runs.
struct RoundRobin {};
struct ExplicitAssignment {
  std::vector<std::size_t> device_of_entry;  // one device per plan entry
};
using ParallelStrategy = std::variant<RoundRobin, ExplicitAssignment>;

struct RunOptions {
  bool include_damping = false;
  unsigned workers = 1;
};

// Runs the full plan on every device and averages the per-device mitigated
// estimates.  Reported variance is the mean per-device variance divided by
// the ensemble size.
Estimate run_replicated(const MitigationPlan& plan,
                        const DeviceEnsemble& ensemble,
                        const std::vector<long long>& shots_per_entry,
                        std::uint64_t seed, const Observable& obs,
                        const RunOptions& options = {});

// Infinite-shot replicated run: mean of per-device exact combinations.
Estimate run_replicated_exact(const MitigationPlan& plan,
                              const DeviceEnsemble& ensemble,
                              const Observable& obs,
                              bool include_damping = false);

// Places each plan entry on one device (round robin or explicit) and
// combines the per-entry estimates once.  Devices may serve several entries
// when the plan is larger than the ensemble.
Estimate run_sharded(const MitigationPlan& plan, const DeviceEnsemble& ensemble,
                     const std::vector<long long>& shots_per_entry,
                     const ParallelStrategy& strategy, std::uint64_t seed,
                     const Observable& obs, const RunOptions& options = {});

Estimate run_sharded_exact(const MitigationPlan& plan,
                           const DeviceEnsemble& ensemble,
                           const ParallelStrategy& strategy,
                           const Observable& obs,
                           bool include_damping = false);

// Submission constraints of a batching backend.
struct JobLimits {
  long long max_shots_per_circuit = 0;
  std::size_t max_circuits_per_job = 0;
};

struct ShotDemand {
  std::size_t circuit_index = 0;
  long long shots = 0;
};

struct Job {
  std::vector<ShotDemand> items;
};

// Splits each demand into chunks of at most max_shots_per_circuit (order
// preserved, last chunk carries the remainder) and packs the chunks into
// jobs of at most max_circuits_per_job items.
std::vector<Job> batch_jobs(const std::vector<ShotDemand>& demands,
                            const JobLimits& limits);

// Distance between an ensemble estimate and the matching single-rate
// estimate; the price paid for rate spread across devices.
double additional_error(const Estimate& ensemble_estimate,
                        const Estimate& single_rate_estimate);

}  // namespace zne
