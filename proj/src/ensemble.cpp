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

#include "zne/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "zne/parallel.hpp"
#include "zne/rng.hpp"

namespace zne {

namespace {


void check_probability_vector(const std::vector<double>& v,
                              const char* what) {
  for (double p : v) {
    if (!(p >= 0.0) || p > 1.0) {
      throw ValidationError(std::string("device profile: ") + what +
                            " outside [0, 1]");
    }
  }
}

void check_positive_vector(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!(x > 0.0)) {
      throw ValidationError(std::string("device profile: ") + what +
                            " must be positive");
    }
  }
}

NoiseModel device_noise(const DeviceProfile& profile, bool include_damping) {
  return noise_model_of(profile, include_damping);
}

std::vector<std::size_t> resolve_assignment(const MitigationPlan& plan,
                                            const DeviceEnsemble& ensemble,
                                            const ParallelStrategy& strategy) {
  const std::size_t n_entries = plan.entries.size();
  const std::size_t n_devices = ensemble.size();
  if (const auto* explicit_map = std::get_if<ExplicitAssignment>(&strategy)) {
    if (explicit_map->device_of_entry.size() != n_entries) {
      throw ValidationError(
          "sharded run: assignment must cover every plan entry exactly once");
    }
    for (std::size_t d : explicit_map->device_of_entry) {
      if (d >= n_devices) {
        throw ValidationError("sharded run: assignment names device " +
                              std::to_string(d) + " outside the ensemble");
      }
    }
    return explicit_map->device_of_entry;
  }
  std::vector<std::size_t> assignment(n_entries);
  for (std::size_t p = 0; p < n_entries; ++p) assignment[p] = p % n_devices;
  return assignment;
}

}  // namespace

void DeviceProfile::validate() const {
  if (name.empty()) {
    throw ValidationError("device profile: name must be non-empty");
  }
  const std::size_t nq = t1_us.size();
  const auto check_len = [&](const std::vector<double>& v, const char* what) {
    if (v.size() != nq) {
      throw ValidationError(std::string("device profile: ") + what +
                            " length does not match qubit count");
    }
  };
  check_len(t2_us, "T2");
  check_len(frequency_ghz, "frequency");
  check_len(p0_given_1, "P(0|1)");
  check_len(p1_given_0, "P(1|0)");
  check_positive_vector(t1_us, "T1");
  check_positive_vector(t2_us, "T2");
  check_positive_vector(frequency_ghz, "frequency");
  check_probability_vector(p0_given_1, "P(0|1)");
  check_probability_vector(p1_given_0, "P(1|0)");
  check_probability_vector(x_error, "X error");
  if (x_length_ns < 0.0) {
    throw ValidationError("device profile: X length must be non-negative");
  }
  for (const auto& [pair, e] : cx_error) {
    if (pair.first >= pair.second) {
      throw ValidationError("device profile: CNOT pair must be ordered");
    }
    if (!(e >= 0.0) || e > 1.0) {
      throw ValidationError("device profile: CNOT error outside [0, 1]");
    }
  }
  for (const auto& [pair, len] : cx_length_ns) {
    (void)pair;
    if (!(len >= 0.0)) {
      throw ValidationError("device profile: CNOT length must be non-negative");
    }
  }
}

void DeviceEnsemble::validate() const {
  if (profiles.empty()) {
    throw ValidationError("ensemble: need at least one device");
  }
  std::set<std::string> names;
  for (const auto& p : profiles) {
    p.validate();
    if (p.retired) {
      throw ValidationError("ensemble: retired device '" + p.name +
                            "' cannot be part of a run");
    }
    if (!names.insert(p.name).second) {
      throw ValidationError("ensemble: duplicate device name '" + p.name +
                            "'");
    }
  }
}

std::vector<DeviceProfile> active_profiles(
    const std::vector<DeviceProfile>& profiles) {
  std::vector<DeviceProfile> out;
  for (const auto& p : profiles) {
    if (!p.retired) out.push_back(p);
  }
  return out;
}

DeviceEnsemble sample_normal_profiles(std::size_t n, double mu, double sigma,
                                      std::uint64_t seed) {
  if (n == 0) {
    throw ValidationError("ensemble: need at least one device");
  }
  if (!(mu > 0.0) || mu > 1.0) {
    throw ValidationError("ensemble: mean error rate must lie in (0, 1]");
  }
  if (sigma < 0.0) {
    throw ValidationError("ensemble: sigma must be non-negative");
  }
  DeviceEnsemble ensemble;
  ensemble.profiles.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    rng::Xoshiro256pp gen(
        rng::derive_stream(seed, {rng::kProfileStreamTag, d}));
    double eps = mu;
    if (sigma > 0.0) {
      do {
        eps = mu + sigma * rng::standard_normal(gen);
      } while (!(eps > 0.0) || eps > 1.0);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "normal-%03zu", d);
    DeviceProfile profile;
    profile.name = name;
    profile.cx_error[{0, 1}] = eps;
    profile.cx_length_ns[{0, 1}] = 0.0;
    ensemble.profiles.push_back(std::move(profile));
  }
  ensemble.validate();
  return ensemble;
}

NoiseModel noise_model_of(const DeviceProfile& profile, bool include_damping) {
  profile.validate();
  if (profile.cx_error.empty()) {
    throw ValidationError("noise model: profile '" + profile.name +
                          "' has no CNOT calibration");
  }
  NoiseModel nm;
  for (const auto& [pair, e] : profile.cx_error) {
    nm.set_pair_epsilon(pair.first, pair.second, e);
  }
  if (include_damping) {
    if (profile.t1_us.empty()) {
      throw ValidationError("noise model: profile '" + profile.name +
                            "' has no T1 data for damping");
    }
    if (profile.cx_length_ns.empty()) {
      throw ValidationError("noise model: profile '" + profile.name +
                            "' has no CNOT durations for damping");
    }
    double mean_len = 0.0;
    for (const auto& [pair, len] : profile.cx_length_ns) {
      (void)pair;
      mean_len += len;
    }
    mean_len /= static_cast<double>(profile.cx_length_ns.size());
    nm.set_damping(DampingSpec{profile.t1_us, mean_len});
  }
  return nm;
}

Estimate run_replicated(const MitigationPlan& plan,
                        const DeviceEnsemble& ensemble,
                        const std::vector<long long>& shots_per_entry,
                        std::uint64_t seed, const Observable& obs,
                        const RunOptions& options) {
  ensemble.validate();
  const std::size_t n = ensemble.size();
  std::vector<Estimate> per_device(n);
  parallel_for(n, options.workers, [&](std::size_t d) {
    const NoiseModel nm =
        device_noise(ensemble.profiles[d], options.include_damping);
    per_device[d] =
        run_plan(plan, nm, shots_per_entry,
                 rng::derive_stream(seed, {rng::kReplicaStreamTag, d}), obs);
  });
  Estimate out;
  for (const auto& est : per_device) {
    out.value += est.value;
    out.variance += est.variance;
    out.shots_used += est.shots_used;
  }
  const double dn = static_cast<double>(n);
  out.value /= dn;
  out.variance = (out.variance / dn) / dn;  // mean variance over n devices
  return out;
}

Estimate run_replicated_exact(const MitigationPlan& plan,
                              const DeviceEnsemble& ensemble,
                              const Observable& obs, bool include_damping) {
  ensemble.validate();
  Estimate out;
  for (const auto& profile : ensemble.profiles) {
    const NoiseModel nm = device_noise(profile, include_damping);
    out.value += run_plan_exact(plan, nm, obs).value;
  }
  out.value /= static_cast<double>(ensemble.size());
  return out;
}

Estimate run_sharded(const MitigationPlan& plan, const DeviceEnsemble& ensemble,
                     const std::vector<long long>& shots_per_entry,
                     const ParallelStrategy& strategy, std::uint64_t seed,
                     const Observable& obs, const RunOptions& options) {
  ensemble.validate();
  if (shots_per_entry.size() != plan.entries.size()) {
    throw ValidationError("sharded run: need one shot count per entry");
  }
  const auto assignment = resolve_assignment(plan, ensemble, strategy);
  std::vector<Estimate> estimates(plan.entries.size());
  parallel_for(plan.entries.size(), options.workers, [&](std::size_t p) {
    const NoiseModel nm = device_noise(ensemble.profiles[assignment[p]],
                                       options.include_damping);
    const auto result =
        sample(plan.entries[p].circuit, nm, shots_per_entry[p],
               rng::derive_stream(seed, {rng::kShardStreamTag, p}));
    estimates[p] = estimate_observable(result, obs);
  });
  return combine(plan, estimates);
}

Estimate run_sharded_exact(const MitigationPlan& plan,
                           const DeviceEnsemble& ensemble,
                           const ParallelStrategy& strategy,
                           const Observable& obs, bool include_damping) {
  ensemble.validate();
  const auto assignment = resolve_assignment(plan, ensemble, strategy);
  std::vector<Estimate> estimates(plan.entries.size());
  for (std::size_t p = 0; p < plan.entries.size(); ++p) {
    const NoiseModel nm =
        device_noise(ensemble.profiles[assignment[p]], include_damping);
    estimates[p] =
        Estimate{expectation_exact(plan.entries[p].circuit, nm, obs), 0.0, 0};
  }
  return combine(plan, estimates);
}

std::vector<Job> batch_jobs(const std::vector<ShotDemand>& demands,
                            const JobLimits& limits) {
  if (limits.max_shots_per_circuit < 1 || limits.max_circuits_per_job < 1) {
    throw ValidationError("batch: limits must be positive");
  }
  std::vector<ShotDemand> items;
  for (const auto& demand : demands) {
    if (demand.shots < 1) {
      throw ValidationError("batch: demands must request at least one shot");
    }
    long long remaining = demand.shots;
    while (remaining > 0) {
      const long long chunk =
          std::min(remaining, limits.max_shots_per_circuit);
      items.push_back(ShotDemand{demand.circuit_index, chunk});
      remaining -= chunk;
    }
  }
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < items.size(); i += limits.max_circuits_per_job) {
    Job job;
    const std::size_t end =
        std::min(items.size(), i + limits.max_circuits_per_job);
    job.items.assign(items.begin() + static_cast<std::ptrdiff_t>(i),
                     items.begin() + static_cast<std::ptrdiff_t>(end));
    jobs.push_back(std::move(job));
  }
  return jobs;
}

double additional_error(const Estimate& ensemble_estimate,
                        const Estimate& single_rate_estimate) {
  return std::abs(ensemble_estimate.value - single_rate_estimate.value);
}

}  // namespace zne
