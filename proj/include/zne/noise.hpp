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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <optional>
#include <utility>
#include <vector>

#include "zne/errors.hpp"

namespace zne {

// Relaxation applied to every qubit for the duration of each CNOT.
// t1_us holds either one entry (uniform T1) or one entry per qubit.
struct DampingSpec {
  std::vector<double> t1_us;
  double cnot_duration_ns = 0.0;
};

// Noise attached to a circuit execution.  Each CNOT is followed by two-qubit
// depolarizing noise on its own pair with strength looked up here; one-qubit
// gates are noiseless and instantaneous.
class NoiseModel {
 public:
  NoiseModel() = default;

  static NoiseModel noiseless() { return uniform_depolarizing(0.0); }

  // Same depolarizing strength for every CNOT pair.
  static NoiseModel uniform_depolarizing(double epsilon) {
    NoiseModel nm;
    nm.set_default_epsilon(epsilon);
    return nm;
  }

  // The pair is unordered: (j, k) and (k, j) share one strength.
  void set_pair_epsilon(std::size_t a, std::size_t b, double epsilon) {
    check_epsilon(epsilon);
    if (a == b) throw ValidationError("noise model: pair qubits must differ");
    depolarizing_[normalized(a, b)] = epsilon;
  }

  void set_default_epsilon(double epsilon) {
    check_epsilon(epsilon);
    default_epsilon_ = epsilon;
  }

  void set_damping(DampingSpec spec) {
    if (spec.t1_us.empty()) {
      throw ValidationError("noise model: damping needs at least one T1");
    }
    for (double t1 : spec.t1_us) {
      if (!(t1 > 0.0)) {
        throw ValidationError("noise model: T1 must be positive");
      }
    }
    if (spec.cnot_duration_ns < 0.0) {
      throw ValidationError("noise model: CNOT duration must be non-negative");
    }
    damping_ = std::move(spec);
  }

  double epsilon_for(std::size_t a, std::size_t b) const {
    const auto it = depolarizing_.find(normalized(a, b));
    if (it != depolarizing_.end()) return it->second;
    if (default_epsilon_) return *default_epsilon_;
    throw ValidationError("noise model: no depolarizing strength for pair (" +
                          std::to_string(a) + ", " + std::to_string(b) +
                          ") and no default");
  }

  bool has_damping() const { return damping_.has_value(); }

  // Decay probability for one CNOT slot on qubit q: 1 - exp(-t / T1).
  double gamma_for(std::size_t q) const {
    if (!damping_) return 0.0;
    const auto& d = *damping_;
    const double t1 =
        d.t1_us.size() == 1 ? d.t1_us[0] : t1_at(d.t1_us, q);
    const double duration_us = d.cnot_duration_ns * 1e-3;
    return 1.0 - std::exp(-duration_us / t1);
  }

  const std::map<std::pair<std::size_t, std::size_t>, double>& depolarizing()
      const {
    return depolarizing_;
  }
  std::optional<double> default_epsilon() const { return default_epsilon_; }
  const std::optional<DampingSpec>& damping() const { return damping_; }

 private:
  static void check_epsilon(double epsilon) {
    if (!(epsilon >= 0.0) || !(epsilon <= 1.0)) {
      throw ValidationError("noise model: epsilon must lie in [0, 1]");
    }
  }

  static double t1_at(const std::vector<double>& t1, std::size_t q) {
    if (q >= t1.size()) {
      throw ValidationError("noise model: no T1 for qubit " +
                            std::to_string(q));
    }
    return t1[q];
  }

  static std::pair<std::size_t, std::size_t> normalized(std::size_t a,
                                                        std::size_t b) {
    return {std::min(a, b), std::max(a, b)};
  }

  std::map<std::pair<std::size_t, std::size_t>, double> depolarizing_;
  std::optional<double> default_epsilon_;
  std::optional<DampingSpec> damping_;
};

}  // namespace zne
