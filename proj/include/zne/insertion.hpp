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

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "zne/circuit.hpp"
#include "zne/rational.hpp"

namespace zne {

// How a mitigation plan was built.  Unmitigated is the trivial plan that
// runs the bare circuit with coefficient 1.
struct UnmitigatedMethod {};
struct FiimMethod {
  int order = 1;  // extrapolation order; uses fold factors 1, 3, ..., 2k+1
};
struct RiimMethod {};
struct LiimFiimMethod {
  std::vector<std::size_t> list;  // CNOT ordinals eligible for folding
};
struct LiimRiimMethod {
  std::vector<std::size_t> list;
};
struct SiimMethod {
  std::size_t n_sets = 1;
};
using Method = std::variant<UnmitigatedMethod, FiimMethod, RiimMethod,
                            LiimFiimMethod, LiimRiimMethod, SiimMethod>;

// Stable lowercase identifier ("fiim1", "riim", "siim2", ...).
std::string method_label(const Method& method);

// One circuit execution inside a plan.  circuit == fold(base, replication)
// by construction.
struct PlanEntry {
  Circuit circuit;
  Rational coefficient;
  std::string label;
  std::vector<int> replication;
};

struct MitigationPlan {
  Circuit base;
  Method method;
  std::vector<PlanEntry> entries;  // entry 0 is always the nominal circuit
};

// Replaces the k-th CNOT with replication[k] consecutive copies of itself.
// Odd counts keep the circuit's noiseless action unchanged because each
// CNOT squares to the identity.
Circuit fold(const Circuit& circuit, const std::vector<int>& replication);

// Uniform fold of every CNOT by the odd factor k (k = 1 is a copy).
Circuit deepen(const Circuit& circuit, int factor);

// Coefficients c_i for extrapolating measurements taken at distinct odd
// noise scalings r_i back to zero noise: the unique exact solution of
//   sum_i c_i = 1,   sum_i c_i r_i^m = 0  for m = 1 .. len-1.
std::vector<Rational> richardson_coefficients(const std::vector<int>& r_values);

// Fixed-identity plan of the given order: every CNOT folded uniformly by
// 1, 3, ..., 2*order+1 with Richardson coefficients.
MitigationPlan fiim_plan(const Circuit& circuit, int order);

// Random-identity plan: nominal circuit with weight (2 + n_cnot)/2 plus one
// auxiliary per CNOT (that single CNOT tripled) with weight -1/2.
MitigationPlan riim_plan(const Circuit& circuit);

// List-identity variants: only the listed CNOT ordinals are folded.  The
// remaining gates keep whatever noise they have; their first-order terms are
// deliberately left alone.  With the full list these reduce to fiim_plan
// (order 1) and riim_plan respectively, and return exactly those plans.
MitigationPlan liim_fiim_plan(const Circuit& circuit,
                              const std::vector<std::size_t>& list);
MitigationPlan liim_riim_plan(const Circuit& circuit,
                              const std::vector<std::size_t>& list);

// Set-identity plan: the CNOTs are split into n_sets contiguous sets of
// as-equal-as-possible size; each auxiliary triples one whole set.  n_sets=1
// returns fiim_plan(circuit, 1) and n_sets=n_cnot returns riim_plan(circuit).
MitigationPlan siim_plan(const Circuit& circuit, std::size_t n_sets);

// Trivial single-entry plan (coefficient 1); used for unmitigated baselines.
MitigationPlan unmitigated_plan(const Circuit& circuit);

// Dispatches to the builder matching the method descriptor.
MitigationPlan build_plan(const Circuit& circuit, const Method& method);

// Total number of CNOT executions across all entries of the plan.
std::size_t total_cnots(const MitigationPlan& plan);

// Number of independent fold targets the method distinguishes (1 for
// uniform folding, n_cnot for per-gate folding, the set/list size
// otherwise).  Shot allocation scales with this.
std::size_t effective_sets(const Method& method, std::size_t n_cnots);

}  // namespace zne
