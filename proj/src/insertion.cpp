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

#include "zne/insertion.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace zne {

namespace {

std::size_t require_cnots(const Circuit& circuit) {
  const std::size_t n = circuit.n_cnots();
  if (n == 0) {
    throw ValidationError("mitigation plan: circuit has no CNOTs");
  }
  return n;
}

std::vector<std::size_t> checked_list(const Circuit& circuit,
                                      const std::vector<std::size_t>& list) {
  const std::size_t n = require_cnots(circuit);
  if (list.empty()) {
    throw ValidationError("mitigation plan: gate list is empty");
  }
  std::set<std::size_t> seen;
  for (std::size_t i : list) {
    if (i >= n) {
      throw ValidationError("mitigation plan: gate list index " +
                            std::to_string(i) + " exceeds CNOT count " +
                            std::to_string(n));
    }
    if (!seen.insert(i).second) {
      throw ValidationError("mitigation plan: gate list has duplicates");
    }
  }
  return {seen.begin(), seen.end()};
}

PlanEntry make_entry(const Circuit& base, std::vector<int> replication,
                     Rational coefficient, std::string label) {
  Circuit folded = fold(base, replication);
  return PlanEntry{std::move(folded), std::move(coefficient),
                   std::move(label), std::move(replication)};
}

}  // namespace

std::string method_label(const Method& method) {
  struct Visitor {
    std::string operator()(const UnmitigatedMethod&) const { return "none"; }
    std::string operator()(const FiimMethod& m) const {
      return "fiim" + std::to_string(m.order);
    }
    std::string operator()(const RiimMethod&) const { return "riim"; }
    std::string operator()(const LiimFiimMethod&) const { return "liim_fiim"; }
    std::string operator()(const LiimRiimMethod&) const { return "liim_riim"; }
    std::string operator()(const SiimMethod& m) const {
      return "siim" + std::to_string(m.n_sets);
    }
  };
  return std::visit(Visitor{}, method);
}

Circuit fold(const Circuit& circuit, const std::vector<int>& replication) {
  validate_replication(circuit, replication);
  Circuit out(circuit.n_qubits(), circuit.initial_state());
  std::size_t ordinal = 0;
  for (const auto& gate : circuit.gates()) {
    if (std::holds_alternative<CnotGate>(gate)) {
      for (int k = 0; k < replication[ordinal]; ++k) out.append(gate);
      ++ordinal;
    } else {
      out.append(gate);
    }
  }
  return out;
}

Circuit deepen(const Circuit& circuit, int factor) {
  require_cnots(circuit);
  return fold(circuit, std::vector<int>(circuit.n_cnots(), factor));
}

std::vector<Rational> richardson_coefficients(
    const std::vector<int>& r_values) {
  if (r_values.empty()) {
    throw ValidationError("richardson: need at least one scaling value");
  }
  for (int r : r_values) {
    if (r < 1 || r % 2 == 0) {
      throw ValidationError("richardson: scalings must be odd positive");
    }
  }
  std::set<int> distinct(r_values.begin(), r_values.end());
  if (distinct.size() != r_values.size()) {
    throw ValidationError("richardson: scalings must be distinct "
                          "(repeated values make the system singular)");
  }
  // The moment conditions form a dual Vandermonde system whose exact
  // solution is the Lagrange basis evaluated at zero:
  //   c_i = prod_{j != i} r_j / (r_j - r_i).
  std::vector<Rational> coeffs;
  coeffs.reserve(r_values.size());
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    Rational c(1);
    for (std::size_t j = 0; j < r_values.size(); ++j) {
      if (j == i) continue;
      // Keep the denominator positive: the backend rejects negative ones.
      const int den = r_values[j] - r_values[i];
      c *= den > 0 ? Rational(r_values[j], den) : Rational(-r_values[j], -den);
    }
    coeffs.push_back(std::move(c));
  }
  return coeffs;
}

MitigationPlan fiim_plan(const Circuit& circuit, int order) {
  const std::size_t n = require_cnots(circuit);
  (void)n;
  if (order < 1) {
    throw ValidationError("fiim: order must be at least 1");
  }
  std::vector<int> r_values(static_cast<std::size_t>(order) + 1);
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    r_values[i] = static_cast<int>(2 * i + 1);
  }
  const auto coeffs = richardson_coefficients(r_values);
  MitigationPlan plan{circuit, FiimMethod{order}, {}};
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    const int r = r_values[i];
    std::vector<int> replication(circuit.n_cnots(), r);
    std::string label =
        r == 1 ? std::string("nominal") : "fold-all-r" + std::to_string(r);
    plan.entries.push_back(make_entry(circuit, std::move(replication),
                                      coeffs[i], std::move(label)));
  }
  return plan;
}

MitigationPlan riim_plan(const Circuit& circuit) {
  const std::size_t n = require_cnots(circuit);
  MitigationPlan plan{circuit, RiimMethod{}, {}};
  plan.entries.push_back(make_entry(circuit, std::vector<int>(n, 1),
                                    Rational(2 + static_cast<long long>(n), 2),
                                    "nominal"));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<int> replication(n, 1);
    replication[k] = 3;
    plan.entries.push_back(make_entry(circuit, std::move(replication),
                                      Rational(-1, 2),
                                      "fold-cnot-" + std::to_string(k)));
  }
  return plan;
}

MitigationPlan liim_fiim_plan(const Circuit& circuit,
                              const std::vector<std::size_t>& list) {
  const auto sorted = checked_list(circuit, list);
  if (sorted.size() == circuit.n_cnots()) return fiim_plan(circuit, 1);
  MitigationPlan plan{circuit, LiimFiimMethod{sorted}, {}};
  const std::size_t n = circuit.n_cnots();
  plan.entries.push_back(make_entry(circuit, std::vector<int>(n, 1),
                                    Rational(3, 2), "nominal"));
  std::vector<int> replication(n, 1);
  for (std::size_t k : sorted) replication[k] = 3;
  plan.entries.push_back(
      make_entry(circuit, std::move(replication), Rational(-1, 2),
                 "fold-list"));
  return plan;
}

MitigationPlan liim_riim_plan(const Circuit& circuit,
                              const std::vector<std::size_t>& list) {
  const auto sorted = checked_list(circuit, list);
  if (sorted.size() == circuit.n_cnots()) return riim_plan(circuit);
  MitigationPlan plan{circuit, LiimRiimMethod{sorted}, {}};
  const std::size_t n = circuit.n_cnots();
  plan.entries.push_back(
      make_entry(circuit, std::vector<int>(n, 1),
                 Rational(2 + static_cast<long long>(sorted.size()), 2),
                 "nominal"));
  for (std::size_t k : sorted) {
    std::vector<int> replication(n, 1);
    replication[k] = 3;
    plan.entries.push_back(make_entry(circuit, std::move(replication),
                                      Rational(-1, 2),
                                      "fold-cnot-" + std::to_string(k)));
  }
  return plan;
}

MitigationPlan siim_plan(const Circuit& circuit, std::size_t n_sets) {
  const std::size_t n = require_cnots(circuit);
  if (n_sets < 1 || n_sets > n) {
    throw ValidationError("siim: set count must lie in [1, n_cnot]");
  }
  if (n_sets == 1) return fiim_plan(circuit, 1);
  if (n_sets == n) return riim_plan(circuit);

  // Contiguous sets in program order, larger sets first so sizes differ by
  // at most one.
  const std::size_t base_size = n / n_sets;
  const std::size_t remainder = n % n_sets;
  MitigationPlan plan{circuit, SiimMethod{n_sets}, {}};
  plan.entries.push_back(
      make_entry(circuit, std::vector<int>(n, 1),
                 Rational(2 + static_cast<long long>(n_sets), 2), "nominal"));
  std::size_t start = 0;
  for (std::size_t s = 0; s < n_sets; ++s) {
    const std::size_t size = base_size + (s < remainder ? 1 : 0);
    std::vector<int> replication(n, 1);
    for (std::size_t k = start; k < start + size; ++k) replication[k] = 3;
    plan.entries.push_back(make_entry(circuit, std::move(replication),
                                      Rational(-1, 2),
                                      "fold-set-" + std::to_string(s)));
    start += size;
  }
  return plan;
}

MitigationPlan unmitigated_plan(const Circuit& circuit) {
  MitigationPlan plan{circuit, UnmitigatedMethod{}, {}};
  plan.entries.push_back(make_entry(
      circuit, std::vector<int>(circuit.n_cnots(), 1), Rational(1), "nominal"));
  return plan;
}

MitigationPlan build_plan(const Circuit& circuit, const Method& method) {
  struct Visitor {
    const Circuit& c;
    MitigationPlan operator()(const UnmitigatedMethod&) const {
      return unmitigated_plan(c);
    }
    MitigationPlan operator()(const FiimMethod& m) const {
      return fiim_plan(c, m.order);
    }
    MitigationPlan operator()(const RiimMethod&) const { return riim_plan(c); }
    MitigationPlan operator()(const LiimFiimMethod& m) const {
      return liim_fiim_plan(c, m.list);
    }
    MitigationPlan operator()(const LiimRiimMethod& m) const {
      return liim_riim_plan(c, m.list);
    }
    MitigationPlan operator()(const SiimMethod& m) const {
      return siim_plan(c, m.n_sets);
    }
  };
  return std::visit(Visitor{circuit}, method);
}

std::size_t total_cnots(const MitigationPlan& plan) {
  std::size_t total = 0;
  for (const auto& entry : plan.entries) total += entry.circuit.n_cnots();
  return total;
}

std::size_t effective_sets(const Method& method, std::size_t n_cnots) {
  struct Visitor {
    std::size_t n;
    std::size_t operator()(const UnmitigatedMethod&) const { return 1; }
    std::size_t operator()(const FiimMethod&) const { return 1; }
    std::size_t operator()(const RiimMethod&) const { return n; }
    std::size_t operator()(const LiimFiimMethod&) const { return 1; }
    std::size_t operator()(const LiimRiimMethod& m) const {
      return m.list.size();
    }
    std::size_t operator()(const SiimMethod& m) const { return m.n_sets; }
  };
  return std::visit(Visitor{n_cnots}, method);
}

}  // namespace zne
