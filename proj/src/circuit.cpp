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

#include "zne/circuit.hpp"

#include <algorithm>

namespace zne {

Circuit::Circuit(std::size_t n_qubits, std::string initial_state)
    : n_qubits_(n_qubits), initial_state_(std::move(initial_state)) {
  if (n_qubits_ == 0) {
    throw ValidationError("circuit: register must contain at least one qubit");
  }
  if (n_qubits_ > kMaxQubits) {
    throw ValidationError("circuit: register exceeds " +
                          std::to_string(kMaxQubits) + " qubits");
  }
  if (initial_state_.size() != n_qubits_) {
    throw ValidationError("circuit: initial state length " +
                          std::to_string(initial_state_.size()) +
                          " does not match register size " +
                          std::to_string(n_qubits_));
  }
  for (char c : initial_state_) {
    if (c != '0' && c != '1') {
      throw ValidationError("circuit: initial state must be a '0'/'1' string");
    }
  }
}

void Circuit::append(const Gate& gate) {
  if (const auto* cx = std::get_if<CnotGate>(&gate)) {
    if (cx->control >= n_qubits_ || cx->target >= n_qubits_) {
      throw ValidationError("circuit: CNOT qubit index out of range");
    }
    if (cx->control == cx->target) {
      throw ValidationError("circuit: CNOT control and target must differ");
    }
  } else {
    const auto& u = std::get<OneQubitGate>(gate);
    if (u.qubit >= n_qubits_) {
      throw ValidationError("circuit: gate qubit index out of range");
    }
    if (!is_unitary(u.matrix)) {
      throw ValidationError("circuit: one-qubit matrix is not unitary");
    }
  }
  gates_.push_back(gate);
}

std::size_t Circuit::n_cnots() const {
  return cnot_positions().size();
}

std::vector<std::size_t> Circuit::cnot_positions() const {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (std::holds_alternative<CnotGate>(gates_[i])) positions.push_back(i);
  }
  return positions;
}

std::pair<QubitId, QubitId> Circuit::cnot_pair(std::size_t cnot_ordinal) const {
  const auto positions = cnot_positions();
  if (cnot_ordinal >= positions.size()) {
    throw ValidationError("circuit: CNOT ordinal out of range");
  }
  const auto& cx = std::get<CnotGate>(gates_[positions[cnot_ordinal]]);
  return {std::min(cx.control, cx.target), std::max(cx.control, cx.target)};
}

Circuit generate_cnot_chain(std::size_t n_cnots,
                            const std::string& initial_state) {
  if (n_cnots == 0) {
    throw ValidationError("chain: need at least one CNOT");
  }
  Circuit c(2, initial_state);
  for (std::size_t i = 0; i < n_cnots; ++i) {
    if (i % 2 == 0) {
      c.append(CnotGate{0, 1});
    } else {
      c.append(CnotGate{1, 0});
    }
  }
  return c;
}

Circuit generate_pair_ladder(std::size_t n_qubits, std::size_t n_cnots,
                             const std::string& initial_state) {
  if (n_qubits < 2) {
    throw ValidationError("ladder: need at least two qubits");
  }
  if (n_cnots == 0) {
    throw ValidationError("ladder: need at least one CNOT");
  }
  Circuit c(n_qubits, initial_state);
  const std::size_t n_pairs = n_qubits - 1;
  for (std::size_t i = 0; i < n_cnots; ++i) {
    const QubitId lo = i % n_pairs;
    c.append(CnotGate{lo, lo + 1});
  }
  return c;
}

std::string ideal_output_bits(const Circuit& circuit) {
  std::string bits = circuit.initial_state();
  for (const auto& gate : circuit.gates()) {
    const auto* cx = std::get_if<CnotGate>(&gate);
    if (cx == nullptr) {
      throw ValidationError(
          "ideal_output_bits: circuit contains a one-qubit unitary");
    }
    if (bits[cx->control] == '1') {
      bits[cx->target] = bits[cx->target] == '1' ? '0' : '1';
    }
  }
  return bits;
}

void validate_replication(const Circuit& circuit,
                          const std::vector<int>& replication) {
  if (replication.size() != circuit.n_cnots()) {
    throw ValidationError("replication: need one entry per CNOT (" +
                          std::to_string(circuit.n_cnots()) + "), got " +
                          std::to_string(replication.size()));
  }
  for (int r : replication) {
    if (r < 1 || r % 2 == 0) {
      throw ValidationError(
          "replication: entries must be odd positive integers");
    }
  }
}

bool is_unitary(const Eigen::Matrix2cd& m, double tol) {
  const Eigen::Matrix2cd delta =
      m * m.adjoint() - Eigen::Matrix2cd::Identity();
  return delta.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace zne
