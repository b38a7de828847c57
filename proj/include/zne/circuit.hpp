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

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "zne/errors.hpp"

namespace zne {

// Qubit indices are positions in the register.  Bitstrings are written with
// qubit 0 first, and qubit 0 is the least significant bit of any integer
// encoding, so bitstring "10" denotes basis index 1.
using QubitId = std::size_t;

// Simulated registers are dense 2^n x 2^n matrices; ten qubits is the
// largest register that stays comfortably in memory.
inline constexpr std::size_t kMaxQubits = 10;

struct CnotGate {
  QubitId control;
  QubitId target;
};

// Arbitrary single-qubit unitary.  These are treated as instantaneous and
// noise-free by the simulator; only CNOTs carry noise.
struct OneQubitGate {
  QubitId qubit;
  Eigen::Matrix2cd matrix;
};

using Gate = std::variant<CnotGate, OneQubitGate>;

class Circuit {
 public:
  // initial_state must be a '0'/'1' string of length n_qubits.
  Circuit(std::size_t n_qubits, std::string initial_state);

  // Validates the gate against the register before appending:
  // indices in range, control != target, unitary to within 1e-12.
  void append(const Gate& gate);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::string& initial_state() const { return initial_state_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t n_cnots() const;

  // Gate-list indices of the CNOTs, in program order.
  std::vector<std::size_t> cnot_positions() const;

  // The unordered qubit pair of the k-th CNOT (k counts CNOTs only).
  std::pair<QubitId, QubitId> cnot_pair(std::size_t cnot_ordinal) const;

 private:
  std::size_t n_qubits_;
  std::string initial_state_;
  std::vector<Gate> gates_;
};

// Two-qubit chain of n_cnots CNOTs with alternating orientation:
// CNOT(0,1), CNOT(1,0), CNOT(0,1), ...  Computational-basis inputs stay
// classical; three alternating pairs compose to the identity, so the
// noiseless output is periodic in the gate count with period 6.
Circuit generate_cnot_chain(std::size_t n_cnots, const std::string& initial_state);

// CNOTs cycling over the nearest-neighbour pairs (0,1), (1,2), ...,
// (n-2, n-1) with the lower index as control.  With three qubits this is the
// alternating-pair ladder used in the multi-qubit studies.
Circuit generate_pair_ladder(std::size_t n_qubits, std::size_t n_cnots,
                             const std::string& initial_state);

// Noiseless output bitstring of a CNOT-only circuit, obtained by classical
// bit propagation (no matrices involved).  Throws if the circuit contains a
// one-qubit unitary.
std::string ideal_output_bits(const Circuit& circuit);

// A replication vector assigns each CNOT ordinal an odd execution count
// (1 = run once, 3 = add one inverse-plus-repeat pair, ...).  Throws unless
// it has one odd positive entry per CNOT.
void validate_replication(const Circuit& circuit,
                          const std::vector<int>& replication);

// True when the matrix is unitary to within tol (max elementwise deviation
// of U U-dagger from the identity).
bool is_unitary(const Eigen::Matrix2cd& m, double tol = 1e-12);

}  // namespace zne
