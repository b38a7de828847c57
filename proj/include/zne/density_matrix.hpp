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
#include <string>
#include <variant>
#include <vector>

#include "zne/circuit.hpp"
#include "zne/noise.hpp"

namespace zne {

// Dense 2^n x 2^n density matrix.  Basis index i encodes qubit q as bit
// (i >> q) & 1, matching the bitstring convention in circuit.hpp.
class DensityMatrix {
 public:
  DensityMatrix(std::size_t n_qubits, Eigen::MatrixXcd matrix);

  static DensityMatrix from_bitstring(std::size_t n_qubits,
                                      const std::string& bits);

  std::size_t n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::MatrixXcd& matrix() { return matrix_; }

  // Throws IntegrityError when the trace has drifted from 1 or hermiticity
  // is lost beyond the given tolerances.
  void check_integrity(double trace_tol = 1e-10,
                       double herm_tol = 1e-12) const;

  // Smallest eigenvalue (the matrix is assumed hermitian).
  double min_eigenvalue() const;

 private:
  std::size_t n_qubits_;
  Eigen::MatrixXcd matrix_;
};

// Measured quantity.  BitValue reads the final bitstring as an integer
// (qubit 0 least significant); TargetProbability is the population of one
// computational basis state.
struct BitValue {};
struct TargetProbability {
  std::string bitstring;
};
using Observable = std::variant<BitValue, TargetProbability>;

std::size_t bitstring_to_index(const std::string& bits);
std::string index_to_bitstring(std::size_t index, std::size_t n_qubits);

// Unitary conjugation by a single gate, no noise.
DensityMatrix apply_gate_ideal(const DensityMatrix& rho, const Gate& gate);

// Two-qubit depolarizing channel on the unordered pair (a, b):
// rho -> (1 - eps) rho + eps * Tr_ab(rho) (x) I/4.
DensityMatrix apply_depolarizing_2q(const DensityMatrix& rho, std::size_t a,
                                    std::size_t b, double epsilon);

// Amplitude damping of strength gamma on one qubit.
DensityMatrix apply_amplitude_damping(const DensityMatrix& rho, std::size_t q,
                                      double gamma);

// Runs the circuit from its initial basis state.  After every CNOT the
// depolarizing channel acts on that CNOT's pair; if the model carries a
// damping spec, every qubit then relaxes for one CNOT duration.  One-qubit
// gates are ideal.
DensityMatrix simulate(const Circuit& circuit, const NoiseModel& noise);

double expectation(const DensityMatrix& rho, const Observable& obs);

// Diagonal of rho as a probability vector: entries clamped to [0, 1]
// (tolerance 1e-10 for rounding), renormalized to sum exactly 1.
// Throws IntegrityError when the diagonal sum is off by more than 1e-8 or an
// entry is negative beyond tolerance.
std::vector<double> probabilities(const DensityMatrix& rho);

// First-order (in the depolarizing strengths) prediction of the expectation
// after folding: each CNOT ordinal i is executed r[i] times, so
//   E = (1 - sum_i eps_i r_i) E_ideal + sum_i eps_i r_i E[rho_i]
// where rho_i is the noiseless run with the i-th CNOT's pair replaced by the
// maximally mixed state at that point.  Damping is outside this expansion
// and is ignored here.
double leading_order_expectation(const Circuit& circuit,
                                 const NoiseModel& noise,
                                 const std::vector<int>& replication,
                                 const Observable& obs);

}  // namespace zne
