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

#include "zne/density_matrix.hpp"

#include <cassert>
#include <cmath>
#include <complex>

namespace zne {

namespace {

using Complex = std::complex<double>;

std::size_t checked_dim(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw ValidationError("density matrix: unsupported register size");
  }
  return std::size_t{1} << n_qubits;
}

}  // namespace

DensityMatrix::DensityMatrix(std::size_t n_qubits, Eigen::MatrixXcd matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  const auto dim = static_cast<Eigen::Index>(checked_dim(n_qubits));
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw ValidationError("density matrix: shape does not match register");
  }
}

DensityMatrix DensityMatrix::from_bitstring(std::size_t n_qubits,
                                            const std::string& bits) {
  const auto dim = static_cast<Eigen::Index>(checked_dim(n_qubits));
  if (bits.size() != n_qubits) {
    throw ValidationError("density matrix: bitstring length mismatch");
  }
  const auto idx = static_cast<Eigen::Index>(bitstring_to_index(bits));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m(idx, idx) = Complex(1.0, 0.0);
  return DensityMatrix(n_qubits, std::move(m));
}

void DensityMatrix::check_integrity(double trace_tol, double herm_tol) const {
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > trace_tol) {
    throw IntegrityError("density matrix: trace drifted from 1");
  }
  const double herm_dev =
      (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > herm_tol) {
    throw IntegrityError("density matrix: hermiticity lost");
  }
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::size_t bitstring_to_index(const std::string& bits) {
  std::size_t index = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) {
    if (bits[q] == '1') {
      index |= std::size_t{1} << q;
    } else if (bits[q] != '0') {
      throw ValidationError("bitstring must contain only '0'/'1'");
    }
  }
  return index;
}

std::string index_to_bitstring(std::size_t index, std::size_t n_qubits) {
  std::string bits(n_qubits, '0');
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if ((index >> q) & 1u) bits[q] = '1';
  }
  return bits;
}

DensityMatrix apply_gate_ideal(const DensityMatrix& rho, const Gate& gate) {
  const auto dim = static_cast<std::size_t>(rho.dim());
  if (const auto* cx = std::get_if<CnotGate>(&gate)) {
    if (cx->control >= rho.n_qubits() || cx->target >= rho.n_qubits() ||
        cx->control == cx->target) {
      throw ValidationError("apply gate: invalid CNOT for this register");
    }
    // CNOT permutes basis states; conjugation is an index remap.  The
    // permutation is an involution, so it equals its own inverse.
    const std::size_t cbit = std::size_t{1} << cx->control;
    const std::size_t tbit = std::size_t{1} << cx->target;
    std::vector<std::size_t> perm(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      perm[i] = (i & cbit) ? (i ^ tbit) : i;
    }
    Eigen::MatrixXcd out(rho.dim(), rho.dim());
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            rho.matrix()(static_cast<Eigen::Index>(perm[i]),
                         static_cast<Eigen::Index>(perm[j]));
      }
    }
    return DensityMatrix(rho.n_qubits(), std::move(out));
  }

  const auto& g = std::get<OneQubitGate>(gate);
  if (g.qubit >= rho.n_qubits()) {
    throw ValidationError("apply gate: qubit index out of range");
  }
  if (!is_unitary(g.matrix)) {
    throw ValidationError("apply gate: matrix is not unitary");
  }
  const std::size_t qbit = std::size_t{1} << g.qubit;
  Eigen::MatrixXcd m = rho.matrix();
  // Left multiply by U on the qubit's row pairs...
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & qbit) continue;
    const auto i1 = static_cast<Eigen::Index>(i0 | qbit);
    const auto r0 = static_cast<Eigen::Index>(i0);
    for (Eigen::Index j = 0; j < rho.dim(); ++j) {
      const Complex a = m(r0, j);
      const Complex b = m(i1, j);
      m(r0, j) = g.matrix(0, 0) * a + g.matrix(0, 1) * b;
      m(i1, j) = g.matrix(1, 0) * a + g.matrix(1, 1) * b;
    }
  }
  // ...then right multiply by U-dagger on the column pairs.
  for (std::size_t j0 = 0; j0 < dim; ++j0) {
    if (j0 & qbit) continue;
    const auto j1 = static_cast<Eigen::Index>(j0 | qbit);
    const auto c0 = static_cast<Eigen::Index>(j0);
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
      const Complex a = m(i, c0);
      const Complex b = m(i, j1);
      m(i, c0) = a * std::conj(g.matrix(0, 0)) + b * std::conj(g.matrix(0, 1));
      m(i, j1) = a * std::conj(g.matrix(1, 0)) + b * std::conj(g.matrix(1, 1));
    }
  }
  return DensityMatrix(rho.n_qubits(), std::move(m));
}

DensityMatrix apply_depolarizing_2q(const DensityMatrix& rho, std::size_t a,
                                    std::size_t b, double epsilon) {
  if (a >= rho.n_qubits() || b >= rho.n_qubits() || a == b) {
    throw ValidationError("depolarizing: invalid qubit pair");
  }
  if (!(epsilon >= 0.0) || !(epsilon <= 1.0)) {
    throw ValidationError("depolarizing: epsilon must lie in [0, 1]");
  }
  const auto dim = static_cast<std::size_t>(rho.dim());
  const std::size_t abit = std::size_t{1} << a;
  const std::size_t bbit = std::size_t{1} << b;

  // Split each index into the pair subspace (2 bits) and the rest.
  const std::size_t rest_dim = dim / 4;
  std::vector<std::size_t> expand(rest_dim);
  {
    std::size_t r = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      if ((i & abit) == 0 && (i & bbit) == 0) expand[r++] = i;
    }
  }
  const auto compose = [&](std::size_t rest, std::size_t sub) {
    std::size_t i = expand[rest];
    if (sub & 1u) i |= abit;
    if (sub & 2u) i |= bbit;
    return static_cast<Eigen::Index>(i);
  };

  // Partial trace over the pair.
  Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(rest_dim), static_cast<Eigen::Index>(rest_dim));
  for (std::size_t r1 = 0; r1 < rest_dim; ++r1) {
    for (std::size_t r2 = 0; r2 < rest_dim; ++r2) {
      Complex sum(0.0, 0.0);
      for (std::size_t s = 0; s < 4; ++s) {
        sum += rho.matrix()(compose(r1, s), compose(r2, s));
      }
      reduced(static_cast<Eigen::Index>(r1), static_cast<Eigen::Index>(r2)) =
          sum;
    }
  }

  // (1 - eps) rho + eps * reduced (x) I/4.
  Eigen::MatrixXcd out = (1.0 - epsilon) * rho.matrix();
  const double quarter = epsilon / 4.0;
  for (std::size_t r1 = 0; r1 < rest_dim; ++r1) {
    for (std::size_t r2 = 0; r2 < rest_dim; ++r2) {
      const Complex add = quarter * reduced(static_cast<Eigen::Index>(r1),
                                            static_cast<Eigen::Index>(r2));
      for (std::size_t s = 0; s < 4; ++s) {
        out(compose(r1, s), compose(r2, s)) += add;
      }
    }
  }
  return DensityMatrix(rho.n_qubits(), std::move(out));
}

DensityMatrix apply_amplitude_damping(const DensityMatrix& rho, std::size_t q,
                                      double gamma) {
  if (q >= rho.n_qubits()) {
    throw ValidationError("damping: qubit index out of range");
  }
  if (!(gamma >= 0.0) || !(gamma <= 1.0)) {
    throw ValidationError("damping: gamma must lie in [0, 1]");
  }
  const auto dim = static_cast<std::size_t>(rho.dim());
  const std::size_t qbit = std::size_t{1} << q;
  const double keep = std::sqrt(1.0 - gamma);
  Eigen::MatrixXcd m = rho.matrix();
  // Kraus pair K0 = diag(1, sqrt(1-gamma)), K1 = sqrt(gamma)|0><1| reduces
  // to a closed-form update of each 2x2 block in the qubit's bit.
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & qbit) continue;
    for (std::size_t j0 = 0; j0 < dim; ++j0) {
      if (j0 & qbit) continue;
      const auto r0 = static_cast<Eigen::Index>(i0);
      const auto r1 = static_cast<Eigen::Index>(i0 | qbit);
      const auto c0 = static_cast<Eigen::Index>(j0);
      const auto c1 = static_cast<Eigen::Index>(j0 | qbit);
      const Complex ee = m(r0, c0);
      const Complex eg = m(r0, c1);
      const Complex ge = m(r1, c0);
      const Complex gg = m(r1, c1);
      m(r0, c0) = ee + gamma * gg;
      m(r0, c1) = keep * eg;
      m(r1, c0) = keep * ge;
      m(r1, c1) = (1.0 - gamma) * gg;
    }
  }
  return DensityMatrix(rho.n_qubits(), std::move(m));
}

DensityMatrix simulate(const Circuit& circuit, const NoiseModel& noise) {
  DensityMatrix rho =
      DensityMatrix::from_bitstring(circuit.n_qubits(), circuit.initial_state());
  for (const auto& gate : circuit.gates()) {
    rho = apply_gate_ideal(rho, gate);
    if (const auto* cx = std::get_if<CnotGate>(&gate)) {
      const double eps = noise.epsilon_for(cx->control, cx->target);
      if (eps > 0.0) {
        rho = apply_depolarizing_2q(rho, cx->control, cx->target, eps);
      }
      if (noise.has_damping()) {
        for (std::size_t q = 0; q < circuit.n_qubits(); ++q) {
          const double gamma = noise.gamma_for(q);
          if (gamma > 0.0) rho = apply_amplitude_damping(rho, q, gamma);
        }
      }
    }
  }
  rho.check_integrity();
#ifndef NDEBUG
  assert(rho.min_eigenvalue() > -1e-9);
#endif
  return rho;
}

double expectation(const DensityMatrix& rho, const Observable& obs) {
  if (std::holds_alternative<BitValue>(obs)) {
    double value = 0.0;
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
      value += rho.matrix()(i, i).real() * static_cast<double>(i);
    }
    return value;
  }
  const auto& target = std::get<TargetProbability>(obs);
  if (target.bitstring.size() != rho.n_qubits()) {
    throw ValidationError("observable: target bitstring length mismatch");
  }
  const auto idx =
      static_cast<Eigen::Index>(bitstring_to_index(target.bitstring));
  return rho.matrix()(idx, idx).real();
}

std::vector<double> probabilities(const DensityMatrix& rho) {
  constexpr double kClampTol = 1e-10;
  constexpr double kSumTol = 1e-8;
  std::vector<double> probs(static_cast<std::size_t>(rho.dim()));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    double p = rho.matrix()(i, i).real();
    if (p < -kClampTol || p > 1.0 + kClampTol) {
      throw IntegrityError("probabilities: diagonal entry outside [0, 1]");
    }
    p = std::min(std::max(p, 0.0), 1.0);
    probs[static_cast<std::size_t>(i)] = p;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw IntegrityError("probabilities: diagonal does not sum to 1");
  }
  for (double& p : probs) p /= sum;
  return probs;
}

double leading_order_expectation(const Circuit& circuit,
                                 const NoiseModel& noise,
                                 const std::vector<int>& replication,
                                 const Observable& obs) {
  validate_replication(circuit, replication);
  const NoiseModel ideal = NoiseModel::noiseless();
  const double e_ideal = expectation(simulate(circuit, ideal), obs);

  // Noiseless run with the k-th CNOT's pair fully mixed at that point.
  const auto mixed_at = [&](std::size_t k) {
    DensityMatrix rho = DensityMatrix::from_bitstring(circuit.n_qubits(),
                                                      circuit.initial_state());
    std::size_t seen = 0;
    for (const auto& gate : circuit.gates()) {
      rho = apply_gate_ideal(rho, gate);
      if (const auto* cx = std::get_if<CnotGate>(&gate)) {
        if (seen == k) {
          rho = apply_depolarizing_2q(rho, cx->control, cx->target, 1.0);
        }
        ++seen;
      }
    }
    return expectation(rho, obs);
  };

  double total_weight = 0.0;
  double mixed_sum = 0.0;
  const std::size_t n_cnots = circuit.n_cnots();
  for (std::size_t k = 0; k < n_cnots; ++k) {
    const auto [lo, hi] = circuit.cnot_pair(k);
    const double weight =
        noise.epsilon_for(lo, hi) * static_cast<double>(replication[k]);
    total_weight += weight;
    if (weight != 0.0) mixed_sum += weight * mixed_at(k);
  }
  return (1.0 - total_weight) * e_ideal + mixed_sum;
}

}  // namespace zne
