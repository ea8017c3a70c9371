// Copyright 2026 The ghzqss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense state vectors over small qubit registers and the two gates the
 * protocol needs (Hadamard and CNOT).
 *
 * Qubit 0 is the leftmost ket symbol, i.e. the most significant bit of the
 * amplitude index: in a 3-qubit register, index 0b100 is |100>.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ghzqss/errors.hpp"

namespace ghzqss {

using Amplitude = std::complex<double>;

inline constexpr double kTolerance = 1e-10;
/// Amplitudes smaller than this after a gate are flushed to exact zero.
inline constexpr double kTruncation = 1e-12;
inline constexpr std::size_t kMaxQubits = 24;
inline constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

/// Position of a particle inside a register.
struct QubitIndex {
  std::size_t value;

  constexpr explicit QubitIndex(std::size_t v) : value(v) {}
  friend constexpr bool operator==(QubitIndex, QubitIndex) = default;
};

class StateVector {
 public:
  /// Validates length, finiteness and normalization.
  StateVector(std::size_t num_qubits, std::vector<Amplitude> amps)
      : num_qubits_(num_qubits), amps_(std::move(amps)) {
    check_capacity(num_qubits_);
    if (num_qubits_ == 0) throw ArgumentError("register needs at least one qubit");
    if (amps_.size() != (std::size_t{1} << num_qubits_)) {
      throw ArgumentError("amplitude count " + std::to_string(amps_.size()) +
                          " does not match 2^" + std::to_string(num_qubits_));
    }
    for (const auto& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw ArgumentError("non-finite amplitude");
      }
    }
    if (std::abs(norm_squared() - 1.0) > kTolerance) {
      throw ArgumentError("state is not normalized (norm^2 = " +
                          std::to_string(norm_squared()) + ")");
    }
  }

  /// Computational basis state |index> on k qubits.
  static StateVector basis(std::size_t num_qubits, std::uint64_t index) {
    check_capacity(num_qubits);
    if (num_qubits == 0) throw ArgumentError("register needs at least one qubit");
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (index >= dim) {
      throw ArgumentError("basis index " + std::to_string(index) + " out of range for " +
                          std::to_string(num_qubits) + " qubits");
    }
    std::vector<Amplitude> amps(dim);
    amps[index] = 1.0;
    return StateVector(num_qubits, std::move(amps), Unchecked{});
  }

  static StateVector zero() { return basis(1, 0); }
  static StateVector one() { return basis(1, 1); }
  static StateVector plus() { return StateVector(1, {kInvSqrt2, kInvSqrt2}, Unchecked{}); }
  static StateVector minus() { return StateVector(1, {kInvSqrt2, -kInvSqrt2}, Unchecked{}); }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  Amplitude operator[](std::size_t index) const { return amps_[index]; }

  double norm_squared() const {
    double total = 0.0;
    for (const auto& a : amps_) total += std::norm(a);
    return total;
  }

  /// Bit mask selecting qubit q inside an amplitude index.
  std::size_t mask(QubitIndex q) const {
    check_qubit(q);
    return std::size_t{1} << (num_qubits_ - 1 - q.value);
  }

  void check_qubit(QubitIndex q) const {
    if (q.value >= num_qubits_) {
      throw ArgumentError("qubit " + std::to_string(q.value) + " out of range for a " +
                          std::to_string(num_qubits_) + "-qubit register");
    }
  }

  /// Per-amplitude comparison.
  bool approx_equal(const StateVector& other, double tol = kTolerance) const {
    if (other.num_qubits_ != num_qubits_) return false;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i] - other.amps_[i]) > tol) return false;
    }
    return true;
  }

  /// Ket notation of the nonzero amplitudes, for diagnostics.
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) <= kTruncation) continue;
      if (!out.empty()) out += " + ";
      out += "(" + std::to_string(amps_[i].real());
      if (amps_[i].imag() != 0.0) out += "," + std::to_string(amps_[i].imag()) + "i";
      out += ")|";
      for (std::size_t q = 0; q < num_qubits_; ++q) {
        out += ((i >> (num_qubits_ - 1 - q)) & 1U) ? '1' : '0';
      }
      out += ">";
    }
    return out.empty() ? "0" : out;
  }

 private:
  struct Unchecked {};
  StateVector(std::size_t num_qubits, std::vector<Amplitude> amps, Unchecked)
      : num_qubits_(num_qubits), amps_(std::move(amps)) {}

  static void check_capacity(std::size_t num_qubits) {
    if (num_qubits > kMaxQubits) {
      throw CapacityError("register of " + std::to_string(num_qubits) +
                          " qubits exceeds the " + std::to_string(kMaxQubits) + "-qubit cap");
    }
  }

  std::size_t num_qubits_;
  std::vector<Amplitude> amps_;

  friend StateVector apply_hadamard(StateVector, QubitIndex);
  friend StateVector apply_cnot(StateVector, QubitIndex, QubitIndex);
  friend StateVector tensor(const StateVector&, const StateVector&);
  friend StateVector renormalized_projection(const StateVector&, std::size_t, std::size_t,
                                             double);
};

inline StateVector apply_hadamard(StateVector state, QubitIndex q) {
  const std::size_t m = state.mask(q);
  auto flush = [](Amplitude a) {
    return std::abs(a) < kTruncation ? Amplitude{} : a;
  };
  for (std::size_t i = 0; i < state.amps_.size(); ++i) {
    if (i & m) continue;
    const Amplitude a0 = state.amps_[i];
    const Amplitude a1 = state.amps_[i | m];
    state.amps_[i] = flush((a0 + a1) * kInvSqrt2);
    state.amps_[i | m] = flush((a0 - a1) * kInvSqrt2);
  }
  return state;
}

inline StateVector apply_cnot(StateVector state, QubitIndex control, QubitIndex target) {
  if (control == target) throw ArgumentError("CNOT control and target must differ");
  const std::size_t cm = state.mask(control);
  const std::size_t tm = state.mask(target);
  for (std::size_t i = 0; i < state.amps_.size(); ++i) {
    if ((i & cm) && !(i & tm)) std::swap(state.amps_[i], state.amps_[i | tm]);
  }
  return state;
}

/// |left> (x) |right>, with left's qubits first.
inline StateVector tensor(const StateVector& left, const StateVector& right) {
  const std::size_t k = left.num_qubits_ + right.num_qubits_;
  if (k > kMaxQubits) {
    throw CapacityError("register of " + std::to_string(k) + " qubits exceeds the " +
                        std::to_string(kMaxQubits) + "-qubit cap");
  }
  std::vector<Amplitude> amps(std::size_t{1} << k);
  const std::size_t rdim = right.amps_.size();
  for (std::size_t i = 0; i < left.amps_.size(); ++i) {
    for (std::size_t j = 0; j < rdim; ++j) amps[i * rdim + j] = left.amps_[i] * right.amps_[j];
  }
  return StateVector(k, std::move(amps), StateVector::Unchecked{});
}

enum class AncillaPosition { front, back };

/// Adds a one-qubit ancilla. Front-appending shifts every existing qubit index by one.
inline StateVector append_ancilla(const StateVector& state, const StateVector& ancilla,
                                  AncillaPosition position) {
  if (ancilla.num_qubits() != 1) throw ArgumentError("ancilla must be a single qubit");
  return position == AncillaPosition::front ? tensor(ancilla, state) : tensor(state, ancilla);
}

/// Keeps the amplitudes whose index matches `value` on `mask_bits` and rescales
/// them by 1/sqrt(probability).
inline StateVector renormalized_projection(const StateVector& state, std::size_t mask_bits,
                                           std::size_t value, double probability) {
  std::vector<Amplitude> amps(state.amps_.size());
  const double scale = 1.0 / std::sqrt(probability);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & mask_bits) == value) amps[i] = state.amps_[i] * scale;
  }
  return StateVector(state.num_qubits_, std::move(amps), StateVector::Unchecked{});
}

}  // namespace ghzqss
