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
 * Adversary models acting on particles in flight: a Bell-basis
 * intercept-resend tap and collective ancilla attacks (CNOT, or
 * Hadamard-CNOT-Hadamard) by a dishonest receiver.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "ghzqss/errors.hpp"
#include "ghzqss/measurement.hpp"
#include "ghzqss/state_vector.hpp"

namespace ghzqss {

enum class AttackKind { none, intercept_resend_bell, collective_cnot, collective_h_cnot };

inline std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::none: return "none";
    case AttackKind::intercept_resend_bell: return "intercept-resend";
    case AttackKind::collective_cnot: return "collective-cnot";
    case AttackKind::collective_h_cnot: return "collective-h-cnot";
  }
  return "?";
}

inline AttackKind parse_attack_kind(std::string_view name) {
  for (auto k : {AttackKind::none, AttackKind::intercept_resend_bell, AttackKind::collective_cnot,
                 AttackKind::collective_h_cnot}) {
    if (name == to_string(k)) return k;
  }
  throw ArgumentError("unknown attack '" + std::string(name) + "'");
}

inline bool is_collective(AttackKind kind) {
  return kind == AttackKind::collective_cnot || kind == AttackKind::collective_h_cnot;
}

/// Which adversary taps the quantum channel. The insider is the dishonest
/// receiver (receiver 2, "Bob", by default) who intercepts the target
/// receiver's particle (the last receiver, "Charlie", by default).
struct AttackModel {
  AttackKind kind = AttackKind::none;
  std::optional<int> target_receiver = std::nullopt;
  int insider = 2;

  int target(int parties) const { return target_receiver.value_or(parties); }

  /// Qubits the attack adds to the round register.
  std::size_t extra_qubits() const { return is_collective(kind) ? 1 : 0; }

  void validate(int parties) const {
    if (kind == AttackKind::none) return;
    const int t = target(parties);
    if (t < 2 || t > parties) {
      throw ArgumentError("target receiver " + std::to_string(t) + " not in [2, " +
                          std::to_string(parties) + "]");
    }
    if (insider < 2 || insider > parties) {
      throw ArgumentError("insider " + std::to_string(insider) + " not in [2, " +
                          std::to_string(parties) + "]");
    }
    if (insider == t) throw ArgumentError("insider and target receiver must differ");
  }

  friend bool operator==(const AttackModel&, const AttackModel&) = default;
};

/// What the adversary learned in one round: a Bell outcome (0..3).
struct EveRecord {
  AttackKind kind;
  int bell_outcome;
  std::size_t round_index;

  friend bool operator==(const EveRecord&, const EveRecord&) = default;
};

/// Bell-measures the insider's and the target's particles, then forwards both
/// collapsed particles unchanged.
inline std::pair<StateVector, EveRecord> tap_intercept_resend(const StateVector& state,
                                                              QubitIndex insider,
                                                              QubitIndex target, double randomness,
                                                              std::size_t round_index = 0) {
  Measured m = measure_bell(state, insider, target, randomness);
  return {std::move(m.state), EveRecord{AttackKind::intercept_resend_bell, m.outcome.value,
                                        round_index}};
}

/// Entangles a fresh |0> ancilla (appended last) with the target particle.
/// With `with_hadamard` the target is rotated into the X basis around the CNOT,
/// so the ancilla records the target's X value instead of its Z value.
inline StateVector tap_collective(const StateVector& state, QubitIndex target, bool with_hadamard) {
  state.check_qubit(target);
  StateVector s = append_ancilla(state, StateVector::zero(), AncillaPosition::back);
  const QubitIndex ancilla{s.num_qubits() - 1};
  if (with_hadamard) s = apply_hadamard(std::move(s), target);
  s = apply_cnot(std::move(s), target, ancilla);
  if (with_hadamard) s = apply_hadamard(std::move(s), target);
  return s;
}

}  // namespace ghzqss
