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
 * Projective measurements (Z, X and Bell bases) with Born-rule sampling, exact
 * branch projection, and exhaustive outcome enumeration.
 *
 * Sign convention for X outcomes: 0 is |+>, 1 is |->.
 * Bell outcome index: 0 = (|00>+|11>)/sqrt2, 1 = (|00>-|11>)/sqrt2,
 *                     2 = (|01>+|10>)/sqrt2, 3 = (|01>-|10>)/sqrt2.
 */

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghzqss/errors.hpp"
#include "ghzqss/state_vector.hpp"

namespace ghzqss {

enum class Basis { Z, X, Bell };

inline const char* to_string(Basis b) {
  switch (b) {
    case Basis::Z: return "Z";
    case Basis::X: return "X";
    case Basis::Bell: return "Bell";
  }
  return "?";
}

struct MeasOutcome {
  Basis basis;
  int value;
  double probability;
};

struct Measured {
  MeasOutcome outcome;
  StateVector state;
};

/// One exact branch of a measurement. `state` is empty when the branch has zero probability.
struct Branch {
  double probability;
  std::optional<StateVector> state;
};

namespace detail {

inline double probability_of_bits(const StateVector& state, std::size_t mask_bits,
                                  std::size_t value) {
  double p = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & mask_bits) == value) p += std::norm(amps[i]);
  }
  return p;
}

inline StateVector to_bell_frame(StateVector s, QubitIndex q1, QubitIndex q2) {
  return apply_hadamard(apply_cnot(std::move(s), q1, q2), q1);
}

inline StateVector from_bell_frame(StateVector s, QubitIndex q1, QubitIndex q2) {
  return apply_cnot(apply_hadamard(std::move(s), q1), q1, q2);
}

/// Z-frame probabilities of the four (q1, q2) bit pairs, indexed bit(q1) + 2*bit(q2),
/// which is the Bell index once the state is in the Bell frame.
inline std::array<double, 4> pair_probabilities(const StateVector& s, QubitIndex q1,
                                                QubitIndex q2) {
  const std::size_t m1 = s.mask(q1);
  const std::size_t m2 = s.mask(q2);
  std::array<double, 4> p{};
  const auto amps = s.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    p[((i & m1) ? 1 : 0) + ((i & m2) ? 2 : 0)] += std::norm(amps[i]);
  }
  return p;
}

inline std::size_t pair_value(const StateVector& s, QubitIndex q1, QubitIndex q2, int outcome) {
  return ((outcome & 1) ? s.mask(q1) : 0) | ((outcome & 2) ? s.mask(q2) : 0);
}

inline void check_pair(const StateVector& s, QubitIndex q1, QubitIndex q2) {
  s.check_qubit(q1);
  s.check_qubit(q2);
  if (q1 == q2) throw ArgumentError("Bell measurement needs two distinct qubits");
}

inline void check_value(int value, int count) {
  if (value < 0 || value >= count) {
    throw ArgumentError("measurement value " + std::to_string(value) + " out of range");
  }
}

}  // namespace detail

/// Exact projection of qubit q onto a Z value (|0>,|1>) or X sign (|+>,|->).
inline Branch project(const StateVector& state, QubitIndex q, Basis basis, int value) {
  if (basis == Basis::Bell) throw ArgumentError("use project_bell for Bell outcomes");
  detail::check_value(value, 2);
  const std::size_t m = state.mask(q);
  const std::size_t want = value ? m : 0;
  if (basis == Basis::Z) {
    const double p = detail::probability_of_bits(state, m, want);
    if (p <= 0.0) return {0.0, std::nullopt};
    return {p, renormalized_projection(state, m, want, p)};
  }
  const StateVector rotated = apply_hadamard(state, q);
  const double p = detail::probability_of_bits(rotated, m, want);
  if (p <= 0.0) return {0.0, std::nullopt};
  return {p, apply_hadamard(renormalized_projection(rotated, m, want, p), q)};
}

/// Exact projection of (q1, q2) onto one Bell state; the pair is left in that Bell state.
inline Branch project_bell(const StateVector& state, QubitIndex q1, QubitIndex q2, int outcome) {
  detail::check_pair(state, q1, q2);
  detail::check_value(outcome, 4);
  const StateVector rotated = detail::to_bell_frame(state, q1, q2);
  const std::size_t mask_bits = rotated.mask(q1) | rotated.mask(q2);
  const std::size_t want = detail::pair_value(rotated, q1, q2, outcome);
  const double p = detail::probability_of_bits(rotated, mask_bits, want);
  if (p <= 0.0) return {0.0, std::nullopt};
  return {p, detail::from_bell_frame(renormalized_projection(rotated, mask_bits, want, p), q1,
                                     q2)};
}

/// Z measurement. Outcome 0 is chosen iff randomness < p0.
inline Measured measure_z(const StateVector& state, QubitIndex q, double randomness) {
  const std::size_t m = state.mask(q);
  const double p0 = detail::probability_of_bits(state, m, 0);
  const double p1 = detail::probability_of_bits(state, m, m);
  const double total = p0 + p1;
  if (!(total > kTolerance)) throw InternalError("measure_z: both projections vanish");
  const int value = randomness < p0 / total ? 0 : 1;
  const double p = (value ? p1 : p0) / total;
  return {{Basis::Z, value, p}, renormalized_projection(state, m, value ? m : 0, value ? p1 : p0)};
}

/// X measurement: H, Z-measure, H. The measured qubit is left in |+> or |->.
inline Measured measure_x(const StateVector& state, QubitIndex q, double randomness) {
  Measured rotated = measure_z(apply_hadamard(state, q), q, randomness);
  return {{Basis::X, rotated.outcome.value, rotated.outcome.probability},
          apply_hadamard(std::move(rotated.state), q)};
}

/// Bell measurement on (q1, q2). A single uniform draw selects the outcome by a
/// lexicographic threshold over the four outcome probabilities; the measured pair
/// is re-synthesized into the observed Bell state so it can be forwarded.
inline Measured measure_bell(const StateVector& state, QubitIndex q1, QubitIndex q2,
                             double randomness) {
  detail::check_pair(state, q1, q2);
  const StateVector rotated = detail::to_bell_frame(state, q1, q2);
  const auto p = detail::pair_probabilities(rotated, q1, q2);
  const double total = p[0] + p[1] + p[2] + p[3];
  if (!(total > kTolerance)) throw InternalError("measure_bell: all projections vanish");
  int outcome = -1;
  double cumulative = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (p[k] <= 0.0) continue;
    outcome = k;
    cumulative += p[k] / total;
    if (randomness < cumulative) break;
  }
  const std::size_t mask_bits = rotated.mask(q1) | rotated.mask(q2);
  const std::size_t want = detail::pair_value(rotated, q1, q2, outcome);
  StateVector collapsed = renormalized_projection(rotated, mask_bits, want, p[outcome]);
  return {{Basis::Bell, outcome, p[outcome] / total},
          detail::from_bell_frame(std::move(collapsed), q1, q2)};
}

/// One entry of a measurement plan. Bell entries occupy `qubit` and `partner`.
struct MeasureSpec {
  Basis basis;
  QubitIndex qubit;
  QubitIndex partner{0};

  static MeasureSpec z(std::size_t q) { return {Basis::Z, QubitIndex{q}}; }
  static MeasureSpec x(std::size_t q) { return {Basis::X, QubitIndex{q}}; }
  static MeasureSpec bell(std::size_t q1, std::size_t q2) {
    return {Basis::Bell, QubitIndex{q1}, QubitIndex{q2}};
  }
  int radix() const { return basis == Basis::Bell ? 4 : 2; }
};

/// Dense table of joint outcome probabilities for a measurement plan. Outcome
/// tuples are encoded mixed-radix with the first plan entry most significant.
class OutcomeDistribution {
 public:
  OutcomeDistribution(std::vector<MeasureSpec> plan, std::vector<double> probabilities)
      : plan_(std::move(plan)), probabilities_(std::move(probabilities)) {}

  std::span<const MeasureSpec> plan() const { return plan_; }
  std::size_t size() const { return probabilities_.size(); }
  std::span<const double> probabilities() const { return probabilities_; }
  double operator[](std::size_t code) const { return probabilities_[code]; }

  std::size_t encode(std::span<const int> values) const {
    if (values.size() != plan_.size()) throw ArgumentError("outcome tuple has wrong length");
    std::size_t code = 0;
    for (std::size_t i = 0; i < plan_.size(); ++i) {
      detail::check_value(values[i], plan_[i].radix());
      code = code * plan_[i].radix() + static_cast<std::size_t>(values[i]);
    }
    return code;
  }

  std::vector<int> decode(std::size_t code) const {
    std::vector<int> values(plan_.size());
    for (std::size_t i = plan_.size(); i-- > 0;) {
      values[i] = static_cast<int>(code % plan_[i].radix());
      code /= plan_[i].radix();
    }
    return values;
  }

  double probability(std::span<const int> values) const { return probabilities_[encode(values)]; }

  double total() const {
    double t = 0.0;
    for (double p : probabilities_) t += p;
    return t;
  }

 private:
  std::vector<MeasureSpec> plan_;
  std::vector<double> probabilities_;
};

/// Exact Born distribution of every outcome tuple of `plan`, without sampling.
inline OutcomeDistribution outcome_distribution(const StateVector& state,
                                                std::vector<MeasureSpec> plan) {
  std::vector<bool> used(state.num_qubits(), false);
  auto claim = [&](QubitIndex q) {
    state.check_qubit(q);
    if (used[q.value]) {
      throw ArgumentError("qubit " + std::to_string(q.value) + " appears twice in the plan");
    }
    used[q.value] = true;
  };
  StateVector rotated = state;
  std::size_t cells = 1;
  for (const auto& entry : plan) {
    claim(entry.qubit);
    if (entry.basis == Basis::Bell) {
      claim(entry.partner);
      rotated = detail::to_bell_frame(std::move(rotated), entry.qubit, entry.partner);
    } else if (entry.basis == Basis::X) {
      rotated = apply_hadamard(std::move(rotated), entry.qubit);
    }
    cells *= static_cast<std::size_t>(entry.radix());
  }
  std::vector<double> probabilities(cells, 0.0);
  const auto amps = rotated.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p == 0.0) continue;
    std::size_t code = 0;
    for (const auto& entry : plan) {
      int v = (i & rotated.mask(entry.qubit)) ? 1 : 0;
      if (entry.basis == Basis::Bell && (i & rotated.mask(entry.partner))) v += 2;
      code = code * entry.radix() + static_cast<std::size_t>(v);
    }
    probabilities[code] += p;
  }
  return OutcomeDistribution(std::move(plan), std::move(probabilities));
}

}  // namespace ghzqss
