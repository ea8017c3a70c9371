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
 * One protocol round end to end: prepare -> channel tap -> receiver correction
 * -> encode -> measure. `simulate_round` samples it with a random stream;
 * `exact_round_analysis` enumerates every branch and returns the full joint
 * Born distribution.
 *
 * Under a collective attack the insider does not X-measure its own particle.
 * After everyone else has measured it Bell-measures (own particle, ancilla) and
 * announces the Bell phase bit, i.e. the X parity of the pair, as its sign.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ghzqss/attacks.hpp"
#include "ghzqss/errors.hpp"
#include "ghzqss/measurement.hpp"
#include "ghzqss/protocol.hpp"
#include "ghzqss/random.hpp"
#include "ghzqss/state_vector.hpp"

namespace ghzqss {

namespace detail {

inline QubitIndex party_qubit(int party) { return QubitIndex{static_cast<std::size_t>(party - 1)}; }

/// Qubit of a party once the encoding ancilla sits at the front.
inline QubitIndex encoded_qubit(int party) { return QubitIndex{static_cast<std::size_t>(party)}; }

inline void check_round_capacity(int parties, const AttackModel& attack) {
  const std::size_t k = static_cast<std::size_t>(parties) + 1 + attack.extra_qubits();
  if (k > kMaxQubits) {
    throw CapacityError("round register of " + std::to_string(k) + " qubits exceeds the " +
                        std::to_string(kMaxQubits) + "-qubit cap");
  }
}

}  // namespace detail

/// Samples one round. Randomness is drawn in a fixed order: the tap (if any),
/// then a, a1, the receivers ascending, then the insider's deferred Bell measurement.
inline RoundOutcome simulate_round(const RoundPlan& plan, const AttackModel& attack,
                                   RandomStream& rng) {
  const int n = plan.variant.parties();
  attack.validate(n);
  detail::check_round_capacity(n, attack);

  StateVector state = prepare_variant(plan.variant);
  std::optional<EveRecord> eve;
  if (attack.kind == AttackKind::intercept_resend_bell) {
    auto [tapped, record] =
        tap_intercept_resend(state, detail::party_qubit(attack.insider),
                             detail::party_qubit(attack.target(n)), rng.uniform(), plan.round_index);
    state = std::move(tapped);
    eve = record;
  } else if (is_collective(attack.kind)) {
    state = tap_collective(state, detail::party_qubit(attack.target(n)),
                           attack.kind == AttackKind::collective_h_cnot);
  }

  state = encode_round(receiver_correction(std::move(state), plan.variant), plan.payload_bit);

  RoundOutcome out{plan, 0, 0, {}, eve, {}};
  if (is_collective(attack.kind)) {
    MeasuredRound m = measure_round(std::move(state), n, rng, attack.insider);
    const QubitIndex ancilla{m.state.num_qubits() - 1};
    const Measured bell =
        measure_bell(m.state, detail::encoded_qubit(attack.insider), ancilla, rng.uniform());
    m.receiver_signs[static_cast<std::size_t>(attack.insider - 2)] = bell.outcome.value & 1;
    out.alice_a = m.alice_a;
    out.alice_A = m.alice_A;
    out.receiver_signs = std::move(m.receiver_signs);
    out.eve_record = EveRecord{attack.kind, bell.outcome.value, plan.round_index};
  } else {
    MeasuredRound m = measure_round(std::move(state), n, rng);
    out.alice_a = m.alice_a;
    out.alice_A = m.alice_A;
    out.receiver_signs = std::move(m.receiver_signs);
  }
  return out;
}

/// Joint distribution over (alice_a, alice_A, receiver signs, Eve's Bell outcome).
/// Cells are dense; see `code` for the layout.
class RoundDistribution {
 public:
  RoundDistribution(int parties, AttackKind attack)
      : parties_(parties),
        attack_(attack),
        probabilities_((std::size_t{4} << (parties - 1)) * (attack == AttackKind::none ? 1 : 4),
                       0.0) {}

  int parties() const { return parties_; }
  AttackKind attack() const { return attack_; }
  bool has_eve() const { return attack_ != AttackKind::none; }
  std::size_t eve_radix() const { return has_eve() ? 4 : 1; }
  std::size_t size() const { return probabilities_.size(); }

  /// ((alice_a * 2 + alice_A) * 2^(n-1) + signs) * eve_radix + eve, receiver 2 the
  /// most significant sign bit.
  std::size_t code(int alice_a, int alice_A, std::span<const int> signs,
                   std::optional<int> eve) const {
    if (signs.size() != static_cast<std::size_t>(parties_ - 1)) {
      throw ArgumentError("sign vector length must be n - 1");
    }
    std::size_t c = static_cast<std::size_t>((alice_a & 1) * 2 + (alice_A & 1));
    for (int s : signs) c = c * 2 + static_cast<std::size_t>(s & 1);
    c *= eve_radix();
    if (has_eve()) c += static_cast<std::size_t>(eve.value_or(0));
    return c;
  }

  std::size_t code(const RoundOutcome& o) const {
    std::optional<int> eve;
    if (o.eve_record) eve = o.eve_record->bell_outcome;
    return code(o.alice_a, o.alice_A, o.receiver_signs, eve);
  }

  struct Cell {
    int alice_a;
    int alice_A;
    std::vector<int> receiver_signs;
    std::optional<int> eve;
  };

  Cell decode(std::size_t c) const {
    Cell cell{};
    if (has_eve()) {
      cell.eve = static_cast<int>(c % 4);
      c /= 4;
    }
    cell.receiver_signs.assign(static_cast<std::size_t>(parties_ - 1), 0);
    for (std::size_t i = cell.receiver_signs.size(); i-- > 0;) {
      cell.receiver_signs[i] = static_cast<int>(c & 1U);
      c >>= 1;
    }
    cell.alice_A = static_cast<int>(c & 1U);
    cell.alice_a = static_cast<int>((c >> 1) & 1U);
    return cell;
  }

  double operator[](std::size_t c) const { return probabilities_[c]; }
  std::span<const double> probabilities() const { return probabilities_; }
  void add(std::size_t c, double p) { probabilities_[c] += p; }

  double total() const {
    double t = 0.0;
    for (double p : probabilities_) t += p;
    return t;
  }

  /// P(recovered bit != payload), optionally joint with a given Eve outcome.
  double error_probability(int payload, std::optional<int> eve_outcome = std::nullopt) const {
    double p = 0.0;
    for (std::size_t c = 0; c < probabilities_.size(); ++c) {
      if (probabilities_[c] == 0.0) continue;
      const Cell cell = decode(c);
      if (eve_outcome && cell.eve != eve_outcome) continue;
      if (recover_secret(cell.alice_a, cell.receiver_signs) != payload) p += probabilities_[c];
    }
    return p;
  }

  double eve_probability(int outcome) const {
    double p = 0.0;
    for (std::size_t c = 0; c < probabilities_.size(); ++c) {
      if (decode(c).eve == outcome) p += probabilities_[c];
    }
    return p;
  }

 private:
  int parties_;
  AttackKind attack_;
  std::vector<double> probabilities_;
};

/// Exact joint distribution of one round, enumerating the tap's Bell branches
/// and every final measurement outcome.
inline RoundDistribution exact_round_analysis(const StateVariant& variant, int payload_bit,
                                              const AttackModel& attack) {
  const int n = variant.parties();
  attack.validate(n);
  detail::check_round_capacity(n, attack);

  struct Pending {
    std::optional<int> eve;
    double probability;
    StateVector state;
  };
  std::vector<Pending> branches;
  StateVector prepared = prepare_variant(variant);
  if (attack.kind == AttackKind::intercept_resend_bell) {
    for (int k = 0; k < 4; ++k) {
      Branch b = project_bell(prepared, detail::party_qubit(attack.insider),
                              detail::party_qubit(attack.target(n)), k);
      if (b.state) branches.push_back({k, b.probability, std::move(*b.state)});
    }
  } else if (is_collective(attack.kind)) {
    branches.push_back({std::nullopt, 1.0,
                        tap_collective(prepared, detail::party_qubit(attack.target(n)),
                                       attack.kind == AttackKind::collective_h_cnot)});
  } else {
    branches.push_back({std::nullopt, 1.0, std::move(prepared)});
  }

  const bool collective = is_collective(attack.kind);
  std::vector<MeasureSpec> plan{MeasureSpec::z(0), MeasureSpec::z(1)};
  for (int p = 2; p <= n; ++p) {
    if (collective && p == attack.insider) continue;
    plan.push_back(MeasureSpec::x(static_cast<std::size_t>(p)));
  }
  if (collective) {
    plan.push_back(MeasureSpec::bell(static_cast<std::size_t>(attack.insider),
                                     static_cast<std::size_t>(n) + 1));
  }

  RoundDistribution table(n, attack.kind);
  std::vector<int> signs(static_cast<std::size_t>(n - 1));
  for (auto& branch : branches) {
    const StateVector encoded =
        encode_round(receiver_correction(std::move(branch.state), variant), payload_bit);
    const OutcomeDistribution dist = outcome_distribution(encoded, plan);
    for (std::size_t c = 0; c < dist.size(); ++c) {
      if (dist[c] == 0.0) continue;
      const std::vector<int> values = dist.decode(c);
      std::size_t v = 2;
      std::optional<int> eve = branch.eve;
      for (int p = 2; p <= n; ++p) {
        if (collective && p == attack.insider) continue;
        signs[static_cast<std::size_t>(p - 2)] = values[v++];
      }
      if (collective) {
        eve = values[v];
        signs[static_cast<std::size_t>(attack.insider - 2)] = values[v] & 1;
      }
      table.add(table.code(values[0], values[1], signs, eve), branch.probability * dist[c]);
    }
  }
  return table;
}

}  // namespace ghzqss
