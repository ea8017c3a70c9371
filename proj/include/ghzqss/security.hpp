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
 * Exact security figures derived from `exact_round_analysis`: per-check-round
 * detection rates (optionally conditioned on Eve's Bell outcome), Eve's Bell
 * outcome distribution, and the mutual information between what the dishonest
 * receiver observes and Alice's payload bit.
 */

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "ghzqss/attacks.hpp"
#include "ghzqss/errors.hpp"
#include "ghzqss/protocol.hpp"
#include "ghzqss/round.hpp"

namespace ghzqss {

/// Probability that a check round recovers the wrong bit, payload uniform over {0, 1}.
/// With `bell_condition` the rate is conditioned on Eve observing that Bell outcome.
inline double conditional_detection_rate(const AttackModel& attack, const StateVariant& variant,
                                         std::optional<int> bell_condition = std::nullopt) {
  if (bell_condition && attack.kind == AttackKind::none) {
    throw ArgumentError("no Bell outcome to condition on without an attack");
  }
  if (bell_condition && (*bell_condition < 0 || *bell_condition > 3)) {
    throw ArgumentError("Bell outcome must be in 0..3");
  }
  double errors = 0.0;
  double weight = 0.0;
  for (int payload = 0; payload < 2; ++payload) {
    const RoundDistribution table = exact_round_analysis(variant, payload, attack);
    errors += 0.5 * table.error_probability(payload, bell_condition);
    weight += bell_condition ? 0.5 * table.eve_probability(*bell_condition) : 0.5;
  }
  if (weight <= kTruncation) {
    throw ArgumentError("Bell outcome " + std::to_string(*bell_condition) +
                        " has zero probability for " + variant.name());
  }
  return errors / weight;
}

/// Distribution of Eve's Bell outcome, payload uniform.
inline std::array<double, 4> eve_record_distribution(const AttackModel& attack,
                                                     const StateVariant& variant) {
  std::array<double, 4> dist{};
  if (attack.kind == AttackKind::none) return dist;
  for (int payload = 0; payload < 2; ++payload) {
    const RoundDistribution table = exact_round_analysis(variant, payload, attack);
    for (int k = 0; k < 4; ++k) dist[static_cast<std::size_t>(k)] += 0.5 * table.eve_probability(k);
  }
  return dist;
}

/// I(observation; payload) in bits, payload uniform. The observation is Eve's Bell
/// record together with the insider's own announced sign; without an attack there
/// is no record and the result is 0.
inline double eve_mutual_information(const AttackModel& attack, const StateVariant& variant) {
  if (attack.kind == AttackKind::none) return 0.0;
  // joint[observation][payload], observation = eve_outcome * 2 + insider_sign
  std::array<std::array<double, 2>, 8> joint{};
  for (int payload = 0; payload < 2; ++payload) {
    const RoundDistribution table = exact_round_analysis(variant, payload, attack);
    for (std::size_t c = 0; c < table.size(); ++c) {
      if (table[c] == 0.0) continue;
      const auto cell = table.decode(c);
      const int sign = cell.receiver_signs[static_cast<std::size_t>(attack.insider - 2)];
      joint[static_cast<std::size_t>(*cell.eve * 2 + sign)][static_cast<std::size_t>(payload)] +=
          0.5 * table[c];
    }
  }
  double info = 0.0;
  for (const auto& row : joint) {
    const double p_obs = row[0] + row[1];
    for (double p : row) {
      if (p > 0.0) info += p * std::log2(p / (p_obs * 0.5));
    }
  }
  return info < kTruncation ? 0.0 : info;
}

/// Per-check-round detection rate averaged over the uniform variant distribution.
inline double averaged_detection_rate(const AttackModel& attack, int parties,
                                      VariantSet set = VariantSet::listed) {
  const auto variants = StateVariant::enumerate(parties, set);
  double total = 0.0;
  for (const auto& v : variants) total += conditional_detection_rate(attack, v);
  return total / static_cast<double>(variants.size());
}

/// Variant-averaged Eve information.
inline double averaged_eve_information(const AttackModel& attack, int parties,
                                       VariantSet set = VariantSet::listed) {
  const auto variants = StateVariant::enumerate(parties, set);
  double total = 0.0;
  for (const auto& v : variants) total += eve_mutual_information(attack, v);
  return total / static_cast<double>(variants.size());
}

}  // namespace ghzqss
