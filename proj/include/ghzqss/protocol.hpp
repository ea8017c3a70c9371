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
 * The (n, n) threshold sharing round: variant GHZ preparation, receiver
 * Hadamard correction, Alice's ancilla encoding, fixed-basis measurement and
 * parity recovery, plus sequence planning and the check announcement schedule.
 *
 * Parties are numbered 1..n: party 1 is Alice (particle a1, "A"), parties
 * 2..n are the receivers. Inside a round register the layout is
 * [a, a1, a2, ..., an, attack ancillas...], where a is Alice's encoding
 * ancilla. Before encoding the ancilla is absent and party p sits at qubit p-1.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghzqss/attacks.hpp"
#include "ghzqss/errors.hpp"
#include "ghzqss/measurement.hpp"
#include "ghzqss/random.hpp"
#include "ghzqss/state_vector.hpp"

namespace ghzqss {

using Bits = std::vector<std::uint8_t>;

inline Bits parse_bits(std::string_view text) {
  Bits bits;
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ' ' && c != '\n' && c != '\r' && c != '\t') {
      throw ArgumentError(std::string("message contains non-bit character '") + c + "'");
    }
  }
  return bits;
}

inline std::string format_bits(std::span<const std::uint8_t> bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

/// Receiver signs as a +/- string, receiver 2 first.
inline std::string format_signs(std::span<const int> signs) {
  std::string out;
  for (int s : signs) out.push_back(s ? '-' : '+');
  return out;
}

inline void check_parties(int parties) {
  if (parties < 3) throw ArgumentError("at least 3 parties are required, got " +
                                       std::to_string(parties));
  if (static_cast<std::size_t>(parties) > kMaxQubits) {
    throw CapacityError(std::to_string(parties) + " parties exceed the " +
                        std::to_string(kMaxQubits) + "-qubit register cap");
  }
}

/// Which preparations are drawn: the n+1 listed states, or every Hadamard subset.
enum class VariantSet { listed, all_subsets };

inline std::string_view to_string(VariantSet set) {
  return set == VariantSet::listed ? "listed" : "all-subsets";
}

/// A prepared GHZ variant: the receivers whose particle is in the X-basis arm.
class StateVariant {
 public:
  StateVariant(int parties, std::vector<int> hadamard_positions,
               VariantSet set = VariantSet::listed)
      : parties_(parties), positions_(std::move(hadamard_positions)) {
    check_parties(parties_);
    std::sort(positions_.begin(), positions_.end());
    if (std::adjacent_find(positions_.begin(), positions_.end()) != positions_.end()) {
      throw ArgumentError("duplicate Hadamard position");
    }
    for (int p : positions_) {
      if (p < 2 || p > parties_) {
        throw ArgumentError("Hadamard position " + std::to_string(p) + " not in [2, " +
                            std::to_string(parties_) + "]");
      }
    }
    if (set == VariantSet::listed && !is_listed()) {
      throw ArgumentError("Hadamard set is not one of the " + std::to_string(parties_ + 1) +
                          " listed variants");
    }
  }

  /// Listed variant k in [0, n]: 0 is the plain GHZ state, 1..n-1 put receiver k+1
  /// in the X arm, n puts every receiver in the X arm.
  static StateVariant listed_at(int parties, int k) {
    check_parties(parties);
    if (k < 0 || k > parties) throw ArgumentError("listed variant index out of range");
    if (k == 0) return StateVariant(parties, {});
    if (k < parties) return StateVariant(parties, {k + 1});
    std::vector<int> all;
    for (int p = 2; p <= parties; ++p) all.push_back(p);
    return StateVariant(parties, std::move(all));
  }

  static std::vector<StateVariant> listed(int parties) {
    std::vector<StateVariant> out;
    for (int k = 0; k <= parties; ++k) out.push_back(listed_at(parties, k));
    return out;
  }

  /// Receiver subset from a bit mask: bit (p - 2) selects receiver p.
  static StateVariant from_mask(int parties, std::uint64_t mask) {
    std::vector<int> positions;
    for (int p = 2; p <= parties; ++p) {
      if ((mask >> (p - 2)) & 1U) positions.push_back(p);
    }
    return StateVariant(parties, std::move(positions), VariantSet::all_subsets);
  }

  static std::vector<StateVariant> all_subsets(int parties) {
    check_parties(parties);
    std::vector<StateVariant> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << (parties - 1)); ++m) {
      out.push_back(from_mask(parties, m));
    }
    return out;
  }

  static std::vector<StateVariant> enumerate(int parties, VariantSet set) {
    return set == VariantSet::listed ? listed(parties) : all_subsets(parties);
  }

  /// Accepts psi<k> / Psi<k> (case-insensitive), k in [1, n+1].
  static StateVariant parse(int parties, std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower.size() > 3 && lower.starts_with("psi")) {
      const std::string digits = lower.substr(3);
      if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
          digits.size() < 4) {
        const int k = std::stoi(digits);
        if (k >= 1 && k <= parties + 1) return listed_at(parties, k - 1);
      }
    }
    throw ArgumentError("unknown variant '" + std::string(name) + "' for " +
                        std::to_string(parties) + " parties (expected psi1..psi" +
                        std::to_string(parties + 1) + ")");
  }

  int parties() const { return parties_; }
  const std::vector<int>& hadamard_positions() const { return positions_; }

  bool has_hadamard(int party) const {
    return std::binary_search(positions_.begin(), positions_.end(), party);
  }

  bool is_listed() const {
    return positions_.size() <= 1 || static_cast<int>(positions_.size()) == parties_ - 1;
  }

  /// psi1..psi4 for three parties, Psi1..Psi{n+1} otherwise; H{...} for unlisted subsets.
  std::string name() const {
    if (!is_listed()) {
      std::string out = "H{";
      for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(positions_[i]);
      }
      return out + "}";
    }
    int k = 1;
    if (static_cast<int>(positions_.size()) == parties_ - 1) {
      k = parties_ + 1;
    } else if (!positions_.empty()) {
      k = positions_[0];
    }
    return (parties_ == 3 ? "psi" : "Psi") + std::to_string(k);
  }

  friend auto operator<=>(const StateVariant&, const StateVariant&) = default;
  friend bool operator==(const StateVariant&, const StateVariant&) = default;

 private:
  int parties_;
  std::vector<int> positions_;
};

/// (|0>_{a1} (x) s0 + |1>_{a1} (x) s1) / sqrt2, where receiver p carries |0>/|1>, or
/// |+>/|-> when p is a Hadamard position.
inline StateVector prepare_variant(const StateVariant& variant) {
  const int n = variant.parties();
  std::vector<bool> x_arm(static_cast<std::size_t>(n) + 1, false);
  for (int p : variant.hadamard_positions()) x_arm[static_cast<std::size_t>(p)] = true;

  const std::size_t dim = std::size_t{1} << n;
  std::vector<Amplitude> amps(dim);
  for (std::size_t index = 0; index < dim; ++index) {
    double branch[2] = {kInvSqrt2, kInvSqrt2};
    for (int p = 1; p <= n; ++p) {
      const int bit = static_cast<int>((index >> (n - p)) & 1U);
      for (int b = 0; b < 2; ++b) {
        if (x_arm[static_cast<std::size_t>(p)]) {
          branch[b] *= (b == 1 && bit == 1) ? -kInvSqrt2 : kInvSqrt2;
        } else if (bit != b) {
          branch[b] = 0.0;
        }
      }
    }
    amps[index] = branch[0] + branch[1];
  }
  return StateVector(static_cast<std::size_t>(n), std::move(amps));
}

/// Each receiver in a Hadamard position applies H to its particle, mapping every
/// variant back to the plain GHZ state. Qubits past the n parties are untouched.
inline StateVector receiver_correction(StateVector state, const StateVariant& variant) {
  if (state.num_qubits() < static_cast<std::size_t>(variant.parties())) {
    throw ArgumentError("register smaller than the party count");
  }
  for (int p : variant.hadamard_positions()) {
    state = apply_hadamard(std::move(state), QubitIndex{static_cast<std::size_t>(p - 1)});
  }
  return state;
}

/// Front-appends Alice's ancilla (|+> for 0, |-> for 1), then CNOT(a -> a1) and H(a).
inline StateVector encode_round(const StateVector& ghz, int payload_bit) {
  if (payload_bit != 0 && payload_bit != 1) throw ArgumentError("payload bit must be 0 or 1");
  StateVector s = append_ancilla(ghz, payload_bit ? StateVector::minus() : StateVector::plus(),
                                 AncillaPosition::front);
  s = apply_cnot(std::move(s), QubitIndex{0}, QubitIndex{1});
  return apply_hadamard(std::move(s), QubitIndex{0});
}

/// Recovery rule: Alice's ancilla bit XOR the parity of the receivers' X signs.
inline int recover_secret(int alice_a, std::span<const int> receiver_signs) {
  int bit = alice_a & 1;
  for (int s : receiver_signs) bit ^= (s & 1);
  return bit;
}

struct MeasuredRound {
  int alice_a;
  int alice_A;
  std::vector<int> receiver_signs;  ///< receiver 2 first
  StateVector state;                ///< post-measurement register
};

/// Alice Z-measures a and a1; every receiver X-measures its particle. Draws one
/// uniform per measurement in the order a, a1, receivers ascending. A withheld
/// receiver is skipped (its sign is left 0 for the caller to fill in).
inline MeasuredRound measure_round(StateVector state, int parties, RandomStream& rng,
                                   std::optional<int> withheld_receiver = std::nullopt) {
  if (state.num_qubits() < static_cast<std::size_t>(parties) + 1) {
    throw ArgumentError("round register smaller than n + 1 qubits");
  }
  Measured ma = measure_z(state, QubitIndex{0}, rng.uniform());
  Measured mA = measure_z(ma.state, QubitIndex{1}, rng.uniform());
  state = std::move(mA.state);
  std::vector<int> signs(static_cast<std::size_t>(parties - 1), 0);
  for (int p = 2; p <= parties; ++p) {
    if (withheld_receiver && *withheld_receiver == p) continue;
    Measured mx = measure_x(state, QubitIndex{static_cast<std::size_t>(p)}, rng.uniform());
    signs[static_cast<std::size_t>(p - 2)] = mx.outcome.value;
    state = std::move(mx.state);
  }
  return {ma.outcome.value, mA.outcome.value, std::move(signs), std::move(state)};
}

/// Conditional state of the qubits after a and a1 given Alice's Z results, or
/// empty when that branch has zero probability.
inline std::optional<StateVector> receiver_branch(const StateVector& encoded, int alice_a,
                                                  int alice_A) {
  if (encoded.num_qubits() < 3) throw ArgumentError("encoded register too small");
  const std::size_t rest = encoded.num_qubits() - 2;
  const std::size_t offset = (static_cast<std::size_t>((alice_a & 1) << 1 | (alice_A & 1))) << rest;
  std::vector<Amplitude> amps(encoded.amplitudes().begin() + static_cast<std::ptrdiff_t>(offset),
                              encoded.amplitudes().begin() +
                                  static_cast<std::ptrdiff_t>(offset + (std::size_t{1} << rest)));
  double p = 0.0;
  for (const auto& a : amps) p += std::norm(a);
  if (p <= kTruncation) return std::nullopt;
  for (auto& a : amps) a /= std::sqrt(p);
  return StateVector(rest, std::move(amps));
}

/// Rewrites a state in the X basis: amplitude at index s is the coefficient of the
/// sign string s (bit 1 = |->).
inline StateVector x_basis_expansion(StateVector state) {
  for (std::size_t q = 0; q < state.num_qubits(); ++q) {
    state = apply_hadamard(std::move(state), QubitIndex{q});
  }
  return state;
}

enum class RoundRole { check, message };

inline std::string_view to_string(RoundRole role) {
  return role == RoundRole::check ? "check" : "message";
}

struct RoundPlan {
  std::size_t round_index;
  StateVariant variant;
  RoundRole role;
  int payload_bit;

  friend bool operator==(const RoundPlan&, const RoundPlan&) = default;
};

struct RoundOutcome {
  RoundPlan plan;
  int alice_a = 0;
  int alice_A = 0;
  std::vector<int> receiver_signs = {};
  std::optional<EveRecord> eve_record = std::nullopt;
  std::vector<int> announcement_order = {};  ///< check rounds only

  int recovered_bit() const { return recover_secret(alice_a, receiver_signs); }

  friend bool operator==(const RoundOutcome&, const RoundOutcome&) = default;
};

/// Classical and channel events in the order they happen.
enum class LogEvent {
  particles_sent,
  channel_tap,
  receipt_confirmed,
  variants_announced,
  corrections_done,
  measurements_done,
  check_positions_disclosed,
  check_results_announced,
  check_verdict,
  message_results_announced,
  session_aborted,
};

inline std::string_view to_string(LogEvent e) {
  switch (e) {
    case LogEvent::particles_sent: return "particles_sent";
    case LogEvent::channel_tap: return "channel_tap";
    case LogEvent::receipt_confirmed: return "receipt_confirmed";
    case LogEvent::variants_announced: return "variants_announced";
    case LogEvent::corrections_done: return "corrections_done";
    case LogEvent::measurements_done: return "measurements_done";
    case LogEvent::check_positions_disclosed: return "check_positions_disclosed";
    case LogEvent::check_results_announced: return "check_results_announced";
    case LogEvent::check_verdict: return "check_verdict";
    case LogEvent::message_results_announced: return "message_results_announced";
    case LogEvent::session_aborted: return "session_aborted";
  }
  return "?";
}

struct LogEntry {
  LogEvent event;
  int party = 0;                      ///< 0 when not party-specific
  std::optional<std::size_t> round = std::nullopt;  ///< set for per-round announcements
  std::vector<int> order = {};                      ///< receiver announcement order

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

struct Transcript {
  int parties = 3;
  std::vector<RoundOutcome> rounds;
  std::vector<LogEntry> announcement_log;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

namespace detail {

inline bool is_receiver_permutation(std::vector<int> order, int parties) {
  if (order.size() != static_cast<std::size_t>(parties - 1)) return false;
  std::sort(order.begin(), order.end());
  for (int i = 0; i < parties - 1; ++i) {
    if (order[static_cast<std::size_t>(i)] != i + 2) return false;
  }
  return true;
}

}  // namespace detail

/// Rejects logs that break the protocol's ordering: channel taps after the
/// variant announcement, the announcement before every receiver confirmed
/// receipt, a check announcement that does not list each receiver exactly once,
/// or Alice's message results published in an aborted session.
inline void validate_announcement_log(const Transcript& transcript) {
  const int n = transcript.parties;
  bool announced = false;
  bool aborted = false;
  bool published = false;
  std::vector<bool> receipt(static_cast<std::size_t>(n) + 1, false);
  for (const auto& e : transcript.announcement_log) {
    switch (e.event) {
      case LogEvent::channel_tap:
        if (announced) throw ArgumentError("channel tap after the variant announcement");
        break;
      case LogEvent::receipt_confirmed:
        if (e.party < 2 || e.party > n) throw ArgumentError("receipt from a non-receiver");
        receipt[static_cast<std::size_t>(e.party)] = true;
        break;
      case LogEvent::variants_announced:
        if (announced) throw ArgumentError("variants announced twice");
        for (int p = 2; p <= n; ++p) {
          if (!receipt[static_cast<std::size_t>(p)]) {
            throw ArgumentError("variants announced before receiver " + std::to_string(p) +
                                " confirmed receipt");
          }
        }
        announced = true;
        break;
      case LogEvent::check_results_announced:
        if (!detail::is_receiver_permutation(e.order, n)) {
          throw ArgumentError("check announcement must list every receiver exactly once");
        }
        break;
      case LogEvent::message_results_announced:
        if (aborted) throw ArgumentError("message results published after abort");
        published = true;
        break;
      case LogEvent::session_aborted:
        if (published) throw ArgumentError("session aborted after publishing message results");
        aborted = true;
        break;
      default:
        break;
    }
  }
}

inline std::size_t check_round_count(std::size_t rounds, double check_fraction) {
  // The epsilon absorbs representation error in products like 10 * 0.2.
  return static_cast<std::size_t>(std::ceil(static_cast<double>(rounds) * check_fraction - 1e-9));
}

namespace detail {

template <typename T>
void shuffle(std::vector<T>& items, RandomStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[static_cast<std::size_t>(rng.below(i))]);
  }
}

}  // namespace detail

/// Splits N rounds into a uniformly random check subset of size ceil(N * fraction)
/// and message rounds, draws a uniform variant per round and a uniform payload bit
/// per check round. Message bits fill the message rounds in order; message rounds
/// beyond the message carry random padding.
inline std::vector<RoundPlan> plan_sequences(int parties, std::size_t rounds,
                                             double check_fraction, const Bits& message,
                                             RandomStream& rng,
                                             VariantSet variants = VariantSet::listed) {
  check_parties(parties);
  if (rounds == 0) throw ArgumentError("at least one round is required");
  if (!(check_fraction > 0.0 && check_fraction < 1.0)) {
    throw ArgumentError("check fraction must lie in (0, 1)");
  }
  const std::size_t checks = check_round_count(rounds, check_fraction);
  if (checks + message.size() > rounds) {
    throw ArgumentError("message of " + std::to_string(message.size()) + " bits needs more than the " +
                        std::to_string(rounds - checks) + " available message rounds");
  }

  std::vector<std::size_t> indices(rounds);
  for (std::size_t i = 0; i < rounds; ++i) indices[i] = i;
  // Partial Fisher-Yates: the first `checks` slots become the check subset.
  for (std::size_t i = 0; i < checks; ++i) {
    std::swap(indices[i], indices[i + static_cast<std::size_t>(rng.below(rounds - i))]);
  }
  std::vector<bool> is_check(rounds, false);
  for (std::size_t i = 0; i < checks; ++i) is_check[indices[i]] = true;

  std::vector<RoundPlan> plans;
  plans.reserve(rounds);
  for (std::size_t r = 0; r < rounds; ++r) {
    StateVariant v = variants == VariantSet::listed
                         ? StateVariant::listed_at(parties, static_cast<int>(rng.below(
                                                                static_cast<std::uint64_t>(parties) + 1)))
                         : StateVariant::from_mask(parties, rng.below(std::uint64_t{1} << (parties - 1)));
    plans.push_back({r, std::move(v), is_check[r] ? RoundRole::check : RoundRole::message, 0});
  }
  std::size_t message_slot = 0;
  for (auto& plan : plans) {
    if (plan.role == RoundRole::check) {
      plan.payload_bit = rng.bit();
    } else if (message_slot < message.size()) {
      plan.payload_bit = message[message_slot++];
    } else {
      plan.payload_bit = rng.bit();
    }
  }
  return plans;
}

/// Per check round, the order in which receivers announce their signs. With
/// three parties a random half of the check rounds is receiver-2-first (the
/// first floor(count/2) after shuffling) and the rest receiver-3-first; with more
/// parties each check round gets an independent uniform permutation.
inline std::vector<std::vector<int>> announcement_schedule(std::span<const std::size_t> check_indices,
                                                           int parties, RandomStream& rng) {
  check_parties(parties);
  std::vector<std::vector<int>> orders(check_indices.size());
  if (parties == 3) {
    std::vector<std::size_t> slots(check_indices.size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
    detail::shuffle(slots, rng);
    const std::size_t first_half = slots.size() / 2;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      orders[slots[i]] = i < first_half ? std::vector<int>{2, 3} : std::vector<int>{3, 2};
    }
    return orders;
  }
  for (auto& order : orders) {
    for (int p = 2; p <= parties; ++p) order.push_back(p);
    detail::shuffle(order, rng);
  }
  return orders;
}

}  // namespace ghzqss
