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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "ghzqss/attacks.hpp"
#include "ghzqss/errors.hpp"
#include "ghzqss/protocol.hpp"
#include "ghzqss/random.hpp"
#include "ghzqss/round.hpp"
#include "ghzqss/security.hpp"

namespace ghzqss {

inline constexpr std::int64_t kPlanningStream = -1;
inline constexpr std::int64_t kScheduleStream = -2;
inline constexpr std::int64_t kMessageStream = -3;

enum class SessionMode { sample, exact };

inline std::string_view to_string(SessionMode m) { return m == SessionMode::sample ? "sample" : "exact"; }

inline SessionMode parse_session_mode(std::string_view s) {
  if (s == "sample") return SessionMode::sample;
  if (s == "exact") return SessionMode::exact;
  throw ArgumentError("unknown mode '" + std::string(s) + "'");
}

struct SessionConfig {
  int parties = 3;
  std::size_t rounds = 100;
  double check_fraction = 0.5;
  AttackModel attack;
  std::uint64_t seed = 1;
  SessionMode mode = SessionMode::sample;
  /// Largest tolerated check error rate; detection is strictly greater.
  double abort_threshold = 0.0;
  Bits message;
  VariantSet variants = VariantSet::listed;

  std::size_t check_rounds() const { return check_round_count(rounds, check_fraction); }
  std::size_t message_rounds() const { return rounds - check_rounds(); }

  void validate() const {
    check_parties(parties);
    if (rounds == 0) throw ArgumentError("at least one round is required");
    if (!(check_fraction > 0.0 && check_fraction < 1.0)) {
      throw ArgumentError("check fraction must lie in (0, 1)");
    }
    if (!(abort_threshold >= 0.0 && abort_threshold <= 1.0)) {
      throw ArgumentError("abort threshold must lie in [0, 1]");
    }
    if (message.size() > message_rounds()) {
      throw ArgumentError("message of " + std::to_string(message.size()) +
                          " bits does not fit in " + std::to_string(message_rounds()) +
                          " message rounds");
    }
    attack.validate(parties);
    detail::check_round_capacity(parties, attack);
  }
};

struct VariantStats {
  std::size_t rounds = 0;
  std::size_t check_rounds = 0;
  std::size_t check_errors = 0;
};

struct SessionReport {
  SessionConfig config;
  std::size_t check_rounds = 0;
  std::size_t message_rounds = 0;
  std::size_t check_errors = 0;
  double check_error_rate = 0.0;
  bool detected = false;
  std::optional<Bits> recovered_message;          ///< absent when detected
  std::optional<double> message_bit_error_rate;   ///< absent when detected
  std::optional<double> eve_mutual_information;   ///< exact mode only
  std::optional<double> expected_check_error_rate;  ///< exact mode only
  std::map<std::string, VariantStats> per_variant_stats;
  std::string transcript_path = "transcript.jsonl";
};

struct SessionResult {
  Transcript transcript;
  SessionReport report;
};

struct RunOptions {
  unsigned threads = 1;
};

struct CheckResult {
  double error_rate;
  bool detected;
  std::size_t errors;
  std::size_t checks;
};

/// Step-7 check: fraction of check rounds whose recovered bit differs from the
/// payload. Every check round must have its receiver announcement in the log.
inline CheckResult eavesdrop_check(const Transcript& transcript, double abort_threshold) {
  std::map<std::size_t, const LogEntry*> announced;
  for (const auto& e : transcript.announcement_log) {
    if (e.event == LogEvent::check_results_announced && e.round) announced[*e.round] = &e;
  }
  std::size_t checks = 0;
  std::size_t errors = 0;
  for (const auto& r : transcript.rounds) {
    if (r.plan.role != RoundRole::check) continue;
    const auto it = announced.find(r.plan.round_index);
    if (it == announced.end()) {
      throw ArgumentError("check round " + std::to_string(r.plan.round_index) +
                          " has no receiver announcement");
    }
    if (!detail::is_receiver_permutation(it->second->order, transcript.parties)) {
      throw ArgumentError("check round " + std::to_string(r.plan.round_index) +
                          " announcement does not list every receiver once");
    }
    ++checks;
    if (r.recovered_bit() != r.plan.payload_bit) ++errors;
  }
  if (checks == 0) throw ArgumentError("transcript has no check rounds");
  const double rate = static_cast<double>(errors) / static_cast<double>(checks);
  return {rate, rate > abort_threshold, errors, checks};
}

namespace detail {

inline std::vector<RoundOutcome> simulate_all(const SessionConfig& config,
                                              const std::vector<RoundPlan>& plans,
                                              unsigned threads) {
  std::vector<std::optional<RoundOutcome>> slots(plans.size());
  auto collect = [&] {
    std::vector<RoundOutcome> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
  };
  auto run = [&](std::size_t i) {
    RandomStream rng = RandomStream::derive(config.seed, static_cast<std::int64_t>(i));
    slots[i] = simulate_round(plans[i], config.attack, rng);
  };
  if (threads <= 1 || plans.size() < 2) {
    for (std::size_t i = 0; i < plans.size(); ++i) run(i);
    return collect();
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const std::size_t workers = std::min<std::size_t>(threads, plans.size());
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < plans.size(); i += workers) run(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return collect();
}

}  // namespace detail

/// Runs all eight protocol steps over `config.rounds` rounds and aggregates the
/// report. Output depends only on the config: round i always draws from stream
/// (seed, i), so the thread count does not change the result.
inline SessionResult run_session(const SessionConfig& config, RunOptions options = {}) {
  config.validate();
  const int n = config.parties;

  RandomStream planning = RandomStream::derive(config.seed, kPlanningStream);
  const std::vector<RoundPlan> plans =
      plan_sequences(n, config.rounds, config.check_fraction, config.message, planning,
                     config.variants);

  Transcript transcript;
  transcript.parties = n;
  auto& log = transcript.announcement_log;

  // Steps 1-2: distribution, optional tap in flight, receipt, then the variant
  // announcement and the receivers' corrections.
  log.push_back({LogEvent::particles_sent});
  if (config.attack.kind != AttackKind::none) {
    log.push_back({LogEvent::channel_tap, config.attack.insider});
  }
  for (int p = 2; p <= n; ++p) log.push_back({LogEvent::receipt_confirmed, p});
  log.push_back({LogEvent::variants_announced});
  for (int p = 2; p <= n; ++p) log.push_back({LogEvent::corrections_done, p});

  // Steps 3-6.
  transcript.rounds = detail::simulate_all(config, plans, options.threads);
  log.push_back({LogEvent::measurements_done});

  // Step 7.
  std::vector<std::size_t> check_indices;
  for (const auto& p : plans) {
    if (p.role == RoundRole::check) check_indices.push_back(p.round_index);
  }
  log.push_back({LogEvent::check_positions_disclosed});
  RandomStream schedule_rng = RandomStream::derive(config.seed, kScheduleStream);
  const auto orders = announcement_schedule(check_indices, n, schedule_rng);
  for (std::size_t i = 0; i < check_indices.size(); ++i) {
    transcript.rounds[check_indices[i]].announcement_order = orders[i];
    log.push_back({LogEvent::check_results_announced, 0, check_indices[i], orders[i]});
  }
  const CheckResult check = eavesdrop_check(transcript, config.abort_threshold);
  log.push_back({LogEvent::check_verdict});

  SessionReport report;
  report.config = config;
  report.check_rounds = check.checks;
  report.message_rounds = plans.size() - check.checks;
  report.check_errors = check.errors;
  report.check_error_rate = check.error_rate;
  report.detected = check.detected;

  // Step 8, only when the check passed.
  if (!check.detected) {
    log.push_back({LogEvent::message_results_announced});
    Bits recovered;
    std::size_t mismatches = 0;
    for (const auto& r : transcript.rounds) {
      if (r.plan.role != RoundRole::message || recovered.size() == config.message.size()) continue;
      const int bit = r.recovered_bit();
      if (bit != config.message[recovered.size()]) ++mismatches;
      recovered.push_back(static_cast<std::uint8_t>(bit));
    }
    report.message_bit_error_rate =
        config.message.empty()
            ? 0.0
            : static_cast<double>(mismatches) / static_cast<double>(config.message.size());
    report.recovered_message = std::move(recovered);
  } else {
    log.push_back({LogEvent::session_aborted});
  }

  for (const auto& r : transcript.rounds) {
    VariantStats& s = report.per_variant_stats[r.plan.variant.name()];
    ++s.rounds;
    if (r.plan.role == RoundRole::check) {
      ++s.check_rounds;
      if (r.recovered_bit() != r.plan.payload_bit) ++s.check_errors;
    }
  }

  if (config.mode == SessionMode::exact) {
    report.eve_mutual_information = averaged_eve_information(config.attack, n, config.variants);
    std::map<std::pair<StateVariant, int>, double> cache;
    double expected = 0.0;
    for (std::size_t idx : check_indices) {
      const RoundPlan& p = plans[idx];
      auto key = std::make_pair(p.variant, p.payload_bit);
      auto it = cache.find(key);
      if (it == cache.end()) {
        const double e = exact_round_analysis(p.variant, p.payload_bit, config.attack)
                             .error_probability(p.payload_bit);
        it = cache.emplace(std::move(key), e).first;
      }
      expected += it->second;
    }
    report.expected_check_error_rate = expected / static_cast<double>(check_indices.size());
  }

  validate_announcement_log(transcript);
  return {std::move(transcript), std::move(report)};
}

}  // namespace ghzqss
