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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ghzqss/cli.hpp"
#include "ghzqss/ghzqss.hpp"
#include "ghzqss/io.hpp"

namespace {

using namespace ghzqss;

constexpr double kExactTolerance = 1e-10;
constexpr double kSigmas = 3.0;
constexpr std::uint64_t kSeed = 20260101;
// Variant-averaged intercept-resend check error rate at n = 3 (exact oracle).
constexpr double kInterceptAveragedRate = 0.25;

struct Verdict {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // 0 = no limit
  std::function<Verdict()> run;
};

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

StateVariant psi(int k) { return StateVariant::listed_at(3, k - 1); }

Verdict table1() {
  std::ostringstream out;
  const int code = cli::cmd_table1(out);
  return {code == cli::kExitOk, code == cli::kExitOk ? "8/8 rows match" : out.str()};
}

Verdict exact_recovery() {
  double worst = 0.0;
  int cases = 0;
  for (int n = 3; n <= 6; ++n) {
    for (const auto& v : StateVariant::listed(n)) {
      for (int payload = 0; payload < 2; ++payload) {
        worst = std::max(worst, exact_round_analysis(v, payload, AttackModel{}).error_probability(payload));
        ++cases;
      }
    }
  }
  return {worst < kExactTolerance, std::to_string(cases) + " cases, max wrong-recovery mass " + fmt(worst)};
}

Verdict sampled_recovery() {
  SessionConfig c;
  c.rounds = 10000;
  c.seed = kSeed;
  RandomStream rng = RandomStream::derive(kSeed, kMessageStream);
  for (std::size_t i = 0; i < c.message_rounds(); ++i) c.message.push_back(static_cast<std::uint8_t>(rng.bit()));
  const SessionReport r = run_session(c).report;
  const bool ok = r.check_error_rate == 0.0 && !r.detected && r.message_bit_error_rate &&
                  *r.message_bit_error_rate == 0.0 && r.recovered_message == c.message;
  return {ok, "check_error_rate=" + fmt(r.check_error_rate) + " message_ber=" +
                  (r.message_bit_error_rate ? fmt(*r.message_bit_error_rate) : std::string("n/a")) +
                  " message_bits=" + std::to_string(c.message.size())};
}

Verdict parity_structure() {
  for (int n = 3; n <= 8; ++n) {
    const StateVector encoded_ghz = prepare_variant(StateVariant(n, {}));
    const double magnitude = std::pow(2.0, -(n - 2) / 2.0);
    for (int payload = 0; payload < 2; ++payload) {
      const StateVector s = encode_round(encoded_ghz, payload);
      for (int a = 0; a < 2; ++a) {
        for (int A = 0; A < 2; ++A) {
          const auto branch = receiver_branch(s, a, A);
          if (!branch) return {false, "empty branch at n=" + std::to_string(n)};
          const StateVector x = x_basis_expansion(*branch);
          int terms = 0;
          for (std::size_t i = 0; i < x.dimension(); ++i) {
            const double amp = std::abs(x[i]);
            if (amp < kExactTolerance) continue;
            ++terms;
            if (std::abs(amp - magnitude) > kExactTolerance || std::popcount(i) % 2 != (payload ^ a)) {
              return {false, "bad term at n=" + std::to_string(n) + " payload " + std::to_string(payload)};
            }
          }
          if (terms != 1 << (n - 2)) {
            return {false, "n=" + std::to_string(n) + " has " + std::to_string(terms) + " terms"};
          }
        }
      }
    }
  }
  return {true, "n=3..8: 2^(n-2) equal-magnitude terms, payload 0 even, payload 1 odd"};
}

Verdict intercept_half() {
  const AttackModel attack{AttackKind::intercept_resend_bell};
  const double r20 = conditional_detection_rate(attack, psi(2), 0);
  const double r30 = conditional_detection_rate(attack, psi(3), 0);
  const double r21 = conditional_detection_rate(attack, psi(2), 1);
  const bool ok = std::abs(r20 - 0.5) < kExactTolerance && std::abs(r30 - 0.5) < kExactTolerance &&
                  std::abs(r21 - 0.5) < kExactTolerance;
  return {ok, "psi2|0=" + fmt(r20, 12) + " psi3|0=" + fmt(r30, 12) + " psi2|1=" + fmt(r21, 12)};
}

Verdict collective_zero_information() {
  const std::vector<std::pair<AttackKind, int>> cases{{AttackKind::collective_cnot, 1},
                                                      {AttackKind::collective_cnot, 2},
                                                      {AttackKind::collective_h_cnot, 3},
                                                      {AttackKind::collective_h_cnot, 4}};
  double worst_info = 0.0;
  double worst_split = 0.0;
  for (const auto& [kind, k] : cases) {
    const AttackModel attack{kind};
    worst_info = std::max(worst_info, eve_mutual_information(attack, psi(k)));
    const auto eve = eve_record_distribution(attack, psi(k));
    const double expected[4] = {0.5, 0.5, 0.0, 0.0};
    for (int i = 0; i < 4; ++i) worst_split = std::max(worst_split, std::abs(eve[static_cast<std::size_t>(i)] - expected[i]));
  }
  return {worst_info < kExactTolerance && worst_split < kExactTolerance,
          "max mutual information " + fmt(worst_info) + ", max deviation from {1/2, 1/2, 0, 0} " + fmt(worst_split)};
}

Verdict statistical_detection() {
  const AttackModel attack{AttackKind::intercept_resend_bell};
  const double oracle_rate = averaged_detection_rate(attack, 3);
  if (std::abs(oracle_rate - kInterceptAveragedRate) > kExactTolerance) {
    return {false, "oracle rate " + fmt(oracle_rate) + " drifted from pinned " + fmt(kInterceptAveragedRate)};
  }
  SessionConfig c;
  c.rounds = 2000;
  c.attack = attack;
  c.abort_threshold = 0.05;
  c.seed = kSeed;
  const SessionReport r = run_session(c).report;
  const double se = std::sqrt(oracle_rate * (1 - oracle_rate) / static_cast<double>(r.check_rounds));
  const double z = (r.check_error_rate - oracle_rate) / se;
  return {r.detected && std::abs(z) <= kSigmas,
          std::string("detected=") + (r.detected ? "true" : "false") + " rate=" + fmt(r.check_error_rate) +
              " oracle=" + fmt(oracle_rate) + " z=" + fmt(z, 3)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  SessionConfig c;
  c.rounds = 1000;
  c.attack = AttackModel{AttackKind::collective_cnot};
  c.abort_threshold = 1.0;
  c.seed = kSeed;
  RandomStream rng = RandomStream::derive(kSeed, kMessageStream);
  for (std::size_t i = 0; i < 200; ++i) c.message.push_back(static_cast<std::uint8_t>(rng.bit()));
  const auto root = std::filesystem::temp_directory_path() / "ghzqss_acceptance_determinism";
  std::filesystem::remove_all(root);
  const auto first = io::write_session(run_session(c), root / "first");
  const auto second = io::write_session(run_session(c, RunOptions{4}), root / "second");
  const bool transcript_same = slurp(first.transcript) == slurp(second.transcript);
  const bool report_same = slurp(first.report) == slurp(second.report);
  std::filesystem::remove_all(root);
  return {transcript_same && report_same, std::string("transcript ") + (transcript_same ? "identical" : "differs") +
                                              ", report " + (report_same ? "identical" : "differs")};
}

Verdict oracle_sample_agreement() {
  constexpr int kTrials = 100000;
  const std::vector<AttackKind> attacks{AttackKind::none, AttackKind::intercept_resend_bell,
                                        AttackKind::collective_cnot, AttackKind::collective_h_cnot};
  int configs = 0;
  int cells = 0;
  int outside = 0;
  int impossible_hits = 0;
  double worst_z = 0.0;
  std::string worst_where;
  for (AttackKind kind : attacks) {
    const AttackModel attack{kind};
    for (int k = 1; k <= 4; ++k) {
      for (int payload = 0; payload < 2; ++payload) {
        const RoundPlan plan{0, psi(k), RoundRole::check, payload};
        const RoundDistribution exact = exact_round_analysis(plan.variant, payload, attack);
        std::vector<int> counts(exact.size(), 0);
        const std::uint64_t stream_seed = kSeed + static_cast<std::uint64_t>(configs);
        for (int t = 0; t < kTrials; ++t) {
          RandomStream rng = RandomStream::derive(stream_seed, t);
          ++counts[exact.code(simulate_round(plan, attack, rng))];
        }
        for (std::size_t c = 0; c < exact.size(); ++c) {
          const double p = exact[c];
          if (p <= kTruncation) {
            impossible_hits += counts[c];
            continue;
          }
          ++cells;
          const double se = std::sqrt(p * (1 - p) / kTrials);
          const double z = (counts[c] / double(kTrials) - p) / se;
          if (std::abs(z) > kSigmas) ++outside;
          if (std::abs(z) > std::abs(worst_z)) {
            worst_z = z;
            worst_where = std::string(to_string(kind)) + "/" + plan.variant.name() + "/payload" +
                          std::to_string(payload) + "/cell" + std::to_string(c);
          }
        }
        ++configs;
      }
    }
  }
  return {outside == 0 && impossible_hits == 0,
          std::to_string(configs) + " configs x " + std::to_string(kTrials) + " rounds, " + std::to_string(cells) +
              " cells, " + std::to_string(outside) + " outside 3 SE, " + std::to_string(impossible_hits) +
              " impossible outcomes, max |z| " + fmt(std::abs(worst_z), 3) + " at " + worst_where +
              ", chance-level exceedances " + fmt(cells * std::erfc(kSigmas / std::sqrt(2.0)), 3)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"table1-reproduction", 1.0, table1},
      {"perfect-recovery-exact", 10.0, exact_recovery},
      {"perfect-recovery-sampled", 5.0, sampled_recovery},
      {"parity-structure", 5.0, parity_structure},
      {"intercept-resend-50-percent", 0.0, intercept_half},
      {"collective-zero-information", 0.0, collective_zero_information},
      {"statistical-detection", 10.0, statistical_detection},
      {"determinism", 0.0, determinism},
      {"oracle-sample-agreement", 60.0, oracle_sample_agreement},
  };
  int passed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s == 0.0 || elapsed < c.time_limit_s;
    const bool ok = v.pass && in_time;
    passed += ok ? 1 : 0;
    std::cout << (ok ? "PASS " : "FAIL ") << c.name << ": " << v.detail << " [" << fmt(elapsed, 3) << " s";
    if (c.time_limit_s > 0.0) std::cout << ", limit " << fmt(c.time_limit_s, 3) << " s";
    std::cout << "]" << (in_time ? "" : " TIME LIMIT EXCEEDED") << '\n';
  }
  std::cout << "acceptance: " << passed << "/" << criteria.size() << " criteria passed\n";
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
