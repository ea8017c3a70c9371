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
 * Command-line front end: `run`, `analyze` and `table1`.
 *
 * Exit codes: 0 success, 1 operational failure (I/O, recovery table mismatch),
 * 2 usage error, 3 register capacity exceeded.
 */

#pragma once

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ghzqss/attacks.hpp"
#include "ghzqss/errors.hpp"
#include "ghzqss/io.hpp"
#include "ghzqss/protocol.hpp"
#include "ghzqss/round.hpp"
#include "ghzqss/security.hpp"
#include "ghzqss/session.hpp"

namespace ghzqss::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

/// Environment variable naming the default output directory of `run`.
inline constexpr const char* kOutDirEnv = "GHZQSS_OUT_DIR";

struct Table1Row {
  int alice;
  int bob_sign;
  int charlie_sign;
  int secret;
};

/// The published recovery table (sign 0 = |+>, 1 = |->).
inline constexpr std::array<Table1Row, 8> kTable1{{
    {0, 0, 0, 0},
    {0, 0, 1, 1},
    {0, 1, 0, 1},
    {0, 1, 1, 0},
    {1, 0, 0, 1},
    {1, 0, 1, 0},
    {1, 1, 0, 0},
    {1, 1, 1, 1},
}};

inline int cmd_table1(std::ostream& out) {
  out << "alice bob charlie recovered published\n";
  int matches = 0;
  for (const auto& row : kTable1) {
    const std::array<int, 2> signs{row.bob_sign, row.charlie_sign};
    const int recovered = recover_secret(row.alice, signs);
    const bool ok = recovered == row.secret;
    matches += ok ? 1 : 0;
    out << row.alice << "     " << (row.bob_sign ? "-" : "+") << "   "
        << (row.charlie_sign ? "-" : "+") << "       " << recovered << "         " << row.secret
        << (ok ? "" : "  MISMATCH") << '\n';
  }
  out << "table1: " << matches << "/" << kTable1.size() << " rows match\n";
  return matches == static_cast<int>(kTable1.size()) ? kExitOk : kExitFailure;
}

struct AttackFlags {
  std::string kind = "none";
  std::optional<int> target;
  int insider = 2;

  void add_to(CLI::App& app) {
    app.add_option("--attack", kind, "none | intercept-resend | collective-cnot | collective-h-cnot")
        ->capture_default_str();
    app.add_option("--target-receiver", target, "receiver whose particle is intercepted (default: last)");
    app.add_option("--insider", insider, "dishonest receiver running the attack")->capture_default_str();
  }

  AttackModel model() const { return AttackModel{parse_attack_kind(kind), target, insider}; }
};

struct RunFlags {
  SessionConfig config;
  AttackFlags attack;
  std::string mode = "sample";
  std::optional<std::string> message_file;
  std::optional<std::size_t> random_message;
  bool all_subsets = false;
  std::optional<std::string> out_dir;
  unsigned threads = 1;
};

inline Bits read_message_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read message file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_bits(buffer.str());
}

/// Resolves parsed flags into a validated session config.
inline SessionConfig build_config(const RunFlags& f) {
  SessionConfig c = f.config;
  c.attack = f.attack.model();
  c.mode = parse_session_mode(f.mode);
  c.variants = f.all_subsets ? VariantSet::all_subsets : VariantSet::listed;
  if (f.message_file) {
    c.message = read_message_file(*f.message_file);
  } else {
    // Default: a random message filling every message round.
    const std::size_t len = f.random_message.value_or(
        c.rounds >= 1 && c.check_fraction > 0.0 && c.check_fraction < 1.0 ? c.message_rounds() : 0);
    RandomStream rng = RandomStream::derive(c.seed, kMessageStream);
    c.message.clear();
    for (std::size_t i = 0; i < len; ++i) c.message.push_back(static_cast<std::uint8_t>(rng.bit()));
  }
  c.validate();
  return c;
}

inline int cmd_run(const RunFlags& flags, std::ostream& out) {
  const SessionConfig config = build_config(flags);
  const SessionResult result = run_session(config, RunOptions{flags.threads});
  std::filesystem::path dir = ".";
  if (flags.out_dir) {
    dir = *flags.out_dir;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    dir = env;
  }
  const io::WrittenFiles files = io::write_session(result, dir);
  const SessionReport& r = result.report;
  out << "detected=" << (r.detected ? "true" : "false") << " check_error_rate=" << std::fixed
      << std::setprecision(6) << r.check_error_rate << " message_ber=";
  if (r.message_bit_error_rate) {
    out << *r.message_bit_error_rate;
  } else {
    out << "n/a";
  }
  out << " check_rounds=" << r.check_rounds << " message_rounds=" << r.message_rounds
      << " report=" << files.report.string() << '\n';
  out.unsetf(std::ios::floatfield);
  return kExitOk;
}

struct AnalyzeFlags {
  int parties = 3;
  std::optional<std::string> variant;
  std::optional<std::string> hadamard_positions;
  std::optional<int> payload;
  AttackFlags attack;
  std::optional<int> condition_bell;
};

inline StateVariant resolve_variant(const AnalyzeFlags& f) {
  if (f.hadamard_positions) {
    std::vector<int> positions;
    std::stringstream ss(*f.hadamard_positions);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        positions.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw ArgumentError("bad Hadamard position '" + item + "'");
      }
    }
    return StateVariant(f.parties, std::move(positions), VariantSet::all_subsets);
  }
  return StateVariant::parse(f.parties, f.variant.value_or("psi1"));
}

inline int cmd_analyze(const AnalyzeFlags& f, std::ostream& out) {
  check_parties(f.parties);
  const StateVariant variant = resolve_variant(f);
  const AttackModel attack = f.attack.model();
  attack.validate(f.parties);
  if (f.payload && *f.payload != 0 && *f.payload != 1) throw ArgumentError("payload must be 0 or 1");
  if (f.condition_bell && attack.kind == AttackKind::none) {
    throw ArgumentError("--condition-bell needs an attack");
  }
  if (f.condition_bell && (*f.condition_bell < 0 || *f.condition_bell > 3)) {
    throw ArgumentError("--condition-bell must be in 0..3");
  }

  std::vector<int> payloads;
  if (f.payload) {
    payloads.push_back(*f.payload);
  } else {
    payloads = {0, 1};
  }
  const double weight = 1.0 / static_cast<double>(payloads.size());

  out << std::setprecision(12);
  out << "# parties=" << f.parties << " variant=" << variant.name()
      << " attack=" << to_string(attack.kind) << " payload="
      << (f.payload ? std::to_string(*f.payload) : std::string("uniform")) << '\n';
  out << "payload alice_a alice_A signs eve probability\n";
  double errors = 0.0;
  double condition_weight = 0.0;
  for (int payload : payloads) {
    const RoundDistribution table = exact_round_analysis(variant, payload, attack);
    for (std::size_t c = 0; c < table.size(); ++c) {
      if (table[c] <= kTruncation) continue;
      const auto cell = table.decode(c);
      out << payload << ' ' << cell.alice_a << ' ' << cell.alice_A << ' '
          << format_signs(cell.receiver_signs) << ' '
          << (cell.eve ? std::to_string(*cell.eve) : std::string("-")) << ' ' << weight * table[c]
          << '\n';
    }
    errors += weight * table.error_probability(payload, f.condition_bell);
    condition_weight += f.condition_bell ? weight * table.eve_probability(*f.condition_bell) : weight;
  }
  if (condition_weight <= kTruncation) {
    throw ArgumentError("Bell outcome " + std::to_string(*f.condition_bell) +
                        " never occurs for this variant");
  }
  out << "detection_rate " << errors / condition_weight << '\n';
  if (attack.kind != AttackKind::none) {
    const auto dist = eve_record_distribution(attack, variant);
    out << "eve_bell_distribution " << dist[0] << ' ' << dist[1] << ' ' << dist[2] << ' '
        << dist[3] << '\n';
  }
  out << "eve_mutual_information " << eve_mutual_information(attack, variant) << '\n';
  return kExitOk;
}

/// Entry point shared by the `ghzqss` binary and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"(n, n) GHZ quantum secret sharing simulator", "ghzqss"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "simulate a full session and write transcript + report");
  run_cmd->add_option("--parties", run_flags.config.parties, "party count n (Alice + n-1 receivers)")
      ->capture_default_str();
  run_cmd->add_option("--rounds", run_flags.config.rounds, "number of GHZ rounds N")->capture_default_str();
  run_cmd->add_option("--check-fraction", run_flags.config.check_fraction, "fraction of check rounds")
      ->capture_default_str();
  run_flags.attack.add_to(*run_cmd);
  run_cmd->add_option("--seed", run_flags.config.seed, "root random seed")->capture_default_str();
  run_cmd->add_option("--mode", run_flags.mode, "sample | exact")->capture_default_str();
  run_cmd->add_option("--abort-threshold", run_flags.config.abort_threshold,
                      "largest tolerated check error rate")
      ->capture_default_str();
  auto* file_opt = run_cmd->add_option("--message-file", run_flags.message_file, "file of ASCII 0/1");
  run_cmd->add_option("--random-message", run_flags.random_message, "send a random message of this length")
      ->excludes(file_opt);
  run_cmd->add_flag("--all-subsets", run_flags.all_subsets, "draw every Hadamard subset as a variant");
  run_cmd->add_option("--out", run_flags.out_dir,
                      std::string("output directory (default $") + kOutDirEnv + " or .)");
  run_cmd->add_option("--threads", run_flags.threads, "worker threads for round simulation")
      ->capture_default_str();

  AnalyzeFlags analyze_flags;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "exact joint distribution of a single round");
  analyze_cmd->add_option("--parties", analyze_flags.parties)->capture_default_str();
  auto* variant_opt = analyze_cmd->add_option("--variant", analyze_flags.variant, "psi1..psi{n+1}");
  analyze_cmd->add_option("--hadamard-positions", analyze_flags.hadamard_positions,
                          "comma-separated receiver list, any subset")
      ->excludes(variant_opt);
  analyze_cmd->add_option("--payload", analyze_flags.payload, "0 or 1 (default: uniform)");
  analyze_flags.attack.add_to(*analyze_cmd);
  analyze_cmd->add_option("--condition-bell", analyze_flags.condition_bell,
                          "condition the detection rate on Eve's Bell outcome 0..3");

  app.add_subcommand("table1", "recompute and verify the recovery table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_flags, out);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_flags, out);
    return cmd_table1(out);
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ghzqss::cli
