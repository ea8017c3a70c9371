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
 * Transcript (JSON Lines, one record per round) and report (JSON document)
 * files. Key order is fixed and no timestamps or absolute paths are written,
 * so identical sessions produce byte-identical files.
 */

#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "ghzqss/attacks.hpp"
#include "ghzqss/errors.hpp"
#include "ghzqss/protocol.hpp"
#include "ghzqss/session.hpp"

namespace ghzqss::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const RoundOutcome& r) {
  Json j;
  j["round_index"] = r.plan.round_index;
  j["variant"] = r.plan.variant.hadamard_positions();
  j["role"] = std::string(to_string(r.plan.role));
  j["payload_bit"] = r.plan.payload_bit;
  j["alice_a"] = r.alice_a;
  j["alice_A"] = r.alice_A;
  j["receiver_signs"] = format_signs(r.receiver_signs);
  if (r.eve_record) {
    j["eve_record"] = Json{{"kind", std::string(to_string(r.eve_record->kind))},
                           {"bell_outcome", r.eve_record->bell_outcome}};
  } else {
    j["eve_record"] = nullptr;
  }
  j["announcement_order"] = r.announcement_order;
  return j;
}

/// Inverse of to_json for one transcript line.
inline RoundOutcome round_from_json(const Json& j, int parties,
                                    VariantSet set = VariantSet::all_subsets) {
  try {
    RoundOutcome r{RoundPlan{j.at("round_index").get<std::size_t>(),
                             StateVariant(parties, j.at("variant").get<std::vector<int>>(), set),
                             j.at("role").get<std::string>() == "check" ? RoundRole::check
                                                                        : RoundRole::message,
                             j.at("payload_bit").get<int>()}};
    r.alice_a = j.at("alice_a").get<int>();
    r.alice_A = j.at("alice_A").get<int>();
    for (char c : j.at("receiver_signs").get<std::string>()) {
      if (c != '+' && c != '-') throw ArgumentError("bad sign character");
      r.receiver_signs.push_back(c == '-' ? 1 : 0);
    }
    if (!j.at("eve_record").is_null()) {
      const auto& e = j.at("eve_record");
      r.eve_record = EveRecord{parse_attack_kind(e.at("kind").get<std::string>()),
                               e.at("bell_outcome").get<int>(), r.plan.round_index};
    }
    r.announcement_order = j.at("announcement_order").get<std::vector<int>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed transcript record: ") + e.what());
  }
}

inline void write_transcript(std::ostream& out, const Transcript& transcript) {
  for (const auto& r : transcript.rounds) out << to_json(r).dump() << '\n';
}

inline Json to_json(const SessionConfig& c) {
  Json j;
  j["parties"] = c.parties;
  j["rounds"] = c.rounds;
  j["check_fraction"] = c.check_fraction;
  j["attack"] = Json{{"kind", std::string(to_string(c.attack.kind))},
                     {"target_receiver", c.attack.target(c.parties)},
                     {"insider", c.attack.insider}};
  j["seed"] = c.seed;
  j["mode"] = std::string(to_string(c.mode));
  j["abort_threshold"] = c.abort_threshold;
  j["message"] = format_bits(c.message);
  j["variant_set"] = std::string(to_string(c.variants));
  return j;
}

inline Json to_json(const LogEntry& e) {
  Json j;
  j["event"] = std::string(to_string(e.event));
  if (e.party) j["party"] = e.party;
  if (e.round) j["round"] = *e.round;
  if (!e.order.empty()) j["order"] = e.order;
  return j;
}

inline Json report_json(const SessionReport& r, const Transcript& transcript) {
  Json j;
  j["config"] = to_json(r.config);
  j["check_rounds"] = r.check_rounds;
  j["message_rounds"] = r.message_rounds;
  j["check_errors"] = r.check_errors;
  j["check_error_rate"] = r.check_error_rate;
  j["detected"] = r.detected;
  j["recovered_message"] =
      r.recovered_message ? Json(format_bits(*r.recovered_message)) : Json(nullptr);
  j["message_bit_error_rate"] =
      r.message_bit_error_rate ? Json(*r.message_bit_error_rate) : Json(nullptr);
  j["eve_mutual_information"] =
      r.eve_mutual_information ? Json(*r.eve_mutual_information) : Json(nullptr);
  j["expected_check_error_rate"] =
      r.expected_check_error_rate ? Json(*r.expected_check_error_rate) : Json(nullptr);
  Json stats = Json::object();
  for (const auto& [name, s] : r.per_variant_stats) {
    stats[name] = Json{{"rounds", s.rounds},
                       {"check_rounds", s.check_rounds},
                       {"check_errors", s.check_errors}};
  }
  j["per_variant_stats"] = std::move(stats);
  j["transcript_path"] = r.transcript_path;
  Json log = Json::array();
  for (const auto& e : transcript.announcement_log) log.push_back(to_json(e));
  j["announcement_log"] = std::move(log);
  return j;
}

struct WrittenFiles {
  std::filesystem::path transcript;
  std::filesystem::path report;
};

/// Writes <dir>/transcript.jsonl and <dir>/report.json, creating dir if needed.
inline WrittenFiles write_session(const SessionResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WrittenFiles files{dir / result.report.transcript_path, dir / "report.json"};
  {
    std::ofstream out(files.transcript, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + files.transcript.string());
    write_transcript(out, result.transcript);
  }
  std::ofstream out(files.report, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + files.report.string());
  out << report_json(result.report, result.transcript).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + files.report.string());
  return files;
}

}  // namespace ghzqss::io
