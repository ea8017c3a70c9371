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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "ghzqss/attacks.hpp"
#include "ghzqss/round.hpp"
#include "ghzqss/security.hpp"
#include "support/dense_oracle.hpp"

namespace ghzqss {
namespace {

const double r2 = 1.0 / std::sqrt(2.0);

const AttackModel kIntercept{AttackKind::intercept_resend_bell};
const AttackModel kCnot{AttackKind::collective_cnot};
const AttackModel kHCnot{AttackKind::collective_h_cnot};

StateVariant psi(int k) { return StateVariant::listed_at(3, k - 1); }

oracle::Attack to_oracle(AttackKind kind) {
  switch (kind) {
    case AttackKind::intercept_resend_bell: return oracle::Attack::intercept;
    case AttackKind::collective_cnot: return oracle::Attack::cnot;
    case AttackKind::collective_h_cnot: return oracle::Attack::hcnot;
    default: return oracle::Attack::none;
  }
}

TEST(AttackModelTest, ParsingAndValidation) {
  EXPECT_EQ(parse_attack_kind("intercept-resend"), AttackKind::intercept_resend_bell);
  EXPECT_EQ(parse_attack_kind("collective-h-cnot"), AttackKind::collective_h_cnot);
  EXPECT_THROW(parse_attack_kind("mitm"), ArgumentError);
  EXPECT_EQ(kIntercept.target(5), 5);
  EXPECT_THROW((AttackModel{AttackKind::collective_cnot, 2}.validate(3)), ArgumentError);
  EXPECT_THROW((AttackModel{AttackKind::collective_cnot, 4}.validate(3)), ArgumentError);
  EXPECT_THROW((AttackModel{AttackKind::collective_cnot, std::nullopt, 1}.validate(3)), ArgumentError);
  EXPECT_NO_THROW((AttackModel{AttackKind::none, 9}.validate(3)));
  EXPECT_EQ(kCnot.extra_qubits(), 1U);
  EXPECT_EQ(kIntercept.extra_qubits(), 0U);
}

TEST(InterceptResendTest, CollapsedStatesOnPsi2) {
  const StateVector psi2 = prepare_variant(psi(2));
  const Branch b0 = project_bell(psi2, QubitIndex{1}, QubitIndex{2}, 0);
  ASSERT_TRUE(b0.state.has_value());
  EXPECT_TRUE(b0.state->approx_equal(tensor(StateVector::minus(), StateVector(2, {r2, 0, 0, r2}))));
  const Branch b1 = project_bell(psi2, QubitIndex{1}, QubitIndex{2}, 1);
  ASSERT_TRUE(b1.state.has_value());
  EXPECT_TRUE(b1.state->approx_equal(tensor(StateVector::plus(), StateVector(2, {r2, 0, 0, -r2}))));

  // Sampling picks the same branch and tags the record.
  const auto [state, record] = tap_intercept_resend(psi2, QubitIndex{1}, QubitIndex{2}, 0.0, 7);
  EXPECT_EQ(record.kind, AttackKind::intercept_resend_bell);
  EXPECT_EQ(record.round_index, 7U);
  EXPECT_TRUE(state.approx_equal(*b0.state));
  EXPECT_EQ(record.bell_outcome, 0);
}

TEST(InterceptResendTest, Psi1OutcomeSplit) {
  const auto dist = outcome_distribution(prepare_variant(psi(1)), {MeasureSpec::bell(1, 2)});
  EXPECT_NEAR(dist[0], 0.5, kTolerance);
  EXPECT_NEAR(dist[1], 0.5, kTolerance);
  EXPECT_NEAR(dist[2], 0.0, kTolerance);
  EXPECT_NEAR(dist[3], 0.0, kTolerance);
}

TEST(CollectiveTest, CnotOnGhzExtendsIt) {
  const StateVector s = tap_collective(prepare_variant(psi(1)), QubitIndex{2}, false);
  EXPECT_TRUE(s.approx_equal(StateVector(4, {r2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, r2})));
}

TEST(CollectiveTest, HadamardVariantMatchesOracle) {
  for (int k = 1; k <= 4; ++k) {
    const StateVector s = tap_collective(prepare_variant(psi(k)), QubitIndex{2}, true);
    oracle::Vec ref = oracle::kron(oracle::prepare(3, psi(k).hadamard_positions()), oracle::ket0());
    ref = oracle::act(oracle::single(oracle::hadamard(), 2, 4), ref);
    ref = oracle::act(oracle::cnot(2, 3, 4), ref);
    ref = oracle::act(oracle::single(oracle::hadamard(), 2, 4), ref);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(std::abs(s[i] - ref[i]), 0.0, kTolerance);
  }
}

TEST(CollectiveTest, EncodedBranchIsThreeQubitGhz) {
  for (int k : {1, 2}) {
    const StateVector tapped = tap_collective(prepare_variant(psi(k)), QubitIndex{2}, false);
    const StateVector s = encode_round(receiver_correction(tapped, psi(k)), 0);
    const auto branch = receiver_branch(s, 0, 0);
    ASSERT_TRUE(branch.has_value());
    EXPECT_TRUE(branch->approx_equal(StateVector(3, {r2, 0, 0, 0, 0, 0, 0, r2}))) << branch->to_string();
  }
}

TEST(CollectiveTest, MatchedAttacksGiveEvenBellSplit) {
  for (const auto& [attack, variants] :
       std::vector<std::pair<AttackModel, std::vector<int>>>{{kCnot, {1, 2}}, {kHCnot, {3, 4}}}) {
    for (int k : variants) {
      const auto eve = eve_record_distribution(attack, psi(k));
      EXPECT_NEAR(eve[0], 0.5, kTolerance) << to_string(attack.kind) << " psi" << k;
      EXPECT_NEAR(eve[1], 0.5, kTolerance);
      EXPECT_NEAR(eve[2] + eve[3], 0.0, kTolerance);
    }
  }
}

TEST(CollectiveTest, ZTransparent) {
  for (int n = 3; n <= 5; ++n) {
    const StateVector ghz = prepare_variant(StateVariant(n, {}));
    std::vector<MeasureSpec> zs;
    for (std::size_t q = 0; q < static_cast<std::size_t>(n); ++q) zs.push_back(MeasureSpec::z(q));
    const auto clean = outcome_distribution(ghz, zs);
    for (int t = 2; t <= n; ++t) {
      const auto tapped = outcome_distribution(tap_collective(ghz, QubitIndex{static_cast<std::size_t>(t - 1)}, false), zs);
      for (std::size_t c = 0; c < clean.size(); ++c) EXPECT_NEAR(tapped[c], clean[c], kTolerance);
    }
  }
}

TEST(ExactRoundAnalysisTest, AgreesWithDenseOracle) {
  for (int n = 3; n <= 4; ++n) {
    std::vector<AttackModel> attacks{AttackModel{}, kIntercept, kCnot, kHCnot};
    if (n == 4) {
      attacks.push_back({AttackKind::intercept_resend_bell, 2, 3});
      attacks.push_back({AttackKind::collective_h_cnot, 3, 4});
      attacks.push_back({AttackKind::collective_cnot, 2, 4});
    }
    for (const auto& attack : attacks) {
      for (const auto& v : StateVariant::enumerate(n, n == 4 ? VariantSet::all_subsets : VariantSet::listed)) {
        for (int payload = 0; payload < 2; ++payload) {
          const RoundDistribution table = exact_round_analysis(v, payload, attack);
          const auto ref = oracle::analyze(n, v.hadamard_positions(), payload, to_oracle(attack.kind),
                                           attack.insider, attack.target(n));
          double ref_total = 0.0;
          for (const auto& [key, p] : ref) {
            const auto& [a, A, signs, eve] = key;
            std::optional<int> e;
            if (eve >= 0) e = eve;
            EXPECT_NEAR(table[table.code(a, A, signs, e)], p, kTolerance)
                << "n=" << n << " " << to_string(attack.kind) << " " << v.name() << " payload " << payload;
            ref_total += p;
          }
          EXPECT_NEAR(ref_total, 1.0, kTolerance);
          EXPECT_NEAR(table.total(), 1.0, kTolerance);
        }
      }
    }
  }
}

TEST(ExactRoundAnalysisTest, CapacityLimit) {
  EXPECT_THROW(exact_round_analysis(StateVariant(23, {}), 0, kCnot), CapacityError);
  RandomStream rng(1);
  const RoundPlan plan{0, StateVariant(23, {}), RoundRole::check, 0};
  EXPECT_THROW(simulate_round(plan, kCnot, rng), CapacityError);
}

TEST(SimulateRoundTest, SamplesMatchExactDistribution) {
  const int trials = 40000;
  for (const auto& attack : {kIntercept, kHCnot}) {
    const RoundPlan plan{0, psi(2), RoundRole::check, 1};
    const RoundDistribution exact = exact_round_analysis(plan.variant, plan.payload_bit, attack);
    std::vector<int> counts(exact.size(), 0);
    for (int t = 0; t < trials; ++t) {
      RandomStream rng = RandomStream::derive(99, t);
      ++counts[exact.code(simulate_round(plan, attack, rng))];
    }
    for (std::size_t c = 0; c < exact.size(); ++c) {
      const double p = exact[c];
      if (p == 0.0) {
        EXPECT_EQ(counts[c], 0);
        continue;
      }
      const double se = std::sqrt(p * (1 - p) / trials);
      EXPECT_NEAR(counts[c] / double(trials), p, 4 * se) << to_string(attack.kind) << " cell " << c;
    }
  }
}

TEST(SimulateRoundTest, HonestRoundsRecoverAndCarryNoRecord) {
  RandomStream rng(4);
  for (int i = 0; i < 500; ++i) {
    const RoundPlan plan{static_cast<std::size_t>(i), StateVariant::listed_at(5, i % 6), RoundRole::message, i % 2};
    const RoundOutcome out = simulate_round(plan, AttackModel{}, rng);
    EXPECT_EQ(out.recovered_bit(), plan.payload_bit);
    EXPECT_FALSE(out.eve_record.has_value());
    EXPECT_EQ(out.receiver_signs.size(), 4U);
  }
}

TEST(DetectionRateTest, ConditionalHalfClaims) {
  EXPECT_NEAR(conditional_detection_rate(kIntercept, psi(2), 0), 0.5, kTolerance);
  EXPECT_NEAR(conditional_detection_rate(kIntercept, psi(3), 0), 0.5, kTolerance);
  EXPECT_NEAR(conditional_detection_rate(kIntercept, psi(2), 1), 0.5, kTolerance);
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(conditional_detection_rate(AttackModel{}, psi(k)), 0.0, kTolerance);
  EXPECT_THROW(conditional_detection_rate(AttackModel{}, psi(1), 0), ArgumentError);
  EXPECT_THROW(conditional_detection_rate(kIntercept, psi(1), 2), ArgumentError);
  EXPECT_THROW(conditional_detection_rate(kIntercept, psi(1), 4), ArgumentError);
}

TEST(DetectionRateTest, PerVariantRatesThreeParties) {
  const std::map<AttackKind, std::array<double, 4>> expected{
      {AttackKind::intercept_resend_bell, {0.0, 0.5, 0.5, 0.0}},
      {AttackKind::collective_cnot, {0.0, 0.0, 0.5, 0.5}},
      {AttackKind::collective_h_cnot, {0.5, 0.5, 0.0, 0.0}},
  };
  for (const auto& [kind, rates] : expected) {
    for (int k = 1; k <= 4; ++k) {
      EXPECT_NEAR(conditional_detection_rate(AttackModel{kind}, psi(k)), rates[static_cast<std::size_t>(k - 1)],
                  kTolerance)
          << to_string(kind) << " psi" << k;
    }
    EXPECT_NEAR(averaged_detection_rate(AttackModel{kind}, 3), 0.25, kTolerance);
  }
}

TEST(DetectionRateTest, AveragedRatesFourParties) {
  EXPECT_NEAR(averaged_detection_rate(kIntercept, 4), 0.2, kTolerance);
  EXPECT_NEAR(averaged_detection_rate(kCnot, 4), 0.2, kTolerance);
  EXPECT_NEAR(averaged_detection_rate(kHCnot, 4), 0.3, kTolerance);
}

TEST(DetectionRateTest, MismatchedCollectiveRecordIsUniform) {
  for (const auto& [attack, k] : std::vector<std::pair<AttackModel, int>>{
           {kCnot, 3}, {kCnot, 4}, {kHCnot, 1}, {kHCnot, 2}}) {
    const auto eve = eve_record_distribution(attack, psi(k));
    for (double p : eve) EXPECT_NEAR(p, 0.25, kTolerance);
  }
  const auto psi4 = eve_record_distribution(kIntercept, psi(4));
  EXPECT_NEAR(psi4[0], 0.5, kTolerance);
  EXPECT_NEAR(psi4[2], 0.5, kTolerance);
}

TEST(MutualInformationTest, ZeroEverywhere) {
  for (int n = 3; n <= 4; ++n) {
    for (const auto& attack : {AttackModel{}, kIntercept, kCnot, kHCnot}) {
      for (const auto& v : StateVariant::listed(n)) {
        EXPECT_EQ(eve_mutual_information(attack, v), 0.0) << to_string(attack.kind) << " " << v.name();
      }
    }
  }
}

TEST(MutualInformationTest, BellRecordAloneCarriesNothing) {
  // Independent check from the oracle: Eve's record marginal does not depend on the payload.
  for (auto attack : {oracle::Attack::intercept, oracle::Attack::cnot, oracle::Attack::hcnot}) {
    for (const auto& v : StateVariant::listed(3)) {
      std::array<std::array<double, 2>, 4> joint{};
      for (int payload = 0; payload < 2; ++payload) {
        for (const auto& [key, p] : oracle::analyze(3, v.hadamard_positions(), payload, attack)) {
          joint[static_cast<std::size_t>(std::get<3>(key))][static_cast<std::size_t>(payload)] += 0.5 * p;
        }
      }
      for (const auto& row : joint) EXPECT_NEAR(row[0], row[1], kTolerance);
    }
  }
}

}  // namespace
}  // namespace ghzqss
