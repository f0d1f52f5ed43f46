#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mlsda/reference_decoders.hpp"

using namespace mlsda;

namespace {

SoftObservation unit_obs(const BitVec& y) {
  return SoftObservation{y, std::vector<double>(y.size(), 1.0)};
}

// Wagner-rule metric recomputed from scratch, the identity both decoders
// must satisfy for their own returned codeword.
double recompute_metric(const BitVec& cw, const SoftObservation& obs) {
  double met = 0.0;
  for (size_t j = 0; j < cw.size(); ++j)
    if (cw[j] != obs.y[j]) met += obs.w[j];
  return met;
}

BitVec random_message(int L, std::mt19937_64& rng) {
  BitVec msg(L);
  for (auto& b : msg) b = static_cast<uint8_t>(rng() & 1u);
  return msg;
}

}  // namespace

TEST_CASE("viterbi matches exhaustive search on every hard observation") {
  const CodeSpec code = make_code("7,5", 2, 4);
  const size_t nbits = code.codeword_bits();  // 12
  for (uint32_t pattern = 0; pattern < (1u << nbits); ++pattern) {
    BitVec y(nbits);
    for (size_t j = 0; j < nbits; ++j) y[j] = static_cast<uint8_t>((pattern >> j) & 1u);
    const SoftObservation obs = unit_obs(y);
    const DecodeResult v = viterbi_decode(code, obs);
    const DecodeResult e = exhaustive_ml(code, obs);
    REQUIRE(v.ok);
    REQUIRE(e.ok);
    // Unit weights make every metric an exact small integer.
    REQUIRE(v.metric == e.metric);
    REQUIRE(recompute_metric(v.codeword, obs) == v.metric);
    REQUIRE(recompute_metric(e.codeword, obs) == e.metric);
  }
}

TEST_CASE("viterbi matches exhaustive search under random soft weights") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uw(0.0, 1.0);
  for (const auto& [gens, m] : {std::pair<const char*, int>{"7,5", 2}, {"64,54", 3}}) {
    const CodeSpec code = make_code(gens, m, 10);
    const size_t nbits = code.codeword_bits();
    for (int trial = 0; trial < 200; ++trial) {
      SoftObservation obs;
      obs.y.resize(nbits);
      obs.w.resize(nbits);
      for (size_t j = 0; j < nbits; ++j) {
        obs.y[j] = static_cast<uint8_t>(rng() & 1u);
        obs.w[j] = uw(rng);
      }
      const DecodeResult v = viterbi_decode(code, obs);
      const DecodeResult e = exhaustive_ml(code, obs);
      CHECK(v.metric == doctest::Approx(e.metric).epsilon(1e-12));
      CHECK(recompute_metric(v.codeword, obs) == doctest::Approx(v.metric).epsilon(1e-12));
      CHECK(recompute_metric(e.codeword, obs) == e.metric);
    }
  }
}

TEST_CASE("noiseless observations decode to the transmitted message with zero metric") {
  std::mt19937_64 rng(12);
  const CodeSpec code = make_code("554,774", 6, 20);
  for (int trial = 0; trial < 50; ++trial) {
    const BitVec msg = random_message(code.L, rng);
    const SoftObservation obs = unit_obs(encode(code, msg));
    const DecodeResult v = viterbi_decode(code, obs);
    const DecodeResult e = exhaustive_ml(code, obs);
    CHECK(v.metric == 0.0);
    CHECK(e.metric == 0.0);
    CHECK(v.message == msg);
    CHECK(e.message == msg);
  }
}

TEST_CASE("viterbi visits exactly the reachable branches of the terminated trellis") {
  // (2,1,2), L=4: info levels fan out 1,2,4,4 states with two branches each,
  // tail levels 4 and 2 states with one branch each: 22 + 6 = 28.
  const CodeSpec code = make_code("7,5", 2, 4);
  const SoftObservation obs = unit_obs(BitVec(code.codeword_bits(), 0));
  const DecodeResult v = viterbi_decode(code, obs);
  CHECK(v.stats.branch_computations == 28);
}

TEST_CASE("all-zero weights pin the tie to the all-zero message") {
  // Every codeword scores zero; exhaustive keeps the lexicographically
  // smallest message and the viterbi predecessor rule lands on the same one.
  const CodeSpec code = make_code("7,5", 2, 6);
  SoftObservation obs;
  obs.y.assign(code.codeword_bits(), 1);
  obs.w.assign(code.codeword_bits(), 0.0);
  const DecodeResult v = viterbi_decode(code, obs);
  const DecodeResult e = exhaustive_ml(code, obs);
  CHECK(v.metric == 0.0);
  CHECK(e.metric == 0.0);
  CHECK(v.message == BitVec(code.L, 0));
  CHECK(e.message == BitVec(code.L, 0));
}

TEST_CASE("malformed observations and oversized exhaustive calls are rejected") {
  const CodeSpec code = make_code("7,5", 2, 4);
  const SoftObservation good = unit_obs(BitVec(code.codeword_bits(), 0));

  SoftObservation short_y = good;
  short_y.y.pop_back();
  CHECK_THROWS_AS(viterbi_decode(code, short_y), std::invalid_argument);

  SoftObservation short_w = good;
  short_w.w.pop_back();
  CHECK_THROWS_AS(exhaustive_ml(code, short_w), std::invalid_argument);

  SoftObservation bad_bit = good;
  bad_bit.y[3] = 2;
  CHECK_THROWS_AS(viterbi_decode(code, bad_bit), std::invalid_argument);

  SoftObservation bad_weight = good;
  bad_weight.w[5] = -0.25;
  CHECK_THROWS_AS(viterbi_decode(code, bad_weight), std::invalid_argument);

  SoftObservation nan_weight = good;
  nan_weight.w[0] = std::nan("");
  CHECK_THROWS_AS(exhaustive_ml(code, nan_weight), std::invalid_argument);

  const CodeSpec big = make_code("7,5", 2, 25);
  const SoftObservation big_obs = unit_obs(BitVec(big.codeword_bits(), 0));
  CHECK_THROWS_AS(exhaustive_ml(big, big_obs), std::invalid_argument);
}
