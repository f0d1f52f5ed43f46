#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mlsda/exponents.hpp"

using namespace mlsda;

namespace {

// Mutual information in nats for the dmc's own input distribution, written
// from the defining sum as an independent check on the derivative route.
double mutual_information(const DmcSpec& dmc) {
  const size_t inputs = dmc.p.size();
  const size_t outputs = dmc.transition.size();
  std::vector<double> q(outputs, 0.0);
  for (size_t j = 0; j < outputs; ++j)
    for (size_t i = 0; i < inputs; ++i) q[j] += dmc.p[i] * dmc.transition[j][i];
  double info = 0.0;
  for (size_t j = 0; j < outputs; ++j) {
    for (size_t i = 0; i < inputs; ++i) {
      const double pji = dmc.transition[j][i];
      if (pji > 0.0) info += dmc.p[i] * pji * std::log(pji / q[j]);
    }
  }
  return info;
}

DmcSpec random_dmc(std::mt19937_64& rng, int inputs, int outputs) {
  std::exponential_distribution<double> ex(1.0);
  DmcSpec dmc;
  dmc.transition.assign(outputs, std::vector<double>(inputs, 0.0));
  for (int i = 0; i < inputs; ++i) {
    double col = 0.0;
    for (int j = 0; j < outputs; ++j) col += dmc.transition[j][i] = ex(rng);
    for (int j = 0; j < outputs; ++j) dmc.transition[j][i] /= col;
  }
  dmc.p.assign(inputs, 0.0);
  double tot = 0.0;
  for (auto& pi : dmc.p) tot += pi = ex(rng);
  for (auto& pi : dmc.p) pi /= tot;
  return dmc;
}

}  // namespace

TEST_CASE("closed-form exponents reproduce pinned binary symmetric values") {
  CHECK(bsc_e0(1.0, 0.045) == doctest::Approx(0.346294543745150).epsilon(1e-12));
  CHECK(bsc_e1(1.0, 0.045) == doctest::Approx(0.519720862152548).epsilon(1e-12));
  CHECK(bsc_e0(1.0, 0.095) == doctest::Approx(0.231661049649592).epsilon(1e-12));
  CHECK(bsc_e1(1.0, 0.095) == doctest::Approx(0.462404115104769).epsilon(1e-12));
  CHECK(bsc_e0(1.0, 0.4) == doctest::Approx(0.010153423432868).epsilon(1e-12));
  CHECK(bsc_e1(1.0, 0.4) == doctest::Approx(0.351650301996407).epsilon(1e-12));
  CHECK(bsc_e0(0.5, 0.045) == doctest::Approx(0.208682423066749).epsilon(1e-12));
  CHECK(bsc_e1(0.5, 0.045) == doctest::Approx(0.300609867875565).epsilon(1e-12));
}

TEST_CASE("the general channel form agrees with the closed forms") {
  for (const double eps : {0.045, 0.095, 0.25, 0.4}) {
    const DmcSpec dmc = make_bsc_dmc(eps);
    for (const double rho : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      CHECK(e0(rho, dmc) == doctest::Approx(bsc_e0(rho, eps)).epsilon(1e-12));
      CHECK(e1(rho, dmc) == doctest::Approx(bsc_e1(rho, eps)).epsilon(1e-12));
    }
    CHECK(cutoff_rate(dmc) == doctest::Approx(bsc_e0(1.0, eps)).epsilon(1e-12));
  }
}

TEST_CASE("exponents vanish at rho zero and on a useless channel") {
  const DmcSpec dmc = make_bsc_dmc(0.21);
  CHECK(std::abs(e0(0.0, dmc)) <= 1e-12);
  CHECK(std::abs(e1(0.0, dmc)) <= 1e-12);
  for (const double rho : {0.2, 0.5, 1.0}) {
    CHECK(std::abs(bsc_e0(rho, 0.5)) <= 1e-12);
    // The useless channel is still nondeterministic, so E1 stays strictly
    // positive: rho * log(2) / (1 + rho).
    CHECK(bsc_e1(rho, 0.5) ==
          doctest::Approx(rho * std::log(2.0) / (1.0 + rho)).epsilon(1e-12));
  }
}

TEST_CASE("the list exponent dominates except for deterministic channels") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> size(2, 5);
  for (int c = 0; c < 50; ++c) {
    const DmcSpec dmc = random_dmc(rng, size(rng), size(rng));
    validate_dmc(dmc);
    for (const double rho : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0})
      CHECK(e1(rho, dmc) + 1e-12 >= e0(rho, dmc));
  }

  DmcSpec deterministic;
  deterministic.transition = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  deterministic.p = {0.2, 0.3, 0.5};
  validate_dmc(deterministic);
  for (const double rho : {0.1, 0.5, 1.0})
    CHECK(e1(rho, deterministic) == doctest::Approx(e0(rho, deterministic)).epsilon(1e-12));
}

TEST_CASE("capacity matches the pinned values and the mutual information sum") {
  CHECK(capacity(make_bsc_dmc(0.045)) == doctest::Approx(0.509626043776570).epsilon(1e-12));
  CHECK(capacity(make_bsc_dmc(0.095)) == doctest::Approx(0.379191330328293).epsilon(1e-12));
  CHECK(capacity(make_bsc_dmc(0.4)) == doctest::Approx(0.020135513550689).epsilon(1e-12));

  // Random channels exercise the derivative route against the direct sum.
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> size(2, 5);
  for (int c = 0; c < 30; ++c) {
    const DmcSpec dmc = random_dmc(rng, size(rng), size(rng));
    CHECK(capacity(dmc) == doctest::Approx(mutual_information(dmc)).epsilon(1e-7));
  }

  // A slightly tilted input distribution leaves the symmetric shortcut, so
  // the derivative route must also cover near-symmetric binary channels.
  DmcSpec tilted = make_bsc_dmc(0.1);
  tilted.p = {0.501, 0.499};
  CHECK(capacity(tilted) == doctest::Approx(mutual_information(tilted)).epsilon(1e-7));
}

TEST_CASE("the random-coding exponent matches pinned values and a dense scan") {
  CHECK(e_r(bsc_e0(1.0, 0.045), make_bsc_dmc(0.045)) ==
        doctest::Approx(0.035739741532894).epsilon(1e-9));
  CHECK(e_r(bsc_e0(1.0, 0.095), make_bsc_dmc(0.095)) ==
        doctest::Approx(0.029548156279882).epsilon(1e-9));
  CHECK(e_r(bsc_e0(1.0, 0.4), make_bsc_dmc(0.4)) ==
        doctest::Approx(0.001723603722199).epsilon(1e-9));

  const double eps = 0.095;
  const DmcSpec dmc = make_bsc_dmc(eps);
  const double r0 = cutoff_rate(dmc);
  const double cap = capacity(dmc);
  for (const double rate : {0.5 * r0, r0, 0.5 * (r0 + cap)}) {
    double scan = 0.0;
    for (int k = 0; k <= 100000; ++k) {
      const double rho = k / 100000.0;
      scan = std::max(scan, bsc_e0(rho, eps) - rho * rate);
    }
    CHECK(e_r(rate, dmc) == doctest::Approx(scan).epsilon(1e-6));
  }

  // At vanishing rate the maximizer sits at the right edge.
  CHECK(e_r(1e-12, dmc) == doctest::Approx(r0).epsilon(1e-9));
  // At and beyond capacity nothing positive remains.
  CHECK(e_r(cap * 1.5, dmc) == 0.0);
}

TEST_CASE("the computational exponent is flat below cutoff and hits zero at capacity") {
  const DmcSpec dmc = make_bsc_dmc(0.045);
  const double r0 = cutoff_rate(dmc);
  const double cap = capacity(dmc);

  CHECK(e_c(0.25 * r0, dmc) == r0);
  CHECK(e_c(0.999 * r0, dmc) == r0);
  // Continuity across the cutoff-rate knee.
  CHECK(std::abs(e_c(r0 * (1.0 - 1e-9), dmc) - e_c(r0 * (1.0 + 1e-9), dmc)) <= 1e-7);
  // In the middle range the value is the fixpoint E0(v / R) = v.
  const double mid = 0.5 * (r0 + cap);
  const double v = e_c(mid, dmc);
  CHECK(v > 0.0);
  CHECK(v < r0);
  CHECK(bsc_e0(v / mid, 0.045) == doctest::Approx(v).epsilon(1e-8));
  CHECK(e_c(cap, dmc) == 0.0);
  CHECK(e_c(cap * 2.0, dmc) == 0.0);
}

TEST_CASE("the early-elimination exponent matches pinned values and a feasible scan") {
  CHECK(e_el(bsc_e0(1.0, 0.045), make_bsc_dmc(0.045)) ==
        doctest::Approx(0.173426318407398).epsilon(1e-9));
  CHECK(e_el(bsc_e0(1.0, 0.095), make_bsc_dmc(0.095)) ==
        doctest::Approx(0.230743065455176).epsilon(1e-9));

  // Just below the cutoff rate the whole interval is feasible and the
  // maximum sits at rho = 1.
  const double eps = 0.045;
  const DmcSpec dmc = make_bsc_dmc(eps);
  const double r0 = cutoff_rate(dmc);
  const double rate_near = r0 * (1.0 - 1e-4);
  CHECK(e_el(rate_near, dmc) ==
        doctest::Approx(bsc_e1(1.0, eps) - rate_near).epsilon(1e-8));

  for (const double rate : {0.6 * r0, 1.02 * r0}) {
    double scan = 0.0;
    for (int k = 0; k <= 100000; ++k) {
      const double rho = k / 100000.0;
      if (bsc_e0(rho, eps) < rho * rate) break;  // feasibility ends, E0 concave
      scan = std::max(scan, bsc_e1(rho, eps) - rho * rate);
    }
    // The scan stops one grid cell short of the feasibility boundary, so it
    // can only trail the optimizer, never beat it beyond rounding noise.
    const double v = e_el(rate, dmc);
    CHECK(v + 1e-9 >= scan);
    CHECK(v <= scan + 5e-6);
  }

  CHECK(e_el(capacity(dmc) * 1.5, dmc) == 0.0);
}

TEST_CASE("three-significant-digit rounding behaves at the pinned ratios") {
  CHECK(round_sig3(1.996782) == 2.0);
  CHECK(round_sig3(5.890810806507) == 5.89);
  CHECK(round_sig3(9.689341021855) == 9.69);
  CHECK(round_sig3(1.003978) == 1.0);
  CHECK(round_sig3(123.456) == 123.0);
  CHECK(round_sig3(0.0123449) == 0.0123);
  CHECK_THROWS_AS(round_sig3(0.0), std::invalid_argument);
  CHECK_THROWS_AS(round_sig3(-3.0), std::invalid_argument);
}

TEST_CASE("window rules reproduce the pinned ratios and minimum sizes") {
  const DmcSpec bsc045 = make_bsc_dmc(0.045);
  const DmcSpec bsc095 = make_bsc_dmc(0.095);
  const DmcSpec bsc400 = make_bsc_dmc(0.4);

  const WindowRule elim045 = elimination_window(cutoff_rate(bsc045), 6, bsc045);
  CHECK(elim045.ratio == 2.0);
  CHECK(elim045.window_min == 15);

  const WindowRule elim095 = elimination_window(cutoff_rate(bsc095), 8, bsc095);
  CHECK(elim095.ratio == 1.0);
  CHECK(elim095.window_min == 10);

  const WindowRule trunc400 = truncation_window(cutoff_rate(bsc400), 6, bsc400);
  CHECK(trunc400.ratio == 5.89);
  CHECK(trunc400.window_min == 42);

  const WindowRule trunc045 = truncation_window(cutoff_rate(bsc045), 6, bsc045);
  CHECK(trunc045.ratio == 9.69);
  CHECK(trunc045.window_min == 68);

  // Quoted at one half bit per channel use, marginally above this channel's
  // cutoff rate, the elimination sizing is unchanged.
  const double half_bit = 0.5 * std::log(2.0);
  const WindowRule elim_half = elimination_window(half_bit, 6, bsc045);
  CHECK(elim_half.ratio == 2.0);
  CHECK(elim_half.window_min == 15);

  CHECK_THROWS_AS(elimination_window(0.03, 6, bsc400), std::domain_error);
  CHECK_THROWS_AS(truncation_window(0.03, 6, bsc400), std::domain_error);
  CHECK_THROWS_AS(elimination_window(half_bit, 0, bsc045), std::invalid_argument);
}

TEST_CASE("error bounds reproduce pinned values and degenerate limits") {
  const DmcSpec bsc045 = make_bsc_dmc(0.045);
  const DmcSpec bsc400 = make_bsc_dmc(0.4);
  const double r0_045 = cutoff_rate(bsc045);
  const double r0_400 = cutoff_rate(bsc400);

  CHECK(viterbi_error_bound(2, 2, 6, r0_045, 0.5, bsc045) ==
        doctest::Approx(7.843337163516289e-01).epsilon(1e-12));
  // Longer memory shrinks the bound.
  CHECK(viterbi_error_bound(2, 2, 7, r0_045, 0.5, bsc045) <
        viterbi_error_bound(2, 2, 6, r0_045, 0.5, bsc045));
  // At rho = 1 and R = R0 the geometric factor diverges.
  CHECK_THROWS_AS(viterbi_error_bound(2, 2, 6, r0_045, 1.0, bsc045), std::domain_error);

  CHECK(truncation_error_bound(2, 10, r0_400, bsc400) ==
        doctest::Approx(9.661153186172335e-01).epsilon(1e-12));
  CHECK(truncation_error_bound(2, 0, r0_400, bsc400) == 1.0);
  CHECK(truncation_error_bound(2, 50, r0_400, bsc400) <
        truncation_error_bound(2, 10, r0_400, bsc400));
}

TEST_CASE("reports collect the exponent family at one rate") {
  const DmcSpec dmc = make_bsc_dmc(0.095);
  const double r0 = cutoff_rate(dmc);
  const ExponentReport rep = exponent_report(r0, dmc);
  CHECK(rep.rate == r0);
  CHECK(rep.cutoff_rate == r0);
  CHECK(rep.capacity == doctest::Approx(0.379191330328293).epsilon(1e-12));
  CHECK(rep.e_r == doctest::Approx(0.029548156279882).epsilon(1e-9));
  CHECK(rep.e_c == doctest::Approx(r0).epsilon(1e-9));
  CHECK(rep.e_el == doctest::Approx(0.230743065455176).epsilon(1e-9));
}

TEST_CASE("malformed channels are rejected") {
  DmcSpec bad = make_bsc_dmc(0.1);
  bad.transition[0][0] = 0.95;  // column no longer sums to one
  CHECK_THROWS_AS(validate_dmc(bad), std::invalid_argument);

  DmcSpec negative = make_bsc_dmc(0.1);
  negative.transition[0][0] = -0.1;
  negative.transition[1][0] = 1.1;
  CHECK_THROWS_AS(validate_dmc(negative), std::invalid_argument);

  DmcSpec badp = make_bsc_dmc(0.1);
  badp.p = {0.7, 0.7};
  CHECK_THROWS_AS(validate_dmc(badp), std::invalid_argument);

  DmcSpec ragged = make_bsc_dmc(0.1);
  ragged.transition[1].pop_back();
  CHECK_THROWS_AS(validate_dmc(ragged), std::invalid_argument);

  DmcSpec tiny;
  tiny.transition = {{1.0}, {0.0}};
  tiny.p = {1.0};
  CHECK_THROWS_AS(validate_dmc(tiny), std::invalid_argument);

  CHECK_THROWS_AS(make_bsc_dmc(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_bsc_dmc(0.6), std::invalid_argument);
  CHECK_THROWS_AS(bsc_e0(1.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(e_r(-0.1, make_bsc_dmc(0.1)), std::invalid_argument);
}
