#include "mlsda/exponents.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mlsda {

namespace {

constexpr double kProbTol = 1e-9;  // slack for column sums and p normalization

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
}

void check_rate(double rate) {
  if (!std::isfinite(rate) || rate <= 0.0)
    throw std::invalid_argument("rate must be positive and finite");
}

// E0 without the rho range check; the capacity derivative probes a hair
// below zero, where the defining expression is still smooth.
double e0_raw(double rho, const DmcSpec& dmc) {
  const double s = 1.0 / (1.0 + rho);
  double outer = 0.0;
  for (const auto& row : dmc.transition) {
    double inner = 0.0;
    for (size_t i = 0; i < row.size(); ++i) inner += dmc.p[i] * std::pow(row[i], s);
    outer += std::pow(inner, 1.0 + rho);
  }
  return -std::log(outer);
}

// Golden-section maximum of a smooth function on [lo, hi].
template <typename F>
double golden_max(F f, double lo, double hi, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (a + b);
  return std::max(f(mid), std::max(f1, f2));
}

// Root of E0(rho) = rho * R on (0, 1]; exists for cutoff <= R < capacity
// because E0 is concave with E0'(0) = C and E0(1) = R0.
double solve_rho_star(double rate, const DmcSpec& dmc) {
  double lo = 1e-9, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (e0_raw(mid, dmc) - mid * rate > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool is_symmetric_binary(const DmcSpec& dmc) {
  return dmc.p.size() == 2 && dmc.transition.size() == 2 &&
         dmc.transition[0].size() == 2 && dmc.transition[1].size() == 2 &&
         std::abs(dmc.p[0] - 0.5) < 1e-12 &&
         std::abs(dmc.transition[0][0] - dmc.transition[1][1]) < 1e-12 &&
         std::abs(dmc.transition[0][1] - dmc.transition[1][0]) < 1e-12;
}

}  // namespace

DmcSpec make_bsc_dmc(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  DmcSpec dmc;
  dmc.transition = {{1.0 - epsilon, epsilon}, {epsilon, 1.0 - epsilon}};
  dmc.p = {0.5, 0.5};
  return dmc;
}

void validate_dmc(const DmcSpec& dmc) {
  const size_t inputs = dmc.p.size();
  const size_t outputs = dmc.transition.size();
  if (inputs < 2) throw std::invalid_argument("dmc: need at least two inputs");
  if (outputs < 2) throw std::invalid_argument("dmc: need at least two outputs");
  double psum = 0.0;
  for (const double pi : dmc.p) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("dmc: p entries must be in [0, 1]");
    psum += pi;
  }
  if (std::abs(psum - 1.0) > kProbTol)
    throw std::invalid_argument("dmc: input distribution must sum to 1");
  for (const auto& row : dmc.transition) {
    if (row.size() != inputs)
      throw std::invalid_argument("dmc: every transition row needs one entry per input");
  }
  for (size_t i = 0; i < inputs; ++i) {
    double col = 0.0;
    for (size_t j = 0; j < outputs; ++j) {
      const double v = dmc.transition[j][i];
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("dmc: transition entries must be in [0, 1]");
      col += v;
    }
    if (std::abs(col - 1.0) > kProbTol)
      throw std::invalid_argument("dmc: transition column " + std::to_string(i) +
                                  " must sum to 1");
  }
}

double e0(double rho, const DmcSpec& dmc) {
  check_rho(rho);
  return e0_raw(rho, dmc);
}

double e1(double rho, const DmcSpec& dmc) {
  check_rho(rho);
  const double s = 1.0 / (1.0 + rho);
  double outer = 0.0;
  for (const auto& row : dmc.transition) {
    double q = 0.0;      // output marginal
    double inner = 0.0;  // tilted input average
    for (size_t i = 0; i < row.size(); ++i) {
      q += dmc.p[i] * row[i];
      inner += dmc.p[i] * std::pow(row[i], s);
    }
    outer += q * std::pow(inner, rho);
  }
  return -std::log(outer);
}

double bsc_e0(double rho, double epsilon) {
  check_rho(rho);
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  const double s = 1.0 / (1.0 + rho);
  const double g = std::log(std::pow(epsilon, s) + std::pow(1.0 - epsilon, s));
  return rho * std::log(2.0) - (1.0 + rho) * g;
}

double bsc_e1(double rho, double epsilon) {
  check_rho(rho);
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  const double s = 1.0 / (1.0 + rho);
  const double g = std::log(std::pow(epsilon, s) + std::pow(1.0 - epsilon, s));
  return rho * (std::log(2.0) - g);
}

double cutoff_rate(const DmcSpec& dmc) { return e0_raw(1.0, dmc); }

double capacity(const DmcSpec& dmc) {
  if (is_symmetric_binary(dmc)) {
    const double eps = dmc.transition[1][0];
    const double ent = (eps > 0.0 ? -eps * std::log(eps) : 0.0) +
                       (eps < 1.0 ? -(1.0 - eps) * std::log(1.0 - eps) : 0.0);
    return std::log(2.0) - ent;
  }
  // Richardson-extrapolated central difference of E0 at zero.
  const double h = 1e-6;
  const auto diff = [&](double step) {
    return (e0_raw(step, dmc) - e0_raw(-step, dmc)) / (2.0 * step);
  };
  return (4.0 * diff(h / 2.0) - diff(h)) / 3.0;
}

double e_r(double rate, const DmcSpec& dmc) {
  check_rate(rate);
  const double best =
      golden_max([&](double rho) { return e0_raw(rho, dmc) - rho * rate; }, 0.0, 1.0, 1e-9);
  return std::max(best, 0.0);
}

double e_c(double rate, const DmcSpec& dmc) {
  check_rate(rate);
  const double r0 = cutoff_rate(dmc);
  if (rate < r0) return r0;
  if (rate >= capacity(dmc)) return 0.0;
  return e0_raw(solve_rho_star(rate, dmc), dmc);
}

double e_el(double rate, const DmcSpec& dmc) {
  check_rate(rate);
  if (rate >= capacity(dmc)) return 0.0;
  const double rho_hi = rate <= cutoff_rate(dmc) ? 1.0 : solve_rho_star(rate, dmc);
  const auto g = [&](double rho) { return e1(rho, dmc) - rho * rate; };
  // E1 need not be concave, so scan first and refine around the best cell.
  constexpr int kGrid = 257;
  int best_k = 0;
  double best_g = g(0.0);
  for (int k = 1; k < kGrid; ++k) {
    const double v = g(rho_hi * k / (kGrid - 1));
    if (v > best_g) {
      best_g = v;
      best_k = k;
    }
  }
  const double cell = rho_hi / (kGrid - 1);
  const double lo = std::max(0.0, (best_k - 1) * cell);
  const double hi = std::min(rho_hi, (best_k + 1) * cell);
  return std::max(golden_max(g, lo, hi, 1e-9), 0.0);
}

double round_sig3(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::invalid_argument("round_sig3: need a positive finite value");
  const double scale = std::pow(10.0, std::floor(std::log10(x)) - 2.0);
  return std::round(x / scale) * scale;
}

namespace {

WindowRule window_from_ratio(double numerator, double denominator, int m, const char* what) {
  if (m < 1) throw std::invalid_argument("window: memory order must be >= 1");
  if (!(denominator > 0.0) || !(numerator > 0.0))
    throw std::domain_error(std::string(what) + " window is undefined at or above capacity");
  WindowRule rule;
  rule.ratio = round_sig3(numerator / denominator);
  rule.window_min = static_cast<int>(std::floor(rule.ratio * (m + 1) + 1e-9)) + 1;
  return rule;
}

}  // namespace

WindowRule elimination_window(double rate, int m, const DmcSpec& dmc) {
  check_rate(rate);
  return window_from_ratio(e_c(rate, dmc), e_el(rate, dmc), m, "elimination");
}

WindowRule truncation_window(double rate, int m, const DmcSpec& dmc) {
  check_rate(rate);
  return window_from_ratio(e_c(rate, dmc), e_r(rate, dmc), m, "truncation");
}

double viterbi_error_bound(int q, int n, int m, double rate, double rho, const DmcSpec& dmc) {
  check_rate(rate);
  check_rho(rho);
  if (q < 2 || n < 1 || m < 1) throw std::invalid_argument("bound: need q >= 2, n >= 1, m >= 1");
  const double lambda = e0_raw(rho, dmc) - rho * rate;
  if (!(lambda > 0.0))
    throw std::domain_error("bound diverges: E0(rho) - rho * R must be positive");
  const double geometric = 1.0 - std::pow(static_cast<double>(q), -lambda / rate);
  return (q - 1) / geometric * std::exp(-static_cast<double>(n) * (m + 1) * e0_raw(rho, dmc));
}

double truncation_error_bound(int n, int tau, double rate, const DmcSpec& dmc) {
  check_rate(rate);
  if (n < 1 || tau < 0) throw std::invalid_argument("bound: need n >= 1, tau >= 0");
  return std::exp(-static_cast<double>(n) * tau * e_r(rate, dmc));
}

ExponentReport exponent_report(double rate, const DmcSpec& dmc) {
  check_rate(rate);
  ExponentReport rep;
  rep.rate = rate;
  rep.cutoff_rate = cutoff_rate(dmc);
  rep.capacity = capacity(dmc);
  rep.e_r = e_r(rate, dmc);
  rep.e_c = e_c(rate, dmc);
  rep.e_el = e_el(rate, dmc);
  return rep;
}

}  // namespace mlsda
