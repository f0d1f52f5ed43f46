// Gallager-style error exponents and the window sizing rules derived from
// them. Every rate in this interface is in nats per information bit.
#pragma once

#include <vector>

namespace mlsda {

// Discrete memoryless channel with a fixed input distribution.
// transition[j][i] = P(output j | input i); each column sums to one.
struct DmcSpec {
  std::vector<std::vector<double>> transition;
  std::vector<double> p;  // input distribution, one entry per input
};

DmcSpec make_bsc_dmc(double epsilon);

// Throws std::invalid_argument unless the transition matrix is column
// stochastic, entries and p are probabilities, and sizes are consistent.
void validate_dmc(const DmcSpec& dmc);

// Random-coding exponent function E0 and its list-variant companion E1,
// both over rho in [0, 1]. E1 >= E0 pointwise, with equality only at
// rho = 0 or for deterministic channels.
double e0(double rho, const DmcSpec& dmc);
double e1(double rho, const DmcSpec& dmc);

// Closed forms for the binary symmetric channel, epsilon in (0, 0.5].
double bsc_e0(double rho, double epsilon);
double bsc_e1(double rho, double epsilon);

double cutoff_rate(const DmcSpec& dmc);  // E0(1)
double capacity(const DmcSpec& dmc);     // dE0/drho at rho = 0

// Random-coding exponent: max over rho in [0,1] of E0(rho) - rho * R.
double e_r(double rate, const DmcSpec& dmc);

// Sequential-decoding computational exponent: R0 below the cutoff rate,
// the root of E0(rho) = rho * R between cutoff and capacity, zero above.
double e_c(double rate, const DmcSpec& dmc);

// Early-elimination exponent: max of E1(rho) - rho * R over the closure of
// {rho in [0,1] : E0(rho) >= rho * R}.
double e_el(double rate, const DmcSpec& dmc);

// Rounds a positive value to three significant decimal digits. Window
// ratios are quoted at this precision before sizing.
double round_sig3(double x);

struct WindowRule {
  double ratio = 0.0;  // exponent ratio, rounded to three significant digits
  int window_min = 0;  // smallest sufficient window, floor(ratio*(m+1)) + 1
};

// Sufficient early-elimination window: ratio E_c(R) / E_el(R). Throws
// std::domain_error at rates at or above capacity.
WindowRule elimination_window(double rate, int m, const DmcSpec& dmc);

// Sufficient truncation (backsearch) window: ratio E_c(R) / E_r(R). Throws
// std::domain_error at rates at or above capacity.
WindowRule truncation_window(double rate, int m, const DmcSpec& dmc);

// Union bound on the error probability of maximum-likelihood decoding of a
// terminated trellis with q-ary inputs, n symbols per branch, and memory m:
//   (q - 1) / (1 - q^(-lambda/R)) * exp(-n * (m+1) * E0(rho)),
// lambda = E0(rho) - rho * R. Throws std::domain_error unless lambda > 0.
double viterbi_error_bound(int q, int n, int m, double rate, double rho, const DmcSpec& dmc);

// Bound on the extra error probability of deciding bits tau levels behind
// the search front: exp(-n * tau * E_r(R)).
double truncation_error_bound(int n, int tau, double rate, const DmcSpec& dmc);

struct ExponentReport {
  double rate = 0.0;  // nats per information bit
  double cutoff_rate = 0.0;
  double capacity = 0.0;
  double e_r = 0.0;
  double e_c = 0.0;
  double e_el = 0.0;
};

ExponentReport exponent_report(double rate, const DmcSpec& dmc);

}  // namespace mlsda
