// Monte-Carlo sweep harness: one decoder configuration grid, paired noise
// across window settings, CSV output.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlsda/channel.hpp"

namespace mlsda {

struct SimConfig {
  std::string generators;  // comma-separated octal, see make_code
  int m = 0;
  int L = 0;
  ChannelKind channel = ChannelKind::bsc;
  // Exactly one of the two point lists may be nonempty; the AWGN channel
  // only accepts Eb/N0 points. Each entry is one sweep point.
  std::vector<double> ebn0_db;
  std::vector<double> epsilons;
  // One record per point and per window; empty optional = no window. Every
  // window decodes the same transmissions, so comparisons are paired.
  std::vector<std::optional<int>> deltas = {std::nullopt};
  std::optional<int> tau;
  std::optional<size_t> openmax;
  uint64_t trials = 0;         // hard cap on transmissions per point
  uint64_t target_errors = 0;  // stop a point once every window saw this many; 0 = never
  uint64_t seed = 1;
  double quantile = 0.999;  // stack-size quantile reported per record
};

struct SimRecord {
  std::string code_id;
  double ebn0_db = 0.0;  // NaN when the point was given as a crossover
  double epsilon = 0.0;  // NaN for AWGN points
  std::optional<int> delta;
  std::optional<int> tau;
  std::optional<size_t> openmax;
  uint64_t trials = 0;
  uint64_t info_bits = 0;
  uint64_t bit_errors = 0;
  double ber = 0.0;
  uint64_t decode_failures = 0;
  double avg_branch_computations_per_bit = 0.0;
  size_t p999_stack_size = 0;
  double mean_peak_stack = 0.0;
  double wall_seconds = 0.0;
  uint64_t seed = 0;
};

// Runs the full grid. Identical configs reproduce identical records except
// for wall_seconds. Throws std::invalid_argument on a malformed config.
std::vector<SimRecord> run_sweep(const SimConfig& cfg);

// Order statistic at the given quantile: rank floor(q * T) + 1 of the
// sorted sample (clamped to [1, T]). Warns on stderr when the sample is too
// small to resolve the quantile; throws std::invalid_argument when empty.
size_t quantile_stack(const std::vector<size_t>& peaks, double q);

std::string csv_header();
std::string to_csv_row(const SimRecord& rec);
void write_csv(const std::string& path, const std::vector<SimRecord>& records);

}  // namespace mlsda
