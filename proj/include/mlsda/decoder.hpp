// Priority-first (stack) maximum-likelihood sequential decoding.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "mlsda/channel.hpp"
#include "mlsda/conv_code.hpp"

namespace mlsda {

struct DecoderConfig {
  std::optional<int> delta;       // early-elimination window in levels; empty = disabled
  std::optional<int> tau;         // backsearch limit in levels; empty = disabled
  std::optional<size_t> openmax;  // Open Stack capacity; empty = unbounded
  uint64_t seed = 0;              // tie-break stream seed
};

struct DecoderStats {
  uint64_t pops = 0;
  uint64_t branch_computations = 0;
  uint64_t early_eliminations = 0;  // paths dropped by the window rule at pop time
  uint64_t merges = 0;              // successor eliminations against Closed/Open entries
  uint64_t prefix_discards = 0;     // popped paths contradicting the decided prefix
  size_t peak_stack = 0;
  uint32_t ell_max_final = 0;       // deepest level reached by any popped path
};

struct DecodeResult {
  bool ok = false;  // false: search exhausted; callers count all L bits as errors
  BitVec message;   // L bits
  BitVec codeword;  // re-encoded from message when ok
  double metric = 0.0;
  DecoderStats stats;
};

// Per-branch metric: sum of w_j over the n symbols at this level whose branch
// label disagrees with the hard decision y_j. Nonnegative, zero only when the
// label matches every hard decision or the weights vanish.
double branch_metric(const CodeSpec& code, const SoftObservation& obs, int level,
                     uint32_t out_word);

namespace detail {
// Shared precondition for every decoder entry point: y and w must both hold
// n*(L+m) entries, y must be binary, w must be finite and nonnegative.
void check_observation(const CodeSpec& code, const SoftObservation& obs);
}  // namespace detail

// With delta, tau, and openmax all unset the returned path is maximum
// likelihood. Each knob trades a bounded error-probability increase for
// search effort; see DecoderConfig.
DecodeResult decode(const CodeSpec& code, const SoftObservation& obs, const DecoderConfig& cfg);

// Streaming variant: with finite tau the search commits a decided prefix as
// the front advances and hands each newly decided information bit to sink.
DecodeResult decode_stream(const CodeSpec& code, const SoftObservation& obs,
                           const DecoderConfig& cfg, const std::function<void(int)>& sink);

}  // namespace mlsda
