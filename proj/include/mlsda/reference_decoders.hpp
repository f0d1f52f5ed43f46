// Reference maximum-likelihood decoders used to certify the sequential search.
#pragma once

#include "mlsda/channel.hpp"
#include "mlsda/conv_code.hpp"
#include "mlsda/decoder.hpp"

namespace mlsda {

// Soft-metric Viterbi over the terminated trellis. Metric ties prefer the
// smaller predecessor state, so the survivor set is deterministic. Always
// succeeds; fills message, codeword, metric, and branch_computations.
DecodeResult viterbi_decode(const CodeSpec& code, const SoftObservation& obs);

// Brute force over all 2^L messages; requires L <= 24. Ties resolve to the
// lexicographically smallest message, which pins the result for tests.
DecodeResult exhaustive_ml(const CodeSpec& code, const SoftObservation& obs);

}  // namespace mlsda
