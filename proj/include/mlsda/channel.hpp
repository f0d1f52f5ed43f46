// Memoryless binary-input channels and the decoder-facing observation view.
#pragma once

#include <random>
#include <variant>
#include <vector>

#include "mlsda/conv_code.hpp"

namespace mlsda {

enum class ChannelKind { bsc, awgn_bpsk };

// BSC transmits hard bits with crossover epsilon. AWGN maps 0 -> +1,
// 1 -> -1 and adds N(0, sigma^2) with sigma^2 = 1 / (2 * rate_bits * Eb/N0).
struct ChannelModel {
  ChannelKind kind = ChannelKind::bsc;
  double epsilon = 0.0;    // BSC crossover
  double ebn0_db = 0.0;    // NaN when the model was built from epsilon directly
  double rate_bits = 0.0;  // code rate used for AWGN noise scaling
  double sigma = 0.0;      // AWGN noise standard deviation, 0 disables noise
};

ChannelModel make_bsc(double epsilon);
ChannelModel make_bsc_ebn0(double ebn0_db);
ChannelModel make_awgn(double ebn0_db, double rate_bits);

// Antipodal-signaling equivalent crossover: 0.5 * erfc(sqrt(10^(dB/10))).
double ebn0_to_epsilon(double ebn0_db);

// Hard bits from the BSC, real BPSK samples from the AWGN channel.
using ReceivedSequence = std::variant<BitVec, std::vector<double>>;

// Hard decisions y plus nonnegative per-symbol reliabilities w. The decoders
// only ever see this view; scaling all w by a constant changes no decision.
struct SoftObservation {
  BitVec y;
  std::vector<double> w;
};

ReceivedSequence transmit(const ChannelModel& ch, const BitVec& codeword, std::mt19937_64& rng);

// BSC: y = received bits, w = 1. AWGN: y = (r < 0), w = |r|.
SoftObservation soften(const ChannelModel& ch, const ReceivedSequence& rx);

}  // namespace mlsda
