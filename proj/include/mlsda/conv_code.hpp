// Rate-1/n feedforward convolutional codes on a zero-tail terminated trellis.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mlsda {

using BitVec = std::vector<uint8_t>;

// The state packs the last m input bits, most recent bit in the low-order
// position, so next_state = ((state << 1) | input_bit) mod 2^m.
struct CodeSpec {
  int n = 0;                       // output symbols per input bit
  int m = 0;                       // memory order, 2^m trellis states
  int L = 0;                       // message length in bits
  std::vector<uint32_t> gen_mask;  // tap j of generator i = bit j of gen_mask[i]
  std::string id;                  // normalized octal form, e.g. "554,774"

  uint32_t num_states() const { return 1u << m; }
  int total_levels() const { return L + m; }
  long codeword_bits() const { return static_cast<long>(n) * (L + m); }
};

// Parses comma-separated octal generators. Each string expands MSB-first,
// 3 bits per digit; the first m+1 expanded bits are the taps (tap 0 acts on
// the current input bit, tap m on the oldest register bit) and any trailing
// pad bits must be zero. Throws std::invalid_argument on malformed input.
CodeSpec make_code(const std::string& octal_generators, int m, int L);

// One trellis branch. Returns the successor state and the n branch output
// bits packed into a word (output i at bit i).
std::pair<uint32_t, uint32_t> trellis_step(const CodeSpec& code, uint32_t state, int input_bit);

// Zero-tail encoding: L message bits followed by m flush zeros, n output
// bits per step, n*(L+m) bits total. The final encoder state is zero.
BitVec encode(const CodeSpec& code, const BitVec& message);

}  // namespace mlsda
