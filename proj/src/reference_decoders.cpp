#include "mlsda/reference_decoders.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mlsda {

DecodeResult viterbi_decode(const CodeSpec& code, const SoftObservation& obs) {
  detail::check_observation(code, obs);

  const int levels = code.total_levels();
  const uint32_t states = code.num_states();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> cur(states, inf);
  std::vector<double> nxt(states, inf);
  // pred[l * states + s] is the survivor predecessor of state s at level l+1.
  std::vector<uint32_t> pred(static_cast<size_t>(levels) * states, UINT32_MAX);
  cur[0] = 0.0;

  uint64_t branches = 0;
  for (int lvl = 0; lvl < levels; ++lvl) {
    std::fill(nxt.begin(), nxt.end(), inf);
    const int num_inputs = lvl < code.L ? 2 : 1;  // tail levels shift in zeros
    for (uint32_t s = 0; s < states; ++s) {
      if (cur[s] == inf) continue;
      for (int bit = 0; bit < num_inputs; ++bit) {
        const auto [ns, out] = trellis_step(code, s, bit);
        const double met = cur[s] + branch_metric(code, obs, lvl, out);
        ++branches;
        double& best = nxt[ns];
        uint32_t& p = pred[static_cast<size_t>(lvl) * states + ns];
        if (met < best || (met == best && s < p)) {
          best = met;
          p = s;
        }
      }
    }
    std::swap(cur, nxt);
  }

  // Termination forces the all-zero state; walk the survivor chain back.
  // The input bit that entered a state sits in its low-order position.
  BitVec path_bits(levels);
  uint32_t s = 0;
  for (int lvl = levels - 1; lvl >= 0; --lvl) {
    path_bits[lvl] = static_cast<uint8_t>(s & 1u);
    s = pred[static_cast<size_t>(lvl) * states + s];
  }

  DecodeResult res;
  res.ok = true;
  res.metric = cur[0];
  res.message.assign(path_bits.begin(), path_bits.begin() + code.L);
  res.codeword = encode(code, res.message);
  res.stats.branch_computations = branches;
  return res;
}

DecodeResult exhaustive_ml(const CodeSpec& code, const SoftObservation& obs) {
  detail::check_observation(code, obs);
  if (code.L > 24) throw std::invalid_argument("exhaustive_ml: L too large, limit is 24");

  const uint64_t count = 1ull << code.L;
  double best = std::numeric_limits<double>::infinity();
  BitVec best_msg;
  BitVec best_cw;
  BitVec msg(code.L);

  for (uint64_t c = 0; c < count; ++c) {
    for (int t = 0; t < code.L; ++t) msg[t] = static_cast<uint8_t>((c >> (code.L - 1 - t)) & 1u);
    const BitVec cw = encode(code, msg);
    double met = 0.0;
    for (size_t j = 0; j < cw.size(); ++j)
      if (cw[j] != obs.y[j]) met += obs.w[j];
    // Strict comparison keeps the first, lexicographically smallest winner.
    if (met < best) {
      best = met;
      best_msg = msg;
      best_cw = cw;
    }
  }

  DecodeResult res;
  res.ok = true;
  res.metric = best;
  res.message = std::move(best_msg);
  res.codeword = std::move(best_cw);
  return res;
}

}  // namespace mlsda
