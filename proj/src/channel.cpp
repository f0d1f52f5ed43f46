#include "mlsda/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlsda {

ChannelModel make_bsc(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("BSC crossover must lie in (0, 0.5)");
  ChannelModel ch;
  ch.kind = ChannelKind::bsc;
  ch.epsilon = epsilon;
  ch.ebn0_db = std::numeric_limits<double>::quiet_NaN();
  return ch;
}

ChannelModel make_bsc_ebn0(double ebn0_db) {
  ChannelModel ch = make_bsc(ebn0_to_epsilon(ebn0_db));
  ch.ebn0_db = ebn0_db;
  return ch;
}

ChannelModel make_awgn(double ebn0_db, double rate_bits) {
  if (!(rate_bits > 0.0 && rate_bits <= 1.0))
    throw std::invalid_argument("code rate must lie in (0, 1]");
  ChannelModel ch;
  ch.kind = ChannelKind::awgn_bpsk;
  ch.ebn0_db = ebn0_db;
  ch.rate_bits = rate_bits;
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  ch.sigma = std::sqrt(1.0 / (2.0 * rate_bits * ebn0));  // 0 at ebn0 = +inf
  ch.epsilon = std::numeric_limits<double>::quiet_NaN();
  return ch;
}

double ebn0_to_epsilon(double ebn0_db) {
  return 0.5 * std::erfc(std::sqrt(std::pow(10.0, ebn0_db / 10.0)));
}

ReceivedSequence transmit(const ChannelModel& ch, const BitVec& codeword, std::mt19937_64& rng) {
  if (ch.kind == ChannelKind::bsc) {
    std::bernoulli_distribution flip(ch.epsilon);
    BitVec rx(codeword);
    for (auto& b : rx) b ^= static_cast<uint8_t>(flip(rng));
    return rx;
  }
  std::vector<double> rx(codeword.size());
  std::normal_distribution<double> noise(0.0, ch.sigma > 0.0 ? ch.sigma : 1.0);
  for (size_t i = 0; i < codeword.size(); ++i) {
    const double x = codeword[i] ? -1.0 : 1.0;
    rx[i] = x + (ch.sigma > 0.0 ? noise(rng) : 0.0);
  }
  return rx;
}

SoftObservation soften(const ChannelModel& ch, const ReceivedSequence& rx) {
  SoftObservation obs;
  if (ch.kind == ChannelKind::bsc) {
    const auto* bits = std::get_if<BitVec>(&rx);
    if (!bits) throw std::logic_error("BSC model given real-valued samples");
    obs.y = *bits;
    obs.w.assign(bits->size(), 1.0);
    return obs;
  }
  const auto* samples = std::get_if<std::vector<double>>(&rx);
  if (!samples) throw std::logic_error("AWGN model given hard bits");
  obs.y.reserve(samples->size());
  obs.w.reserve(samples->size());
  for (double r : *samples) {
    obs.y.push_back(static_cast<uint8_t>(r < 0.0));
    obs.w.push_back(std::fabs(r));
  }
  return obs;
}

}  // namespace mlsda
