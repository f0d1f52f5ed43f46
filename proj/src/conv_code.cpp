#include "mlsda/conv_code.hpp"

#include <bit>
#include <stdexcept>

namespace mlsda {
namespace {

// 3 bits per octal digit, MSB first: "554" -> 1 0 1 1 0 1 1 0 0.
std::vector<uint8_t> expand_octal(const std::string& digits) {
  if (digits.empty()) throw std::invalid_argument("empty generator string");
  std::vector<uint8_t> bits;
  bits.reserve(digits.size() * 3);
  for (char c : digits) {
    if (c < '0' || c > '7')
      throw std::invalid_argument("generator \"" + digits + "\" is not octal");
    int v = c - '0';
    bits.push_back(static_cast<uint8_t>((v >> 2) & 1));
    bits.push_back(static_cast<uint8_t>((v >> 1) & 1));
    bits.push_back(static_cast<uint8_t>(v & 1));
  }
  return bits;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

CodeSpec make_code(const std::string& octal_generators, int m, int L) {
  if (m < 1 || m > 20) throw std::invalid_argument("memory order m must be in [1, 20]");
  if (L < 1) throw std::invalid_argument("message length L must be positive");
  const auto parts = split_commas(octal_generators);
  if (parts.size() < 2 || parts.size() > 8)
    throw std::invalid_argument("expected 2 to 8 comma-separated generators");

  CodeSpec code;
  code.n = static_cast<int>(parts.size());
  code.m = m;
  code.L = L;
  for (const auto& part : parts) {
    const auto bits = expand_octal(part);
    if (static_cast<int>(bits.size()) < m + 1)
      throw std::invalid_argument("generator \"" + part + "\" has fewer than m+1 = " +
                                  std::to_string(m + 1) + " bits");
    uint32_t mask = 0;
    for (int j = 0; j <= m; ++j) mask |= static_cast<uint32_t>(bits[j]) << j;
    for (size_t j = m + 1; j < bits.size(); ++j)
      if (bits[j])
        throw std::invalid_argument("generator \"" + part + "\" has a nonzero bit past tap " +
                                    std::to_string(m) + "; wrong m or generator");
    code.gen_mask.push_back(mask);
    if (!code.id.empty()) code.id.push_back(',');
    code.id += part;
  }

  bool any_tap0 = false, any_tapm = false;
  for (uint32_t g : code.gen_mask) {
    any_tap0 |= (g & 1u) != 0;
    any_tapm |= (g >> m) & 1u;
  }
  if (!any_tap0 || !any_tapm)
    throw std::invalid_argument("degenerate code: need tap 0 and tap m set in some generator");
  return code;
}

std::pair<uint32_t, uint32_t> trellis_step(const CodeSpec& code, uint32_t state, int input_bit) {
  if (state >= code.num_states()) throw std::invalid_argument("state out of range");
  if (input_bit != 0 && input_bit != 1) throw std::invalid_argument("input bit must be 0 or 1");
  // reg bit j = input from j steps ago, with the current bit at j = 0.
  const uint32_t reg = (state << 1) | static_cast<uint32_t>(input_bit);
  uint32_t out = 0;
  for (int i = 0; i < code.n; ++i)
    out |= static_cast<uint32_t>(std::popcount(reg & code.gen_mask[i]) & 1) << i;
  const uint32_t next = reg & (code.num_states() - 1);
  return {next, out};
}

BitVec encode(const CodeSpec& code, const BitVec& message) {
  if (static_cast<int>(message.size()) != code.L)
    throw std::invalid_argument("message length does not match L");
  BitVec cw;
  cw.reserve(code.codeword_bits());
  uint32_t state = 0;
  for (int l = 0; l < code.total_levels(); ++l) {
    int bit = 0;
    if (l < code.L) {
      bit = message[l];
      if (bit != 0 && bit != 1) throw std::invalid_argument("message bits must be 0 or 1");
    }
    const auto [next, out] = trellis_step(code, state, bit);
    for (int i = 0; i < code.n; ++i) cw.push_back(static_cast<uint8_t>((out >> i) & 1));
    state = next;
  }
  return cw;
}

}  // namespace mlsda
