// Command-line front end: exponent tables, window sizing, Monte-Carlo
// sweeps, and single-shot encode/decode.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlsda/channel.hpp"
#include "mlsda/conv_code.hpp"
#include "mlsda/decoder.hpp"
#include "mlsda/exponents.hpp"
#include "mlsda/sim.hpp"

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_real(const std::string& s, const std::string& what) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument(what + ": not a number: '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s, const std::string& what) {
  size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": not an integer: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument(what + ": not an integer: '" + s + "'");
  return v;
}

// Window-style knobs accept an integer or the literal "inf" (no limit).
std::optional<long long> parse_limit(const std::string& s, const std::string& what) {
  if (s == "inf") return std::nullopt;
  return parse_integer(s, what);
}

// Sweep points: either a comma list "2,3,4" or an inclusive range
// "start:stop:step" in dB.
std::vector<double> parse_points(const std::string& s, const std::string& what) {
  std::vector<double> points;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw std::invalid_argument(what + ": expected start:stop:step");
    const double start = parse_real(parts[0], what);
    const double stop = parse_real(parts[1], what);
    const double step = parse_real(parts[2], what);
    if (!(step > 0.0)) throw std::invalid_argument(what + ": step must be positive");
    if (stop < start) throw std::invalid_argument(what + ": stop precedes start");
    for (double v = start; v <= stop + 1e-9; v += step) points.push_back(v);
    return points;
  }
  for (const std::string& part : split_commas(s)) points.push_back(parse_real(part, what));
  return points;
}

mlsda::BitVec parse_bits(const std::string& s, const std::string& what) {
  mlsda::BitVec bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument(what + ": bits must be 0 or 1");
    bits.push_back(static_cast<uint8_t>(c - '0'));
  }
  if (bits.empty()) throw std::invalid_argument(what + ": empty bit string");
  return bits;
}

std::string bits_to_string(const mlsda::BitVec& bits) {
  std::string s;
  s.reserve(bits.size());
  for (uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

// Shared channel/rate arguments for the exponents and window subcommands.
struct ExponentArgs {
  std::string channel = "bsc";
  double epsilon = 0.0;
  double ebn0 = 0.0;
  double rate_bits = 0.0;
  double rate_nats = 0.0;
  int m = 0;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* ebn0_opt = nullptr;
  CLI::Option* rate_bits_opt = nullptr;
  CLI::Option* rate_nats_opt = nullptr;
};

void add_exponent_options(CLI::App* cmd, ExponentArgs& args, bool need_m) {
  cmd->add_option("--channel", args.channel, "channel family (bsc)")
      ->check(CLI::IsMember({"bsc"}));
  args.epsilon_opt = cmd->add_option("--epsilon", args.epsilon, "BSC crossover probability");
  args.ebn0_opt = cmd->add_option("--ebn0", args.ebn0, "Eb/N0 in dB, converted to a crossover");
  args.rate_bits_opt = cmd->add_option("--rate-bits", args.rate_bits, "code rate in bits/symbol");
  args.rate_nats_opt = cmd->add_option("--rate-nats", args.rate_nats, "code rate in nats/symbol");
  auto* m_opt = cmd->add_option("--m", args.m, "code memory order");
  if (need_m) m_opt->required();
}

mlsda::DmcSpec resolve_dmc(const ExponentArgs& args) {
  const bool have_eps = args.epsilon_opt->count() > 0;
  const bool have_db = args.ebn0_opt->count() > 0;
  if (have_eps == have_db)
    throw std::invalid_argument("give exactly one of --epsilon and --ebn0");
  const double eps = have_eps ? args.epsilon : mlsda::ebn0_to_epsilon(args.ebn0);
  return mlsda::make_bsc_dmc(eps);
}

double resolve_rate_nats(const ExponentArgs& args) {
  const bool have_bits = args.rate_bits_opt->count() > 0;
  const bool have_nats = args.rate_nats_opt->count() > 0;
  if (have_bits == have_nats)
    throw std::invalid_argument("give exactly one of --rate-bits and --rate-nats");
  return have_bits ? args.rate_bits * kLn2 : args.rate_nats;
}

void print_both_units(const char* name, double nats) {
  std::printf("%-22s = %.10g nats  (%.10g bits)\n", name, nats, nats / kLn2);
}

int run_exponents(const ExponentArgs& args) {
  const mlsda::DmcSpec dmc = resolve_dmc(args);
  const double rate = resolve_rate_nats(args);
  const mlsda::ExponentReport rep = mlsda::exponent_report(rate, dmc);
  std::printf("%-22s = %.10g\n", "epsilon", dmc.transition[1][0]);
  print_both_units("rate", rep.rate);
  print_both_units("cutoff_rate", rep.cutoff_rate);
  print_both_units("capacity", rep.capacity);
  print_both_units("E_r", rep.e_r);
  print_both_units("E_c", rep.e_c);
  print_both_units("E_el", rep.e_el);
  if (args.m >= 1) {
    try {
      const mlsda::WindowRule elim = mlsda::elimination_window(rate, args.m, dmc);
      const mlsda::WindowRule trunc = mlsda::truncation_window(rate, args.m, dmc);
      std::printf("%-22s = %.10g\n", "elimination_ratio", elim.ratio);
      std::printf("%-22s = %d\n", "delta_min", elim.window_min);
      std::printf("%-22s = %.10g\n", "truncation_ratio", trunc.ratio);
      std::printf("%-22s = %d\n", "tau_min", trunc.window_min);
    } catch (const std::domain_error&) {
      std::printf("windows undefined: rate at or above capacity\n");
    }
  }
  return 0;
}

int run_window(const ExponentArgs& args, const std::string& kind) {
  const mlsda::DmcSpec dmc = resolve_dmc(args);
  const double rate = resolve_rate_nats(args);
  const mlsda::WindowRule rule = kind == "truncation"
                                     ? mlsda::truncation_window(rate, args.m, dmc)
                                     : mlsda::elimination_window(rate, args.m, dmc);
  std::printf("ratio = %.10g\n", rule.ratio);
  std::printf("window_min = %d\n", rule.window_min);
  return 0;
}

// Flags for the simulate subcommand. List-valued flags stay strings so a
// JSON config can supply the same spellings.
struct SimulateArgs {
  std::string code;
  int n = 0;
  int m = 0;
  int L = 0;
  std::string channel = "bsc";
  std::string ebn0;
  std::string epsilon;
  std::string delta = "inf";
  std::string tau = "inf";
  std::string openmax = "inf";
  uint64_t trials = 0;
  uint64_t target_errors = 0;
  uint64_t seed = 1;
  double quantile = 0.999;
  std::string out;
  std::string config;
};

// One JSON scalar or array rendered in the flag's comma-list spelling.
std::string json_as_list(const nlohmann::json& value, const std::string& key) {
  std::ostringstream s;
  const auto append = [&s, &key](const nlohmann::json& item) {
    if (item.is_string()) {
      s << item.get<std::string>();
    } else if (item.is_number()) {
      s << std::setprecision(17) << item.get<double>();
    } else {
      throw std::invalid_argument("config: " + key + " entries must be numbers or strings");
    }
  };
  if (value.is_array()) {
    if (value.empty()) throw std::invalid_argument("config: " + key + " is empty");
    for (size_t i = 0; i < value.size(); ++i) {
      if (i > 0) s << ',';
      append(value[i]);
    }
  } else {
    append(value);
  }
  return s.str();
}

// Config keys mirror the long flags; an explicit command-line flag wins.
void merge_config(const CLI::App& cmd, SimulateArgs& args) {
  std::ifstream in(args.config);
  if (!in) throw std::invalid_argument("config: cannot open " + args.config);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: " + args.config + ": " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (cmd.count("--" + key) > 0) continue;
    if (key == "code") {
      args.code = value.get<std::string>();
    } else if (key == "n") {
      args.n = value.get<int>();
    } else if (key == "m") {
      args.m = value.get<int>();
    } else if (key == "L") {
      args.L = value.get<int>();
    } else if (key == "channel") {
      args.channel = value.get<std::string>();
    } else if (key == "ebn0") {
      args.ebn0 = json_as_list(value, key);
    } else if (key == "epsilon") {
      args.epsilon = json_as_list(value, key);
    } else if (key == "delta") {
      args.delta = json_as_list(value, key);
    } else if (key == "tau") {
      args.tau = json_as_list(value, key);
    } else if (key == "openmax") {
      args.openmax = json_as_list(value, key);
    } else if (key == "trials") {
      args.trials = value.get<uint64_t>();
    } else if (key == "target-errors") {
      args.target_errors = value.get<uint64_t>();
    } else if (key == "seed") {
      args.seed = value.get<uint64_t>();
    } else if (key == "quantile") {
      args.quantile = value.get<double>();
    } else if (key == "out") {
      args.out = value.get<std::string>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
}

int run_simulate(const CLI::App& cmd, SimulateArgs& args) {
  if (!args.config.empty()) merge_config(cmd, args);
  if (args.code.empty()) throw std::invalid_argument("simulate: --code is required");
  if (args.n > 0) {
    const size_t listed = split_commas(args.code).size();
    if (static_cast<size_t>(args.n) != listed)
      throw std::invalid_argument("simulate: --n disagrees with the generator list");
  }
  if (args.trials == 0) throw std::invalid_argument("simulate: trials must be at least 1");

  mlsda::SimConfig cfg;
  cfg.generators = args.code;
  cfg.m = args.m;
  cfg.L = args.L;
  if (args.channel == "bsc") {
    cfg.channel = mlsda::ChannelKind::bsc;
  } else if (args.channel == "awgn") {
    cfg.channel = mlsda::ChannelKind::awgn_bpsk;
  } else {
    throw std::invalid_argument("simulate: unknown channel '" + args.channel + "'");
  }
  if (!args.ebn0.empty()) cfg.ebn0_db = parse_points(args.ebn0, "--ebn0");
  if (!args.epsilon.empty()) {
    for (const std::string& part : split_commas(args.epsilon))
      cfg.epsilons.push_back(parse_real(part, "--epsilon"));
  }
  cfg.deltas.clear();
  for (const std::string& part : split_commas(args.delta)) {
    const std::optional<long long> v = parse_limit(part, "--delta");
    if (v.has_value()) {
      cfg.deltas.push_back(static_cast<int>(*v));
    } else {
      cfg.deltas.push_back(std::nullopt);
    }
  }
  if (const std::optional<long long> v = parse_limit(args.tau, "--tau"); v.has_value())
    cfg.tau = static_cast<int>(*v);
  if (const std::optional<long long> v = parse_limit(args.openmax, "--openmax"); v.has_value()) {
    if (*v < 0) throw std::invalid_argument("--openmax: must be nonnegative");
    cfg.openmax = static_cast<size_t>(*v);
  }
  cfg.trials = args.trials;
  cfg.target_errors = args.target_errors;
  cfg.seed = args.seed;
  cfg.quantile = args.quantile;

  const std::vector<mlsda::SimRecord> records = mlsda::run_sweep(cfg);
  if (args.out.empty()) {
    std::printf("%s\n", mlsda::csv_header().c_str());
    for (const mlsda::SimRecord& rec : records)
      std::printf("%s\n", mlsda::to_csv_row(rec).c_str());
  } else {
    mlsda::write_csv(args.out, records);
    std::fprintf(stderr, "%zu records -> %s\n", records.size(), args.out.c_str());
  }
  return 0;
}

struct CodecArgs {
  std::string code;
  int m = 0;
  std::string message;
  std::string llr_path;
  std::string delta = "inf";
  std::string tau = "inf";
  std::string openmax = "inf";
  uint64_t seed = 0;
};

int run_encode(const CodecArgs& args) {
  const mlsda::BitVec message = parse_bits(args.message, "--message");
  const mlsda::CodeSpec code =
      mlsda::make_code(args.code, args.m, static_cast<int>(message.size()));
  std::printf("%s\n", bits_to_string(mlsda::encode(code, message)).c_str());
  return 0;
}

// LLR convention: one real per code symbol, positive favors bit 0; the hard
// decision is the sign and the reliability weight is the magnitude.
int run_decode(const CodecArgs& args) {
  std::ifstream in(args.llr_path);
  if (!in) throw std::invalid_argument("decode: cannot open " + args.llr_path);
  std::vector<double> llr{std::istream_iterator<double>(in), std::istream_iterator<double>()};
  if (!in.eof()) throw std::invalid_argument("decode: malformed value in " + args.llr_path);
  if (llr.empty()) throw std::invalid_argument("decode: " + args.llr_path + " is empty");

  const int n = static_cast<int>(split_commas(args.code).size());
  if (llr.size() % static_cast<size_t>(n) != 0)
    throw std::invalid_argument("decode: symbol count is not a multiple of n");
  const int L = static_cast<int>(llr.size()) / n - args.m;
  if (L < 1) throw std::invalid_argument("decode: too few symbols for this code");
  const mlsda::CodeSpec code = mlsda::make_code(args.code, args.m, L);

  mlsda::SoftObservation obs;
  obs.y.reserve(llr.size());
  obs.w.reserve(llr.size());
  for (double v : llr) {
    obs.y.push_back(v < 0.0 ? 1 : 0);
    obs.w.push_back(std::fabs(v));
  }

  mlsda::DecoderConfig cfg;
  cfg.seed = args.seed;
  if (const std::optional<long long> v = parse_limit(args.delta, "--delta"); v.has_value())
    cfg.delta = static_cast<int>(*v);
  if (const std::optional<long long> v = parse_limit(args.tau, "--tau"); v.has_value())
    cfg.tau = static_cast<int>(*v);
  if (const std::optional<long long> v = parse_limit(args.openmax, "--openmax"); v.has_value()) {
    if (*v < 0) throw std::invalid_argument("--openmax: must be nonnegative");
    cfg.openmax = static_cast<size_t>(*v);
  }

  const mlsda::DecodeResult result = mlsda::decode(code, obs, cfg);
  std::fprintf(stderr,
               "metric=%.10g pops=%llu branches=%llu eliminations=%llu merges=%llu "
               "discards=%llu peak_stack=%zu ell_max=%u\n",
               result.metric, static_cast<unsigned long long>(result.stats.pops),
               static_cast<unsigned long long>(result.stats.branch_computations),
               static_cast<unsigned long long>(result.stats.early_eliminations),
               static_cast<unsigned long long>(result.stats.merges),
               static_cast<unsigned long long>(result.stats.prefix_discards),
               result.stats.peak_stack, result.stats.ell_max_final);
  if (!result.ok) {
    std::fprintf(stderr, "decode: search exhausted without reaching the terminal node\n");
    return 2;
  }
  std::printf("%s\n", bits_to_string(result.message).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential maximum-likelihood decoding workbench"};
  app.require_subcommand(1);

  ExponentArgs exp_args;
  CLI::App* exp_cmd = app.add_subcommand("exponents", "exponent table for a channel and rate");
  add_exponent_options(exp_cmd, exp_args, false);

  ExponentArgs win_args;
  std::string win_kind = "elimination";
  CLI::App* win_cmd = app.add_subcommand("window", "sufficient window for a channel and rate");
  add_exponent_options(win_cmd, win_args, true);
  win_cmd->add_option("--kind", win_kind, "elimination or truncation")
      ->check(CLI::IsMember({"elimination", "truncation"}));

  SimulateArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo BER/complexity sweep");
  sim_cmd->add_option("--code", sim_args.code, "comma-separated octal generators");
  sim_cmd->add_option("--n", sim_args.n, "outputs per input bit (checked against --code)");
  sim_cmd->add_option("--m", sim_args.m, "code memory order");
  sim_cmd->add_option("--L", sim_args.L, "message length in bits");
  sim_cmd->add_option("--channel", sim_args.channel, "bsc or awgn");
  sim_cmd->add_option("--ebn0", sim_args.ebn0, "dB points: list or start:stop:step");
  sim_cmd->add_option("--epsilon", sim_args.epsilon, "BSC crossover points, comma list");
  sim_cmd->add_option("--delta", sim_args.delta, "early-elimination windows, ints or inf");
  sim_cmd->add_option("--tau", sim_args.tau, "backsearch limit, int or inf");
  sim_cmd->add_option("--openmax", sim_args.openmax, "Open Stack capacity, int or inf");
  sim_cmd->add_option("--trials", sim_args.trials, "transmissions per point");
  sim_cmd->add_option("--target-errors", sim_args.target_errors,
                      "stop a point once every window saw this many bit errors");
  sim_cmd->add_option("--seed", sim_args.seed, "master seed");
  sim_cmd->add_option("--quantile", sim_args.quantile, "stack-size quantile to report");
  sim_cmd->add_option("--out", sim_args.out, "CSV path (stdout when omitted)");
  sim_cmd->add_option("--config", sim_args.config, "JSON file mirroring these flags");

  CodecArgs enc_args;
  CLI::App* enc_cmd = app.add_subcommand("encode", "encode a message with a zero tail");
  enc_cmd->add_option("--code", enc_args.code, "comma-separated octal generators")->required();
  enc_cmd->add_option("--m", enc_args.m, "code memory order")->required();
  enc_cmd->add_option("--message", enc_args.message, "message bits, e.g. 1101")->required();

  CodecArgs dec_args;
  CLI::App* dec_cmd = app.add_subcommand("decode", "decode one LLR file");
  dec_cmd->add_option("--code", dec_args.code, "comma-separated octal generators")->required();
  dec_cmd->add_option("--m", dec_args.m, "code memory order")->required();
  dec_cmd->add_option("--llr", dec_args.llr_path, "whitespace-separated reals, one per symbol")
      ->required();
  dec_cmd->add_option("--delta", dec_args.delta, "early-elimination window, int or inf");
  dec_cmd->add_option("--tau", dec_args.tau, "backsearch limit, int or inf");
  dec_cmd->add_option("--openmax", dec_args.openmax, "Open Stack capacity, int or inf");
  dec_cmd->add_option("--seed", dec_args.seed, "tie-break stream seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (exp_cmd->parsed()) return run_exponents(exp_args);
    if (win_cmd->parsed()) return run_window(win_args, win_kind);
    if (sim_cmd->parsed()) return run_simulate(*sim_cmd, sim_args);
    if (enc_cmd->parsed()) return run_encode(enc_args);
    if (dec_cmd->parsed()) return run_decode(dec_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
