#include "mlsda/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "mlsda/decoder.hpp"
#include "mlsda/rng.hpp"

namespace mlsda {

namespace {

// Leading path tags keep channel and decoder streams structurally disjoint.
constexpr uint64_t kChannelTag = 1;
constexpr uint64_t kDecoderTag = 2;

struct SweepPoint {
  ChannelModel model;
  double ebn0_db;   // NaN when defined by epsilon
  double epsilon;   // NaN for AWGN
};

std::vector<SweepPoint> build_points(const SimConfig& cfg, int n) {
  const bool by_db = !cfg.ebn0_db.empty();
  const bool by_eps = !cfg.epsilons.empty();
  if (by_db == by_eps)
    throw std::invalid_argument("sweep: provide either ebn0_db or epsilons, not both");
  if (cfg.channel == ChannelKind::awgn_bpsk && by_eps)
    throw std::invalid_argument("sweep: the AWGN channel takes Eb/N0 points only");

  std::vector<SweepPoint> points;
  const double nan = std::nan("");
  if (by_eps) {
    for (const double eps : cfg.epsilons) points.push_back({make_bsc(eps), nan, eps});
  } else if (cfg.channel == ChannelKind::bsc) {
    for (const double db : cfg.ebn0_db)
      points.push_back({make_bsc_ebn0(db), db, ebn0_to_epsilon(db)});
  } else {
    for (const double db : cfg.ebn0_db)
      points.push_back({make_awgn(db, 1.0 / n), db, nan});
  }
  return points;
}

int hamming(const BitVec& a, const BitVec& b) {
  int d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

std::vector<SimRecord> run_sweep(const SimConfig& cfg) {
  const CodeSpec code = make_code(cfg.generators, cfg.m, cfg.L);
  if (cfg.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (cfg.deltas.empty()) throw std::invalid_argument("sweep: need at least one window entry");
  if (!(cfg.quantile > 0.0 && cfg.quantile < 1.0))
    throw std::invalid_argument("sweep: quantile must lie in (0, 1)");
  const std::vector<SweepPoint> points = build_points(cfg, code.n);

  std::vector<SimRecord> records;
  const size_t nd = cfg.deltas.size();

  for (size_t pi = 0; pi < points.size(); ++pi) {
    const SweepPoint& pt = points[pi];
    std::vector<uint64_t> bit_errors(nd, 0), failures(nd, 0), branches(nd, 0);
    std::vector<std::vector<size_t>> peaks(nd);
    std::vector<double> wall(nd, 0.0);

    uint64_t t = 0;
    for (; t < cfg.trials; ++t) {
      if (cfg.target_errors > 0) {
        const bool done = std::all_of(bit_errors.begin(), bit_errors.end(), [&](uint64_t e) {
          return e >= cfg.target_errors;
        });
        if (done) break;
      }

      // One transmission per trial; every window decodes the same noise.
      std::mt19937_64 chan_rng(derive_seed(cfg.seed, {kChannelTag, pi, t}));
      BitVec msg(code.L);
      for (auto& b : msg) b = static_cast<uint8_t>(chan_rng() & 1u);
      const SoftObservation obs = soften(pt.model, transmit(pt.model, encode(code, msg), chan_rng));

      for (size_t di = 0; di < nd; ++di) {
        DecoderConfig dc;
        dc.delta = cfg.deltas[di];
        dc.tau = cfg.tau;
        dc.openmax = cfg.openmax;
        dc.seed = derive_seed(cfg.seed, {kDecoderTag, pi, di, t});
        const auto t0 = std::chrono::steady_clock::now();
        const DecodeResult res = decode(code, obs, dc);
        wall[di] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (res.ok) {
          bit_errors[di] += static_cast<uint64_t>(hamming(res.message, msg));
        } else {
          ++failures[di];
          bit_errors[di] += static_cast<uint64_t>(code.L);
        }
        branches[di] += res.stats.branch_computations;
        peaks[di].push_back(res.stats.peak_stack);
      }
    }

    for (size_t di = 0; di < nd; ++di) {
      SimRecord rec;
      rec.code_id = code.id;
      rec.ebn0_db = pt.ebn0_db;
      rec.epsilon = pt.epsilon;
      rec.delta = cfg.deltas[di];
      rec.tau = cfg.tau;
      rec.openmax = cfg.openmax;
      rec.trials = t;
      rec.info_bits = t * static_cast<uint64_t>(code.L);
      rec.bit_errors = bit_errors[di];
      rec.ber = static_cast<double>(bit_errors[di]) / static_cast<double>(rec.info_bits);
      rec.decode_failures = failures[di];
      rec.avg_branch_computations_per_bit =
          static_cast<double>(branches[di]) / static_cast<double>(rec.info_bits);
      rec.p999_stack_size = quantile_stack(peaks[di], cfg.quantile);
      rec.mean_peak_stack = 0.0;
      for (const size_t pk : peaks[di]) rec.mean_peak_stack += static_cast<double>(pk);
      rec.mean_peak_stack /= static_cast<double>(peaks[di].size());
      rec.wall_seconds = wall[di];
      rec.seed = cfg.seed;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

size_t quantile_stack(const std::vector<size_t>& peaks, double q) {
  if (peaks.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile: q must lie in (0, 1)");
  const size_t count = peaks.size();
  if (static_cast<double>(count) < 1.0 / (1.0 - q))
    std::fprintf(stderr, "quantile: %zu samples cannot resolve q=%g, reporting the maximum\n",
                 count, q);
  size_t rank = static_cast<size_t>(std::floor(q * static_cast<double>(count) + 1e-9)) + 1;
  rank = std::min(std::max<size_t>(rank, 1), count);
  std::vector<size_t> sorted(peaks);
  std::sort(sorted.begin(), sorted.end());
  return sorted[rank - 1];
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_opt_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "inf";
}

std::string fmt_opt_size(const std::optional<size_t>& v) {
  return v ? std::to_string(*v) : "inf";
}

}  // namespace

std::string csv_header() {
  return "code_id,ebn0_db,epsilon,delta,tau,openmax,trials,info_bits,bit_errors,ber,"
         "decode_failures,avg_branch_computations_per_bit,p999_stack_size,mean_peak_stack,"
         "wall_seconds,seed";
}

std::string to_csv_row(const SimRecord& rec) {
  std::string row;
  // Generator ids contain commas, so the field is quoted per usual CSV rules.
  if (rec.code_id.find(',') != std::string::npos) {
    row += '"' + rec.code_id + '"';
  } else {
    row += rec.code_id;
  }
  row += ',' + fmt_double(rec.ebn0_db);
  row += ',' + fmt_double(rec.epsilon);
  row += ',' + fmt_opt_int(rec.delta);
  row += ',' + fmt_opt_int(rec.tau);
  row += ',' + fmt_opt_size(rec.openmax);
  row += ',' + std::to_string(rec.trials);
  row += ',' + std::to_string(rec.info_bits);
  row += ',' + std::to_string(rec.bit_errors);
  row += ',' + fmt_double(rec.ber);
  row += ',' + std::to_string(rec.decode_failures);
  row += ',' + fmt_double(rec.avg_branch_computations_per_bit);
  row += ',' + std::to_string(rec.p999_stack_size);
  row += ',' + fmt_double(rec.mean_peak_stack);
  row += ',' + fmt_double(rec.wall_seconds);
  row += ',' + std::to_string(rec.seed);
  return row;
}

void write_csv(const std::string& path, const std::vector<SimRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("csv: cannot open " + path + " for writing");
  out << csv_header() << '\n';
  for (const SimRecord& rec : records) out << to_csv_row(rec) << '\n';
  if (!out) throw std::runtime_error("csv: write to " + path + " failed");
}

}  // namespace mlsda
