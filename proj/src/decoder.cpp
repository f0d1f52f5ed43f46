#include "mlsda/decoder.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mlsda/open_stack.hpp"

namespace mlsda {

double branch_metric(const CodeSpec& code, const SoftObservation& obs, int level,
                     uint32_t out_word) {
  const size_t base = static_cast<size_t>(level) * static_cast<size_t>(code.n);
  double sum = 0.0;
  for (int i = 0; i < code.n; ++i) {
    if (((out_word >> i) & 1u) != obs.y[base + i]) sum += obs.w[base + i];
  }
  return sum;
}

namespace detail {

void check_observation(const CodeSpec& code, const SoftObservation& obs) {
  const size_t want = code.codeword_bits();
  if (obs.y.size() != want)
    throw std::invalid_argument("observation: expected " + std::to_string(want) +
                                " hard decisions, got " + std::to_string(obs.y.size()));
  if (obs.w.size() != want)
    throw std::invalid_argument("observation: expected " + std::to_string(want) +
                                " weights, got " + std::to_string(obs.w.size()));
  for (size_t j = 0; j < want; ++j) {
    if (obs.y[j] > 1) throw std::invalid_argument("observation: hard decisions must be bits");
    if (!(obs.w[j] >= 0.0) || !std::isfinite(obs.w[j]))
      throw std::invalid_argument("observation: weights must be finite and nonnegative");
  }
}

}  // namespace detail

namespace {

// One explored trellis path, stored once and shared by all extensions.
struct PathNode {
  uint32_t parent;
  uint32_t level;
  uint32_t state;
  uint8_t bit;  // input bit on the branch that reached this node
};

// One bit per (level, state) pair; a set bit marks an expanded node.
class ClosedTable {
 public:
  ClosedTable(int levels, uint32_t states)
      : states_(states),
        words_((static_cast<size_t>(levels) + 1) * states / 64 + 1, 0) {}

  bool test(uint32_t level, uint32_t state) const {
    const size_t i = static_cast<size_t>(level) * states_ + state;
    return (words_[i >> 6] >> (i & 63u)) & 1u;
  }
  void set(uint32_t level, uint32_t state) {
    const size_t i = static_cast<size_t>(level) * states_ + state;
    words_[i >> 6] |= 1ull << (i & 63u);
  }

 private:
  uint32_t states_;
  std::vector<uint64_t> words_;
};

// Maps a live (level, state) to its Open Stack handle so merges find the
// competing path in O(1). Dense storage for trellises that fit; a hash map
// otherwise.
class MergeIndex {
 public:
  explicit MergeIndex(size_t node_count) {
    if (node_count <= (1u << 22)) {
      flat_.assign(node_count, OpenStack::Handle{UINT32_MAX, 0});
    } else {
      use_map_ = true;
    }
  }

  const OpenStack::Handle* find(size_t key) const {
    if (!use_map_) return flat_[key].slot == UINT32_MAX ? nullptr : &flat_[key];
    const auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
  }
  void insert(size_t key, OpenStack::Handle h) {
    if (!use_map_) {
      flat_[key] = h;
    } else {
      map_[key] = h;
    }
  }
  void erase(size_t key) {
    if (!use_map_) {
      flat_[key].slot = UINT32_MAX;
    } else {
      map_.erase(key);
    }
  }

 private:
  bool use_map_ = false;
  std::vector<OpenStack::Handle> flat_;
  std::unordered_map<size_t, OpenStack::Handle> map_;
};

DecodeResult decode_impl(const CodeSpec& code, const SoftObservation& obs,
                         const DecoderConfig& cfg, const std::function<void(int)>* sink) {
  detail::check_observation(code, obs);
  if (cfg.delta && *cfg.delta < 1) throw std::invalid_argument("delta must be >= 1");
  if (cfg.tau && *cfg.tau < 1) throw std::invalid_argument("tau must be >= 1");

  const int levels = code.total_levels();
  const uint32_t states = code.num_states();
  const size_t trellis_nodes = (static_cast<size_t>(levels) + 1) * states;
  if (trellis_nodes > (1ull << 33))
    throw std::invalid_argument("trellis too large: reduce L or the memory order");

  std::mt19937_64 tiebreak(cfg.seed);
  OpenStack stack(cfg.openmax);
  ClosedTable closed(levels, states);
  MergeIndex merge_at(trellis_nodes);
  std::vector<PathNode> arena;
  arena.push_back(PathNode{0, 0, 0, 0});  // origin node, its own parent

  DecodeResult res;
  DecoderStats& st = res.stats;
  uint64_t seq = 0;

  const auto node_key = [&](uint32_t node) {
    return static_cast<size_t>(arena[node].level) * states + arena[node].state;
  };
  // Single insertion point: keeps the merge index consistent with whatever
  // the capacity rule evicts, including the incoming entry itself.
  const auto push_path = [&](double metric, uint32_t node) {
    const OpenStack::PushOutcome out =
        stack.push(StackEntry{PriorityKey{metric, arena[node].level, tiebreak(), seq++}, node});
    if (out.evicted) merge_at.erase(node_key(out.evicted->node));
    if (out.handle) merge_at.insert(node_key(node), *out.handle);
  };

  push_path(0.0, 0);

  uint32_t ell_max = 0;
  // Backsearch state: every level k <= decided_level has a committed node.
  int decided_level = 0;
  std::vector<uint32_t> decided_node{0};
  double last_pop_metric = 0.0;

  while (!stack.empty()) {
    const StackEntry top = stack.pop_best();
    ++st.pops;
    const uint32_t node = top.node;
    const uint32_t lvl = arena[node].level;
    merge_at.erase(static_cast<size_t>(lvl) * states + arena[node].state);

    // Pop metrics never decrease once every branch metric is nonnegative;
    // a violation means the stack or the metric is broken.
    if (top.key.metric < last_pop_metric) throw std::logic_error("popped metric decreased");
    last_pop_metric = top.key.metric;

    // Early elimination: a path this far behind the search front would need
    // an improbable burst of channel errors on the front path to win.
    if (cfg.delta &&
        static_cast<int64_t>(lvl) <= static_cast<int64_t>(ell_max) - *cfg.delta) {
      ++st.early_eliminations;
      continue;
    }
    if (lvl > ell_max) ell_max = lvl;

    if (cfg.tau) {
      // Drop popped paths that contradict the committed prefix. Node indices
      // identify bit histories, so ancestor equality is prefix equality.
      uint32_t ancestor = node;
      if (lvl <= static_cast<uint32_t>(decided_level)) {
        if (decided_node[lvl] != ancestor) {
          ++st.prefix_discards;
          continue;
        }
      } else {
        for (uint32_t k = lvl; k > static_cast<uint32_t>(decided_level); --k)
          ancestor = arena[ancestor].parent;
        if (decided_node[decided_level] != ancestor) {
          ++st.prefix_discards;
          continue;
        }
      }
      const int new_decided = static_cast<int>(lvl) - *cfg.tau;
      if (new_decided > decided_level) {
        decided_node.resize(static_cast<size_t>(new_decided) + 1);
        uint32_t walk = node;
        for (int k = static_cast<int>(lvl); k > new_decided; --k) walk = arena[walk].parent;
        for (int k = new_decided; k > decided_level; --k) {
          decided_node[k] = walk;
          walk = arena[walk].parent;
        }
        if (sink) {
          for (int k = decided_level; k < new_decided && k < code.L; ++k)
            (*sink)(arena[decided_node[k + 1]].bit);
        }
        decided_level = new_decided;
      }
    }

    if (lvl == static_cast<uint32_t>(levels)) {
      // The top path spans the whole trellis: done.
      BitVec bits(levels);
      uint32_t walk = node;
      for (int k = levels - 1; k >= 0; --k) {
        bits[k] = arena[walk].bit;
        walk = arena[walk].parent;
      }
      res.ok = true;
      res.message.assign(bits.begin(), bits.begin() + code.L);
      res.codeword = encode(code, res.message);
      res.metric = top.key.metric;
      break;
    }

    // Close the node; each (level, state) is expanded at most once.
    if (closed.test(lvl, arena[node].state)) throw std::logic_error("trellis node re-expanded");
    closed.set(lvl, arena[node].state);

    const int num_inputs = lvl < static_cast<uint32_t>(code.L) ? 2 : 1;
    for (int bit = 0; bit < num_inputs; ++bit) {
      const auto [ns, out] = trellis_step(code, arena[node].state, bit);
      const double met = top.key.metric + branch_metric(code, obs, static_cast<int>(lvl), out);
      ++st.branch_computations;
      const uint32_t child_level = lvl + 1;

      // A successor landing on a closed node cannot beat the path that
      // closed it, since pop metrics are nondecreasing.
      if (closed.test(child_level, ns)) {
        ++st.merges;
        continue;
      }
      const size_t child_key = static_cast<size_t>(child_level) * states + ns;
      if (const OpenStack::Handle* h = merge_at.find(child_key)) {
        const double existing = stack.peek(*h).key.metric;
        // Merge: one of the two paths into this node dies here. Exact metric
        // ties fall to a seeded coin so reruns stay reproducible.
        const bool keep_existing =
            met > existing || (met == existing && (tiebreak() & 1u) != 0);
        ++st.merges;
        if (keep_existing) continue;
        stack.remove(*h);
        merge_at.erase(child_key);
      }
      arena.push_back(PathNode{node, child_level, ns, static_cast<uint8_t>(bit)});
      push_path(met, static_cast<uint32_t>(arena.size() - 1));
    }
  }

  st.peak_stack = stack.peak_size();
  st.ell_max_final = ell_max;
  return res;
}

}  // namespace

DecodeResult decode(const CodeSpec& code, const SoftObservation& obs, const DecoderConfig& cfg) {
  return decode_impl(code, obs, cfg, nullptr);
}

DecodeResult decode_stream(const CodeSpec& code, const SoftObservation& obs,
                           const DecoderConfig& cfg, const std::function<void(int)>& sink) {
  return decode_impl(code, obs, cfg, &sink);
}

}  // namespace mlsda
