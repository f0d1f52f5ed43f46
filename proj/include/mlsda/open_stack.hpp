// Capacity-bounded double-ended priority queue for the sequential decoder.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace mlsda {

// Full priority order: metric ascending, end level descending (deeper paths
// win metric ties), then the seeded tie-break draw, then insertion sequence.
// seq is unique per push, so the order is total.
struct PriorityKey {
  double metric = 0.0;
  uint32_t level = 0;
  uint64_t tiebreak = 0;
  uint64_t seq = 0;
};

bool key_less(const PriorityKey& a, const PriorityKey& b);

struct StackEntry {
  PriorityKey key;
  uint32_t node = 0;  // decoder path-arena index
};

// Twin indexed binary heaps (one min-ordered, one max-ordered) over a shared
// slot arena with cross position links. Best pop, worst eviction, and
// removal by handle are all O(log n); live counts are exact, which the
// capacity semantics require. Handles are generation-checked: stale use
// throws std::logic_error.
class OpenStack {
 public:
  struct Handle {
    uint32_t slot = UINT32_MAX;
    uint32_t gen = 0;
  };
  struct PushOutcome {
    std::optional<Handle> handle;       // empty when the pushed entry itself was evicted
    std::optional<StackEntry> evicted;  // set when capacity forced a removal
  };

  explicit OpenStack(std::optional<size_t> capacity = std::nullopt);

  // Inserts; if the live size would exceed capacity, removes and returns the
  // entry with the worst key, which may be the incoming entry itself.
  PushOutcome push(const StackEntry& e);
  StackEntry pop_best();
  StackEntry remove(Handle h);
  const StackEntry& peek(Handle h) const;

  size_t size() const { return min_heap_.size(); }
  bool empty() const { return min_heap_.empty(); }
  size_t peak_size() const { return peak_; }

 private:
  struct Slot {
    StackEntry entry;
    uint32_t pos_min = 0;
    uint32_t pos_max = 0;
    uint32_t gen = 0;
    bool live = false;
  };

  bool less_slot(uint32_t a, uint32_t b) const;
  void set_pos(uint32_t slot, bool min_order, uint32_t pos);
  void sift_up(std::vector<uint32_t>& heap, bool min_order, uint32_t pos);
  void sift_down(std::vector<uint32_t>& heap, bool min_order, uint32_t pos);
  void heap_erase(std::vector<uint32_t>& heap, bool min_order, uint32_t pos);
  uint32_t alloc_slot(const StackEntry& e);
  StackEntry detach(uint32_t slot);
  void check_handle(Handle h) const;

  std::vector<Slot> slots_;
  std::vector<uint32_t> free_;
  std::vector<uint32_t> min_heap_;
  std::vector<uint32_t> max_heap_;
  std::optional<size_t> cap_;
  size_t peak_ = 0;
};

}  // namespace mlsda
