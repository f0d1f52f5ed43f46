#include "mlsda/open_stack.hpp"

#include <stdexcept>

namespace mlsda {

bool key_less(const PriorityKey& a, const PriorityKey& b) {
  if (a.metric != b.metric) return a.metric < b.metric;
  if (a.level != b.level) return a.level > b.level;  // deeper paths first
  if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
  return a.seq < b.seq;
}

OpenStack::OpenStack(std::optional<size_t> capacity) : cap_(capacity) {
  if (cap_ && *cap_ == 0) throw std::invalid_argument("Open Stack capacity must be positive");
}

bool OpenStack::less_slot(uint32_t a, uint32_t b) const {
  return key_less(slots_[a].entry.key, slots_[b].entry.key);
}

void OpenStack::set_pos(uint32_t slot, bool min_order, uint32_t pos) {
  if (min_order)
    slots_[slot].pos_min = pos;
  else
    slots_[slot].pos_max = pos;
}

void OpenStack::sift_up(std::vector<uint32_t>& heap, bool min_order, uint32_t pos) {
  const uint32_t slot = heap[pos];
  while (pos > 0) {
    const uint32_t parent = (pos - 1) / 2;
    const bool rises = min_order ? less_slot(slot, heap[parent]) : less_slot(heap[parent], slot);
    if (!rises) break;
    heap[pos] = heap[parent];
    set_pos(heap[pos], min_order, pos);
    pos = parent;
  }
  heap[pos] = slot;
  set_pos(slot, min_order, pos);
}

void OpenStack::sift_down(std::vector<uint32_t>& heap, bool min_order, uint32_t pos) {
  const auto n = static_cast<uint32_t>(heap.size());
  const uint32_t slot = heap[pos];
  for (;;) {
    uint32_t kid = 2 * pos + 1;
    if (kid >= n) break;
    if (kid + 1 < n) {
      const bool right_first =
          min_order ? less_slot(heap[kid + 1], heap[kid]) : less_slot(heap[kid], heap[kid + 1]);
      if (right_first) ++kid;
    }
    const bool sinks = min_order ? less_slot(heap[kid], slot) : less_slot(slot, heap[kid]);
    if (!sinks) break;
    heap[pos] = heap[kid];
    set_pos(heap[pos], min_order, pos);
    pos = kid;
  }
  heap[pos] = slot;
  set_pos(slot, min_order, pos);
}

void OpenStack::heap_erase(std::vector<uint32_t>& heap, bool min_order, uint32_t pos) {
  const uint32_t last = heap.back();
  heap.pop_back();
  if (pos < heap.size()) {
    heap[pos] = last;
    set_pos(last, min_order, pos);
    sift_up(heap, min_order, pos);
    // The replacement may need to move either direction; re-read its slot.
    const uint32_t now = min_order ? slots_[last].pos_min : slots_[last].pos_max;
    sift_down(heap, min_order, now);
  }
}

uint32_t OpenStack::alloc_slot(const StackEntry& e) {
  uint32_t s;
  if (!free_.empty()) {
    s = free_.back();
    free_.pop_back();
  } else {
    s = static_cast<uint32_t>(slots_.size());
    slots_.emplace_back();
  }
  slots_[s].entry = e;
  slots_[s].live = true;
  return s;
}

StackEntry OpenStack::detach(uint32_t slot) {
  heap_erase(min_heap_, true, slots_[slot].pos_min);
  heap_erase(max_heap_, false, slots_[slot].pos_max);
  const StackEntry e = slots_[slot].entry;
  slots_[slot].live = false;
  slots_[slot].gen++;
  free_.push_back(slot);
  return e;
}

void OpenStack::check_handle(Handle h) const {
  if (h.slot >= slots_.size() || !slots_[h.slot].live || slots_[h.slot].gen != h.gen)
    throw std::logic_error("stale or invalid Open Stack handle");
}

OpenStack::PushOutcome OpenStack::push(const StackEntry& e) {
  PushOutcome out;
  const uint32_t s = alloc_slot(e);
  min_heap_.push_back(s);
  sift_up(min_heap_, true, static_cast<uint32_t>(min_heap_.size()) - 1);
  max_heap_.push_back(s);
  sift_up(max_heap_, false, static_cast<uint32_t>(max_heap_.size()) - 1);

  if (cap_ && min_heap_.size() > *cap_) {
    const uint32_t worst = max_heap_[0];
    out.evicted = detach(worst);
    if (worst != s) out.handle = Handle{s, slots_[s].gen};
  } else {
    out.handle = Handle{s, slots_[s].gen};
  }
  if (size() > peak_) peak_ = size();
  return out;
}

StackEntry OpenStack::pop_best() {
  if (empty()) throw std::logic_error("pop_best on an empty Open Stack");
  return detach(min_heap_[0]);
}

StackEntry OpenStack::remove(Handle h) {
  check_handle(h);
  return detach(h.slot);
}

const StackEntry& OpenStack::peek(Handle h) const {
  check_handle(h);
  return slots_[h.slot].entry;
}

}  // namespace mlsda
