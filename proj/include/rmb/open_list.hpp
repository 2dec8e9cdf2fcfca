#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace rmb {

/// Binary min-heap keyed on (priority, insertion serial). Equal priorities pop
/// in insertion order. There is no decrease-key: callers push a fresh entry on
/// improvement and skip stale entries when they surface. The serial is 32-bit;
/// FIFO tie order holds for the first 2^32 pushes after a clear().
class OpenList {
 public:
  struct Entry {
    double priority;
    std::uint32_t serial;
    std::uint32_t cell;
  };

  void push(std::uint32_t cell, double priority) {
    heap_.push_back(Entry{priority, next_serial_++, cell});
    std::push_heap(heap_.begin(), heap_.end(), later);
  }

  Entry pop() {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Entry e = heap_.back();
    heap_.pop_back();
    return e;
  }

  const Entry& top() const { return heap_.front(); }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }
  void clear() noexcept {
    heap_.clear();
    next_serial_ = 0;
  }

 private:
  // std heap algorithms build a max-heap on this ordering, so "later" entries
  // compare less.
  static bool later(const Entry& a, const Entry& b) noexcept {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.serial > b.serial;
  }

  std::vector<Entry> heap_;
  std::uint32_t next_serial_ = 0;
};

}  // namespace rmb
