#ifndef MLNS_WORKSPACE_HPP
#define MLNS_WORKSPACE_HPP

#include <algorithm>
#include <cstddef>

namespace mlns {

/// Tracks the scalars held in DenseVector/DenseBlock storage allocated while
/// a meter is active on the current thread, plus an explicitly registered
/// bookkeeping channel for O(n) side arrays (the c coefficients, residual
/// history, omega history).
class WorkspaceMeter {
 public:
  void add_scalars(std::size_t count) {
    current_ += count;
    peak_ = std::max(peak_, current_);
  }
  void release_scalars(std::size_t count) {
    current_ -= std::min(count, current_);
  }
  void add_bookkeeping(std::size_t count) { bookkeeping_ += count; }

  std::size_t current_scalars() const { return current_; }
  std::size_t peak_scalars() const { return peak_; }
  std::size_t bookkeeping_entries() const { return bookkeeping_; }

 private:
  std::size_t current_ = 0;
  std::size_t peak_ = 0;
  std::size_t bookkeeping_ = 0;
};

namespace detail {
inline thread_local WorkspaceMeter* g_active_meter = nullptr;
}

inline WorkspaceMeter* active_meter() { return detail::g_active_meter; }

inline void meter_add_scalars(std::size_t count) {
  if (auto* m = detail::g_active_meter) m->add_scalars(count);
}
inline void meter_release_scalars(std::size_t count) {
  if (auto* m = detail::g_active_meter) m->release_scalars(count);
}
inline void meter_note_bookkeeping(std::size_t count) {
  if (auto* m = detail::g_active_meter) m->add_bookkeeping(count);
}

/// RAII guard installing a meter for the current thread.
class MeterScope {
 public:
  explicit MeterScope(WorkspaceMeter& meter) : prev_(detail::g_active_meter) {
    detail::g_active_meter = &meter;
  }
  ~MeterScope() { detail::g_active_meter = prev_; }
  MeterScope(const MeterScope&) = delete;
  MeterScope& operator=(const MeterScope&) = delete;

 private:
  WorkspaceMeter* prev_;
};

}  // namespace mlns

#endif  // MLNS_WORKSPACE_HPP
