#pragma once

// Minimal opt-in diagnostics (truncation levels, grid checks) on std::clog.

#include <atomic>
#include <iostream>
#include <sstream>
#include <utility>

namespace hyperdisk {

inline std::atomic<bool>& debug_logging() {
  static std::atomic<bool> enabled{false};
  return enabled;
}

template <class... Args>
void log_debug(Args&&... args) {
  if (!debug_logging().load(std::memory_order_relaxed)) return;
  std::ostringstream os;
  os << "[hyperdisk] ";
  (os << ... << std::forward<Args>(args));
  os << '\n';
  std::clog << os.str();
}

}  // namespace hyperdisk
