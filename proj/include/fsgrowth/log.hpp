#pragma once

#include <atomic>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>

namespace fsgrowth {

using WarningSink = std::function<void(const std::string&)>;

namespace detail {
struct WarningState {
  std::mutex mu;
  WarningSink sink = [](const std::string& m) { std::cerr << "fsgrowth warning: " << m << '\n'; };
  std::atomic<long> count{0};
};
inline WarningState& warning_state() {
  static WarningState s;
  return s;
}
}  // namespace detail

/// Replace the warning sink; pass an empty function to silence warnings.
inline void set_warning_sink(WarningSink sink) {
  auto& s = detail::warning_state();
  std::lock_guard<std::mutex> lock(s.mu);
  s.sink = std::move(sink);
}

inline long warning_count() { return detail::warning_state().count.load(); }

inline constexpr long kWarningPrintLimit = 20;

/// Counts every warning; the sink sees the first kWarningPrintLimit of them
/// and one suppression notice.
inline void warn(const std::string& message) {
  auto& s = detail::warning_state();
  const long n = s.count.fetch_add(1) + 1;
  std::lock_guard<std::mutex> lock(s.mu);
  if (!s.sink) return;
  if (n <= kWarningPrintLimit) s.sink(message);
  else if (n == kWarningPrintLimit + 1) s.sink("further warnings suppressed");
}

inline void reset_warning_count() { detail::warning_state().count.store(0); }

}  // namespace fsgrowth
