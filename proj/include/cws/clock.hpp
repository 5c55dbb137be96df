#pragma once

#include <chrono>
#include <cstdint>

namespace cws {

using TimestampMs = std::int64_t;

/// One clock interface serves both live HTTP mode (wall time) and the
/// discrete-event simulation (virtual time). All timestamps are integer
/// milliseconds.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimestampMs now_ms() const = 0;
};

class WallClock final : public Clock {
 public:
  TimestampMs now_ms() const override {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  }
};

class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(TimestampMs start = 0) : now_(start) {}

  TimestampMs now_ms() const override { return now_; }

  /// Virtual time never moves backwards.
  void advance_to(TimestampMs t) {
    if (t > now_) now_ = t;
  }

 private:
  TimestampMs now_;
};

}  // namespace cws
