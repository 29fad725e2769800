#pragma once

#include <cstddef>
#include <limits>

namespace ttlopt {

/// Hook between the event loop and a timer policy.
///
/// For every request the simulator calls `timer_for` (the returned timer is
/// installed, a zero timer means "do not cache"), then `observe` with the
/// occupancy after insertion.
class TimerController {
 public:
  virtual ~TimerController() = default;

  virtual double timer_for(std::size_t content, double now) = 0;
  virtual void observe(std::size_t content, double now, double occupancy) = 0;

  /// Timer the controller would assign to `content` right now.
  [[nodiscard]] virtual double current_timer(std::size_t content) const = 0;

  /// Dual variable if the controller has one, NaN otherwise.
  [[nodiscard]] virtual double eta() const { return std::numeric_limits<double>::quiet_NaN(); }
};

}  // namespace ttlopt
