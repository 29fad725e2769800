#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <list>
#include <memory>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "ttlopt/catalog.hpp"
#include "ttlopt/controller.hpp"
#include "ttlopt/rng.hpp"
#include "ttlopt/workload.hpp"

namespace ttlopt {

struct Event {
  double time;
  std::size_t id;
};

class EventSource {
 public:
  virtual ~EventSource() = default;
  /// Writes the next event and returns true, or returns false when exhausted.
  virtual bool next(Event& out) = 0;
};

/// Merges per-content arrival samplers of a catalog, ordered by (time, id).
/// Content i draws from Rng(seed).split(i).
class CatalogEventSource : public EventSource {
 public:
  CatalogEventSource(const Catalog& catalog, std::uint64_t seed);
  bool next(Event& out) override;

 private:
  struct Item {
    double time;
    std::size_t id;
    bool operator>(const Item& o) const { return time > o.time || (time == o.time && id > o.id); }
  };
  std::vector<ArrivalSampler> samplers_;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap_;
};

/// Replays a fixed event list.
class VectorEventSource : public EventSource {
 public:
  explicit VectorEventSource(std::vector<Event> events) : events_(std::move(events)) {}
  bool next(Event& out) override;

 private:
  std::vector<Event> events_;
  std::size_t pos_ = 0;
};

/// Merges streams into one event list sorted by (time, id).
std::vector<Event> merge_streams(const std::vector<RequestStream>& streams);

struct SimOptions {
  std::size_t max_requests = 0;  // 0: run to the horizon
  double horizon = std::numeric_limits<double>::infinity();
  double warmup_fraction = 0.2;  // of max_requests, or of the horizon
  bool record_hit_sequence = false;
  std::size_t trajectory_stride = 0;  // 0: no trajectory
  /// Controller-implied hit rates mu_i F_i(current timer), averaged over
  /// `implied_snapshots` snapshots spread over the final `implied_window`
  /// requests. Needs `implied_catalog`.
  const Catalog* implied_catalog = nullptr;
  std::size_t implied_window = 0;
  std::size_t implied_snapshots = 0;
};

struct TrajectoryPoint {
  double time;
  double occupancy;
  double eta;
};

struct SimStats {
  std::vector<std::uint64_t> requests;
  std::vector<std::uint64_t> hits;
  std::uint64_t total_requests = 0;
  std::uint64_t total_hits = 0;
  double start_time = 0.0;
  double duration = 0.0;
  std::vector<std::uint64_t> size_counts;  // occupancy after each measured event
  double mean_occupancy = 0.0;
  std::vector<TrajectoryPoint> trajectory;
  std::vector<std::uint8_t> hit_sequence;
  std::vector<double> implied_hit_rate;

  [[nodiscard]] double hit_prob(std::size_t i) const;
  [[nodiscard]] double hit_rate(std::size_t i) const;
  [[nodiscard]] double aggregate_hit_rate() const;
  [[nodiscard]] double aggregate_hit_prob() const;
  [[nodiscard]] std::vector<double> histogram() const;
  /// Fraction of measured events with occupancy in [lo, hi].
  [[nodiscard]] double mass_within(double lo, double hi) const;
};

/// Reset-TTL cache driven by a controller. Physically unbounded: the budget
/// is enforced only in expectation by the controller.
SimStats simulate_ttl(EventSource& events, std::size_t n, TimerController& controller, const SimOptions& options);
SimStats simulate_ttl(const std::vector<RequestStream>& streams, std::size_t n, TimerController& controller,
                      const SimOptions& options);

/// Fixed per-content timers.
class FixedTimerController : public TimerController {
 public:
  explicit FixedTimerController(std::vector<double> timers) : timers_(std::move(timers)) {}
  double timer_for(std::size_t content, double) override { return timers_[content]; }
  void observe(std::size_t, double, double) override {}
  [[nodiscard]] double current_timer(std::size_t content) const override { return timers_[content]; }

 private:
  std::vector<double> timers_;
};

enum class Policy { LRU, FIFO, RANDOM };

std::string policy_name(Policy p);
Policy parse_policy(const std::string& s);

class ReplacementCache {
 public:
  virtual ~ReplacementCache() = default;
  /// Serves one request; returns true on a hit. Misses insert the content,
  /// evicting one entry if the cache is full.
  virtual bool access(std::size_t id) = 0;
  [[nodiscard]] virtual std::size_t size() const = 0;
};

class LruCache : public ReplacementCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {}
  bool access(std::size_t id) override;
  [[nodiscard]] std::size_t size() const override { return order_.size(); }

 private:
  std::size_t capacity_;
  std::list<std::size_t> order_;  // front = most recent
  std::unordered_map<std::size_t, std::list<std::size_t>::iterator> where_;
};

class FifoCache : public ReplacementCache {
 public:
  explicit FifoCache(std::size_t capacity) : capacity_(capacity) {}
  bool access(std::size_t id) override;
  [[nodiscard]] std::size_t size() const override { return members_.size(); }

 private:
  std::size_t capacity_;
  std::queue<std::size_t> order_;
  std::unordered_map<std::size_t, bool> members_;
};

class RandomCache : public ReplacementCache {
 public:
  RandomCache(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {}
  bool access(std::size_t id) override;
  [[nodiscard]] std::size_t size() const override { return slots_.size(); }

 private:
  std::size_t capacity_;
  Rng rng_;
  std::vector<std::size_t> slots_;
  std::unordered_map<std::size_t, std::size_t> where_;
};

std::unique_ptr<ReplacementCache> make_cache(Policy p, std::size_t capacity, std::uint64_t seed);

SimStats simulate_replacement(Policy policy, EventSource& events, std::size_t n, std::size_t B, std::uint64_t seed,
                              const SimOptions& options);

/// T with sum_i age_i(T) = B.
double characteristic_time(const Catalog& catalog, double B);

}  // namespace ttlopt
