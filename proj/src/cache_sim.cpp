#include "ttlopt/cache_sim.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "ttlopt/error.hpp"
#include "ttlopt/numeric.hpp"

namespace ttlopt {

CatalogEventSource::CatalogEventSource(const Catalog& catalog, std::uint64_t seed) {
  const Rng root(seed);
  samplers_.reserve(catalog.n());
  for (std::size_t i = 0; i < catalog.n(); ++i) {
    samplers_.emplace_back(catalog.contents[i].model, root.split(i));
    heap_.push({samplers_.back().next(), i});
  }
}

bool CatalogEventSource::next(Event& out) {
  if (heap_.empty()) return false;
  const Item top = heap_.top();
  heap_.pop();
  out = {top.time, top.id};
  heap_.push({samplers_[top.id].next(), top.id});
  return true;
}

bool VectorEventSource::next(Event& out) {
  if (pos_ >= events_.size()) return false;
  out = events_[pos_++];
  return true;
}

std::vector<Event> merge_streams(const std::vector<RequestStream>& streams) {
  std::vector<Event> ev;
  for (const auto& s : streams) {
    for (double t : s.times) ev.push_back({t, s.content_id});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    return a.time < b.time || (a.time == b.time && a.id < b.id);
  });
  return ev;
}

double SimStats::hit_prob(std::size_t i) const {
  return requests[i] == 0 ? 0.0 : static_cast<double>(hits[i]) / static_cast<double>(requests[i]);
}

double SimStats::hit_rate(std::size_t i) const {
  return duration > 0.0 ? static_cast<double>(hits[i]) / duration : 0.0;
}

double SimStats::aggregate_hit_rate() const {
  return duration > 0.0 ? static_cast<double>(total_hits) / duration : 0.0;
}

double SimStats::aggregate_hit_prob() const {
  return total_requests == 0 ? 0.0 : static_cast<double>(total_hits) / static_cast<double>(total_requests);
}

std::vector<double> SimStats::histogram() const {
  std::uint64_t total = 0;
  for (auto c : size_counts) total += c;
  std::vector<double> out(size_counts.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t k = 0; k < size_counts.size(); ++k) {
    out[k] = static_cast<double>(size_counts[k]) / static_cast<double>(total);
  }
  return out;
}

double SimStats::mass_within(double lo, double hi) const {
  std::uint64_t total = 0;
  std::uint64_t inside = 0;
  for (std::size_t k = 0; k < size_counts.size(); ++k) {
    total += size_counts[k];
    const auto s = static_cast<double>(k);
    if (s >= lo && s <= hi) inside += size_counts[k];
  }
  return total == 0 ? 0.0 : static_cast<double>(inside) / static_cast<double>(total);
}

namespace {

// Bookkeeping shared by the TTL and replacement loops.
class Recorder {
 public:
  Recorder(std::size_t n, const SimOptions& opt) : opt_(opt) {
    stats_.requests.assign(n, 0);
    stats_.hits.assign(n, 0);
    if (opt.max_requests > 0) {
      warmup_count_ = static_cast<std::size_t>(opt.warmup_fraction * static_cast<double>(opt.max_requests));
      if (opt.implied_catalog != nullptr && opt.implied_snapshots > 0) {
        const std::size_t window = std::min(opt.implied_window, opt.max_requests);
        snapshot_every_ = std::max<std::size_t>(1, window / opt.implied_snapshots);
        window_start_ = opt.max_requests - window;
        stats_.implied_hit_rate.assign(n, 0.0);
      }
    } else {
      warmup_time_ = opt.warmup_fraction * opt.horizon;
    }
  }

  [[nodiscard]] bool done(std::size_t index, const Event& e) const {
    if (opt_.max_requests > 0) return index >= opt_.max_requests;
    return e.time > opt_.horizon;
  }

  void record(std::size_t index, const Event& e, bool hit, std::size_t occupancy, const TimerController* ctl) {
    const bool warm = opt_.max_requests > 0 ? index < warmup_count_ : e.time < warmup_time_;
    if (warm) {
      stats_.start_time = e.time;
    } else {
      ++stats_.requests[e.id];
      ++stats_.total_requests;
      if (hit) {
        ++stats_.hits[e.id];
        ++stats_.total_hits;
      }
      if (occupancy >= stats_.size_counts.size()) stats_.size_counts.resize(occupancy + 1, 0);
      ++stats_.size_counts[occupancy];
      occ_sum_ += static_cast<double>(occupancy);
      if (opt_.record_hit_sequence) stats_.hit_sequence.push_back(hit ? 1 : 0);
    }
    if (opt_.trajectory_stride > 0 && index % opt_.trajectory_stride == 0) {
      stats_.trajectory.push_back({e.time, static_cast<double>(occupancy),
                                   ctl ? ctl->eta() : std::numeric_limits<double>::quiet_NaN()});
    }
    if (ctl != nullptr && snapshot_every_ > 0 && index >= window_start_ &&
        (index - window_start_) % snapshot_every_ == 0) {
      const Catalog& cat = *opt_.implied_catalog;
      for (std::size_t i = 0; i < cat.n(); ++i) {
        const double t = ctl->current_timer(i);
        const auto& m = cat.contents[i].model;
        stats_.implied_hit_rate[i] += m.mean_rate() * (is_infinite_timer(t) ? 1.0 : m.cdf(t));
      }
      ++snapshots_;
    }
    last_time_ = e.time;
  }

  SimStats finish() {
    if (opt_.max_requests > 0) {
      stats_.duration = last_time_ - stats_.start_time;
    } else {
      stats_.start_time = warmup_time_;
      stats_.duration = opt_.horizon - warmup_time_;
    }
    if (stats_.total_requests > 0) stats_.mean_occupancy = occ_sum_ / static_cast<double>(stats_.total_requests);
    if (snapshots_ > 0) {
      for (double& r : stats_.implied_hit_rate) r /= static_cast<double>(snapshots_);
    }
    return std::move(stats_);
  }

 private:
  const SimOptions& opt_;
  SimStats stats_;
  std::size_t warmup_count_ = 0;
  double warmup_time_ = 0.0;
  std::size_t snapshot_every_ = 0;
  std::size_t window_start_ = 0;
  std::size_t snapshots_ = 0;
  double occ_sum_ = 0.0;
  double last_time_ = 0.0;
};

}  // namespace

SimStats simulate_ttl(EventSource& events, std::size_t n, TimerController& controller, const SimOptions& options) {
  if (options.max_requests == 0 && !std::isfinite(options.horizon)) {
    throw InvalidInstance("simulate_ttl needs max_requests or a finite horizon");
  }
  Recorder rec(n, options);
  std::vector<double> expiry(n, -1.0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::size_t occupancy = 0;

  Event e{};
  for (std::size_t index = 0; events.next(e); ++index) {
    if (rec.done(index, e)) break;
    while (!heap.empty() && heap.top().first <= e.time) {
      const auto [t, id] = heap.top();
      heap.pop();
      if (expiry[id] == t) --occupancy;
    }
    const bool hit = expiry[e.id] > e.time;
    const double timer = controller.timer_for(e.id, e.time);
    const double next = timer > 0.0 ? e.time + timer : e.time;
    const bool stays = next > e.time;
    if (hit && !stays) --occupancy;
    if (!hit && stays) ++occupancy;
    expiry[e.id] = stays ? next : -1.0;
    if (stays && std::isfinite(next)) heap.push({next, e.id});
    controller.observe(e.id, e.time, static_cast<double>(occupancy));
    rec.record(index, e, hit, occupancy, &controller);
  }
  return rec.finish();
}

SimStats simulate_ttl(const std::vector<RequestStream>& streams, std::size_t n, TimerController& controller,
                      const SimOptions& options) {
  VectorEventSource src(merge_streams(streams));
  SimOptions opt = options;
  if (opt.max_requests == 0 && !std::isfinite(opt.horizon)) {
    std::size_t total = 0;
    for (const auto& s : streams) total += s.times.size();
    opt.max_requests = total;
  }
  return simulate_ttl(src, n, controller, opt);
}

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::LRU:
      return "lru";
    case Policy::FIFO:
      return "fifo";
    case Policy::RANDOM:
      return "random";
  }
  return "?";
}

Policy parse_policy(const std::string& s) {
  if (s == "lru" || s == "LRU") return Policy::LRU;
  if (s == "fifo" || s == "FIFO") return Policy::FIFO;
  if (s == "random" || s == "RANDOM") return Policy::RANDOM;
  throw InvalidInstance(fmt::format("unknown replacement policy '{}'", s));
}

bool LruCache::access(std::size_t id) {
  auto it = where_.find(id);
  if (it != where_.end()) {
    order_.splice(order_.begin(), order_, it->second);
    return true;
  }
  if (capacity_ == 0) return false;
  if (order_.size() >= capacity_) {
    where_.erase(order_.back());
    order_.pop_back();
  }
  order_.push_front(id);
  where_[id] = order_.begin();
  return false;
}

bool FifoCache::access(std::size_t id) {
  if (members_.count(id) != 0) return true;
  if (capacity_ == 0) return false;
  if (members_.size() >= capacity_) {
    members_.erase(order_.front());
    order_.pop();
  }
  order_.push(id);
  members_[id] = true;
  return false;
}

bool RandomCache::access(std::size_t id) {
  if (where_.count(id) != 0) return true;
  if (capacity_ == 0) return false;
  if (slots_.size() >= capacity_) {
    std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
    const std::size_t k = pick(rng_);
    where_.erase(slots_[k]);
    slots_[k] = id;
    where_[id] = k;
  } else {
    where_[id] = slots_.size();
    slots_.push_back(id);
  }
  return false;
}

std::unique_ptr<ReplacementCache> make_cache(Policy p, std::size_t capacity, std::uint64_t seed) {
  switch (p) {
    case Policy::LRU:
      return std::make_unique<LruCache>(capacity);
    case Policy::FIFO:
      return std::make_unique<FifoCache>(capacity);
    case Policy::RANDOM:
      return std::make_unique<RandomCache>(capacity, seed);
  }
  return nullptr;
}

SimStats simulate_replacement(Policy policy, EventSource& events, std::size_t n, std::size_t B, std::uint64_t seed,
                              const SimOptions& options) {
  if (B < 1) throw InvalidInstance("replacement cache needs B >= 1");
  if (options.max_requests == 0 && !std::isfinite(options.horizon)) {
    throw InvalidInstance("simulate_replacement needs max_requests or a finite horizon");
  }
  auto cache = make_cache(policy, B, seed);
  Recorder rec(n, options);
  Event e{};
  for (std::size_t index = 0; events.next(e); ++index) {
    if (rec.done(index, e)) break;
    const bool hit = cache->access(e.id);
    rec.record(index, e, hit, cache->size(), nullptr);
  }
  return rec.finish();
}

double characteristic_time(const Catalog& catalog, double B) {
  const auto n = static_cast<double>(catalog.n());
  if (!(B > 0.0)) throw InvalidInstance("characteristic_time: B must be > 0");
  if (B >= n) throw InvalidInstance(fmt::format("characteristic_time: no finite T for B = {} >= n = {}", B, n));
  auto occ = [&](double T) {
    double s = 0.0;
    for (const auto& c : catalog.contents) s += c.model.age(T);
    return s - B;
  };
  double total_rate = 0.0;
  for (const auto& c : catalog.contents) total_rate += c.model.mean_rate();
  double hi = 1.0 / total_rate;
  while (occ(hi) < 0.0) hi *= 2.0;
  return numeric::bisect(occ, 0.0, hi, 0.0, 400);
}

}  // namespace ttlopt
