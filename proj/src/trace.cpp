#include "ttlopt/trace.hpp"

#include <fmt/core.h>
#include <fmt/os.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "ttlopt/error.hpp"
#include "ttlopt/utility.hpp"

namespace ttlopt {

double Trace::duration() const {
  if (records.empty()) return 0.0;
  const double d = records.back().time - records.front().time;
  return d > 0.0 ? d : static_cast<double>(records.size());
}

std::vector<std::uint64_t> Trace::counts() const {
  std::vector<std::uint64_t> c(n, 0);
  for (const auto& r : records) ++c[r.id];
  return c;
}

std::vector<double> Trace::rates() const {
  const auto c = counts();
  const double d = duration();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(c[i]) / d;
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && std::isfinite(out);
}

bool parse_id(const std::string& s, std::size_t& out) {
  const std::string t = trim(s);
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last && !t.empty();
}

}  // namespace

Trace parse_trace(const std::string& path, TraceFormat format) {
  std::ifstream in(path);
  if (!in) throw InvalidInstance(fmt::format("cannot open trace file '{}'", path));
  Trace tr;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto comma = t.find(',');
    if (format == TraceFormat::Auto) format = comma == std::string::npos ? TraceFormat::OrderOnly : TraceFormat::Csv;
    double time = 0.0;
    std::size_t id = 0;
    bool ok = false;
    if (format == TraceFormat::Csv) {
      ok = comma != std::string::npos && parse_double(t.substr(0, comma), time) && parse_id(t.substr(comma + 1), id);
    } else {
      ok = parse_id(t, id);
      time = static_cast<double>(tr.records.size() + 1);
    }
    if (!ok && first) {
      first = false;
      continue;  // header
    }
    first = false;
    if (!ok) throw InvalidInstance(fmt::format("{}:{}: malformed trace line '{}'", path, lineno, t));
    if (id < 1) throw InvalidInstance(fmt::format("{}:{}: content ids start at 1", path, lineno));
    if (!tr.records.empty() && time < tr.records.back().time) {
      throw InvalidInstance(fmt::format("{}:{}: timestamps out of order ({} after {})", path, lineno, time,
                                        tr.records.back().time));
    }
    tr.records.push_back({time, id - 1});
    tr.n = std::max(tr.n, id);
  }
  if (tr.records.empty()) throw InvalidInstance(fmt::format("trace file '{}' has no records", path));
  return tr;
}

void write_trace(const Trace& trace, const std::string& path) {
  auto out = fmt::output_file(path);
  out.print("time,content_id\n");
  for (const auto& r : trace.records) out.print("{:.17g},{}\n", r.time, r.id + 1);
}

Trace synth_trace(const Catalog& catalog, std::uint64_t seed, std::size_t total) {
  Trace tr;
  tr.n = catalog.n();
  tr.records.reserve(total);
  CatalogEventSource src(catalog, seed);
  Event e{};
  while (tr.records.size() < total && src.next(e)) tr.records.push_back(e);
  return tr;
}

std::vector<std::uint64_t> window_hit_counts(const std::vector<std::uint8_t>& hits, std::size_t window) {
  if (window == 0) throw InvalidInstance("window must be >= 1");
  std::vector<std::uint64_t> out;
  for (std::size_t start = 0; start < hits.size(); start += window) {
    const std::size_t end = std::min(hits.size(), start + window);
    std::uint64_t c = 0;
    for (std::size_t i = start; i < end; ++i) c += hits[i];
    out.push_back(c);
  }
  return out;
}

std::vector<double> windowed_relative_error(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size()) throw InvalidInstance("windowed_relative_error: sequences differ in length");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = static_cast<double>(a[i]);
    const double db = static_cast<double>(b[i]);
    out[i] = std::fabs(da - db) / std::max(db, 1.0);
  }
  return out;
}

std::vector<double> WeightScheme::weights(const std::vector<double>& rates) const {
  std::vector<double> w(rates.size());
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    switch (kind) {
      case Kind::RateProportional:
        w[i] = rates[i];
        break;
      case Kind::RateInverse:
        w[i] = rates[i] > 0.0 ? 1.0 / rates[i] : 0.0;
        break;
      case Kind::UniformRandom:
        do {
          w[i] = u(gen);
        } while (!(w[i] > 0.0));
        break;
    }
  }
  return w;
}

std::string WeightScheme::name() const {
  switch (kind) {
    case Kind::RateProportional:
      return "w=mu";
    case Kind::RateInverse:
      return "w=1/mu";
    case Kind::UniformRandom:
      return "w=uniform";
  }
  return "?";
}

double aggregate_utility(const std::vector<double>& hit_rates, const std::vector<double>& weights, double beta,
                         std::size_t* floored) {
  double s = 0.0;
  std::size_t f = 0;
  for (std::size_t i = 0; i < hit_rates.size(); ++i) {
    if (!(weights[i] > 0.0)) continue;
    double x = hit_rates[i];
    if (x < kUtilityFloor) {
      x = kUtilityFloor;
      ++f;
    }
    s += utility({beta, weights[i]}, x);
  }
  if (floored != nullptr) *floored = f;
  return s;
}

double normalized_utility(double u_policy, double u_baseline) {
  if (u_baseline > 0.0) return u_policy / u_baseline;
  if (u_baseline < 0.0) {
    if (u_policy < 0.0) return u_baseline / u_policy;
    return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<PolicyUtility> weighted_utility_report(const std::vector<std::string>& policies,
                                                   const std::vector<std::vector<double>>& hit_rates,
                                                   std::size_t baseline, const std::vector<double>& weights,
                                                   double beta) {
  if (policies.size() != hit_rates.size() || baseline >= policies.size()) {
    throw InvalidInstance("weighted_utility_report: policy list mismatch");
  }
  std::vector<PolicyUtility> out(policies.size());
  for (std::size_t p = 0; p < policies.size(); ++p) {
    out[p].policy = policies[p];
    out[p].aggregate_utility = aggregate_utility(hit_rates[p], weights, beta, &out[p].floored);
  }
  for (auto& r : out) r.normalized = normalized_utility(r.aggregate_utility, out[baseline].aggregate_utility);
  return out;
}

}  // namespace ttlopt
