#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

namespace mcwc::timing {

using Clock = std::chrono::steady_clock;

/// Calls excluded from every timed batch.
inline constexpr int kWarmupIterations = 10;

struct Stats {
  double median = 0.;
  double mean = 0.;
  double p95 = 0.;
  std::size_t count = 0;
};

inline Stats summarize(std::vector<double> samples) {
  Stats s;
  s.count = samples.size();
  if (samples.empty())
    return s;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  s.median = n % 2 ? samples[n / 2]
                   : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.) / double(n);
  // Nearest-rank percentile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * double(n)));
  s.p95 = samples[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

/// Wall-clock microseconds spent in f().
template <typename F> double time_us(F &&f) {
  const auto t0 = Clock::now();
  f();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::micro>(t1 - t0).count();
}

/// Runs f() kWarmupIterations times untimed, then `reps` timed calls.
template <typename F> std::vector<double> time_batch(int reps, F &&f) {
  for (int i = 0; i < kWarmupIterations; ++i)
    f();
  std::vector<double> out;
  out.reserve(std::size_t(std::max(reps, 0)));
  for (int i = 0; i < reps; ++i)
    out.push_back(time_us(f));
  return out;
}

} // namespace mcwc::timing
