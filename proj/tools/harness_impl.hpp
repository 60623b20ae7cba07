#pragma once

#include <algorithm>
#include <chrono>

namespace rskel::harness {

template <class F>
double median_seconds(int runs, F&& f) {
  using clock = std::chrono::steady_clock;
  f();
  std::vector<double> t;
  for (int r = 0; r < runs; ++r) {
    const auto t0 = clock::now();
    f();
    t.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  const std::size_t h = t.size() / 2;
  return t.size() % 2 ? t[h] : 0.5 * (t[h - 1] + t[h]);
}

}  // namespace rskel::harness
