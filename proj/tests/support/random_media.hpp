#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "magpress/medium.hpp"

namespace magpress::test_support {

// Random interlaced medium with n_e electric and n_m magnetic resonances.
// All 2(n_e + n_m) edge frequencies lie in [lo, hi] and are pairwise
// separated by at least min_gap.
inline MediumModel random_medium(std::mt19937_64 &rng, int n_e, int n_m,
                                 double gamma = 0.0, double lo = 0.2,
                                 double hi = 5.0, double min_gap = 0.03) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> edges;
  while (static_cast<int>(edges.size()) < 2 * (n_e + n_m)) {
    const double x = u(rng);
    if (std::all_of(edges.begin(), edges.end(),
                    [&](double e) { return std::abs(e - x) >= min_gap; }))
      edges.push_back(x);
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  auto take = [&](int n, std::size_t offset) {
    std::vector<double> mine(edges.begin() + static_cast<long>(offset),
                             edges.begin() + static_cast<long>(offset + 2 * n));
    std::sort(mine.begin(), mine.end());
    std::vector<ResonancePair> list;
    for (int i = 0; i < n; ++i)
      list.push_back({mine[2 * i], mine[2 * i + 1], gamma});
    return list;
  };
  return MediumModel(take(n_e, 0), take(n_m, static_cast<std::size_t>(2 * n_e)));
}

// n_e, n_m in [0, 3] with at least one resonance.
inline MediumModel random_medium(std::mt19937_64 &rng, double gamma = 0.0) {
  std::uniform_int_distribution<int> n(0, 3);
  int ne = 0, nm = 0;
  while (ne + nm == 0) {
    ne = n(rng);
    nm = n(rng);
  }
  return random_medium(rng, ne, nm, gamma);
}

// Random propagating frequency of the lossless model, away from band edges.
inline double random_band_frequency(std::mt19937_64 &rng, const MediumModel &m,
                                    double w_max = 6.0, double edge_gap = 1e-3) {
  std::uniform_real_distribution<double> u(0.01, w_max);
  const auto edges = m.breakpoints();
  while (true) {
    const double w = u(rng);
    if (std::any_of(edges.begin(), edges.end(),
                    [&](double e) { return std::abs(e - w) < edge_gap; }))
      continue;
    if (lossless_optics(m, w).propagating())
      return w;
  }
}

} // namespace magpress::test_support
