#pragma once

#include <anharmonic/defaults.hpp>
#include <anharmonic/errors.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace anharmonic {

struct SimplexOptions {
  double spread_tol = defaults::kSimplexSpread;  // relative to max(1, |f|)
  int max_iterations = defaults::kMaxSimplexIterations;
  int restarts = defaults::kRestarts;
  double jitter = defaults::kRestartJitter;
  unsigned long long seed = defaults::kSeed;
};

struct SimplexResult {
  std::array<double, 2> x{};
  double f = 0.0;
  int evaluations = 0;
  int iterations = 0;
};

/// Nelder-Mead in two variables with the standard coefficients.
inline SimplexResult nelder_mead_2d(const std::function<double(const std::array<double, 2>&)>& fn,
                                    std::array<double, 2> x0, std::array<double, 2> step,
                                    const SimplexOptions& opt) {
  using Pt = std::array<double, 2>;
  std::array<Pt, 3> s{x0, x0, x0};
  s[1][0] += step[0];
  s[2][1] += step[1];
  std::array<double, 3> f{};
  SimplexResult res;
  for (int i = 0; i < 3; ++i) f[i] = fn(s[i]);
  res.evaluations = 3;
  auto lerp = [](const Pt& a, const Pt& b, double t) { return Pt{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; };
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
    const int lo = idx[0], mid = idx[1], hi = idx[2];
    const double spread = f[hi] - f[lo];
    if (std::isfinite(spread) && spread <= opt.spread_tol * std::max(1.0, std::abs(f[lo]))) break;
    const Pt c{(s[lo][0] + s[mid][0]) / 2, (s[lo][1] + s[mid][1]) / 2};
    const Pt xr = lerp(c, s[hi], -1.0);
    const double fr = fn(xr);
    ++res.evaluations;
    if (fr < f[lo]) {
      const Pt xe = lerp(c, s[hi], -2.0);
      const double fe = fn(xe);
      ++res.evaluations;
      if (fe < fr) {
        s[hi] = xe;
        f[hi] = fe;
      } else {
        s[hi] = xr;
        f[hi] = fr;
      }
      continue;
    }
    if (fr < f[mid]) {
      s[hi] = xr;
      f[hi] = fr;
      continue;
    }
    const bool outside = fr < f[hi];
    const Pt xc = outside ? lerp(c, xr, 0.5) : lerp(c, s[hi], 0.5);
    const double fc = fn(xc);
    ++res.evaluations;
    if (fc < (outside ? fr : f[hi])) {
      s[hi] = xc;
      f[hi] = fc;
      continue;
    }
    for (int i : {mid, hi}) {
      s[i] = lerp(s[lo], s[i], 0.5);
      f[i] = fn(s[i]);
      ++res.evaluations;
    }
  }
  const int best = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  const double spread = *std::max_element(f.begin(), f.end()) - f[best];
  res.x = s[best];
  res.f = f[best];
  res.iterations = it;
  if (it == opt.max_iterations && !(spread <= opt.spread_tol * std::max(1.0, std::abs(f[best]))))
    throw OptimizerStalled("simplex did not reach the energy-spread tolerance");
  return res;
}

/// Seeded restarts: the first run starts at x0, later ones at the incumbent
/// with every coordinate jittered by a uniform factor in [1 - j, 1 + j].
inline SimplexResult minimize_with_restarts(const std::function<double(const std::array<double, 2>&)>& fn,
                                            std::array<double, 2> x0, std::array<double, 2> step,
                                            const SimplexOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jit(-opt.jitter, opt.jitter);
  SimplexResult best = nelder_mead_2d(fn, x0, step, opt);
  int evals = best.evaluations;
  for (int r = 1; r < opt.restarts; ++r) {
    std::array<double, 2> start = best.x;
    for (double& v : start) v *= 1.0 + jit(rng);
    std::array<double, 2> st{std::abs(start[0]) * 0.05 + 1e-3, std::abs(start[1]) * 0.05 + 1e-3};
    auto run = nelder_mead_2d(fn, start, st, opt);
    evals += run.evaluations;
    if (run.f < best.f) best = run;
  }
  best.evaluations = evals;
  return best;
}

}  // namespace anharmonic
