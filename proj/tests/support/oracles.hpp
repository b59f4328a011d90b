#pragma once

// Slow, obviously-correct reference computations used to check the engine.
// Nothing here calls into the code under test except for plain data types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace oracle {

inline constexpr double kRate = 48000.0;

// ---------------------------------------------------------------------------
// Signals

inline std::vector<double> sine(double hz, double seconds, double amp = 1.0) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * kRate));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / kRate);
  return out;
}

inline double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / x.size());
}

/// RMS of the second half of `x` (past filter transients).
inline double steady_rms(std::span<const double> x) { return rms(x.subspan(x.size() / 2)); }

inline double db(double ratio) { return 20.0 * std::log10(ratio); }

/// |X(f)| by direct correlation, any frequency (not restricted to bins).
inline double dft_magnitude(std::span<const double> x, double hz) {
  std::complex<double> acc{};
  const double w = -2.0 * std::numbers::pi * hz / kRate;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * std::polar(1.0, w * static_cast<double>(i));
  return std::abs(acc);
}

/// Frequency in [lo, hi] with the largest DFT magnitude, searched on `step`.
inline double spectral_peak(std::span<const double> x, double lo, double hi, double step = 1.0) {
  double best_f = lo;
  double best = -1.0;
  for (double f = lo; f <= hi; f += step) {
    const double m = dft_magnitude(x, f);
    if (m > best) {
      best = m;
      best_f = f;
    }
  }
  return best_f;
}

/// Power spectrum on `bins` uniformly spaced frequencies in (0, nyquist).
inline std::vector<double> power_spectrum(std::span<const double> x, int bins, double max_hz = 20000.0) {
  std::vector<double> p(bins);
  for (int b = 0; b < bins; ++b) {
    const double f = (b + 0.5) * max_hz / bins;
    const double m = dft_magnitude(x, f);
    p[b] = m * m;
  }
  return p;
}

/// Power-weighted mean frequency.
inline double spectral_centroid(std::span<const double> x, int bins = 400, double max_hz = 20000.0) {
  const auto p = power_spectrum(x, bins, max_hz);
  double num = 0.0;
  double den = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double f = (b + 0.5) * max_hz / bins;
    num += f * p[b];
    den += p[b];
  }
  return den > 0.0 ? num / den : 0.0;
}

/// Welch-style power spectrum: Hann-windowed frames of `frame` samples
/// (no overlap), each bin k * rate / frame evaluated with Goertzel, averaged
/// over frames. Returns bins 0 .. frame / 2.
inline std::vector<double> averaged_spectrum(std::span<const double> x, std::size_t frame = 2048) {
  std::vector<double> p(frame / 2 + 1, 0.0);
  std::vector<double> w(frame);
  for (std::size_t i = 0; i < frame; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / frame);
  std::size_t frames = 0;
  for (std::size_t start = 0; start + frame <= x.size(); start += frame, ++frames) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double c = 2.0 * std::cos(2.0 * std::numbers::pi * k / frame);
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t i = 0; i < frame; ++i) {
        const double s0 = w[i] * x[start + i] + c * s1 - s2;
        s2 = s1;
        s1 = s0;
      }
      p[k] += s1 * s1 + s2 * s2 - c * s1 * s2;
    }
  }
  if (frames > 0)
    for (double& v : p) v /= static_cast<double>(frames);
  return p;
}

// ---------------------------------------------------------------------------
// Intervals

struct Interval {
  double start = 0.0;
  double end = 0.0;
};

/// Half-open intersection test with a tolerance against rounding.
inline bool overlaps(Interval a, Interval b, double eps = 1e-9) {
  return a.start < b.end - eps && b.start < a.end - eps;
}

// ---------------------------------------------------------------------------
// Time shift: grid search

struct ShiftEvent {
  double onset = 0.0;
  double duration = 0.0;
  bool is_virtual = true;
};

/// Reference time shift. Virtual events are visited by scheduled onset (ties
/// by index). Each one that collides with a guard-inflated obstacle is moved
/// to the first point of a `grid`-second lattice, starting at the larger of
/// its own onset and the onset of the previous delayed event, at which it
/// collides with nothing; it then becomes an obstacle. Returns actual onsets
/// in input order.
inline std::vector<double> time_shift_grid(const std::vector<ShiftEvent>& events,
                                           const std::vector<Interval>& protected_spans,
                                           double guard, double grid = 0.001) {
  std::vector<Interval> obstacles;
  for (auto p : protected_spans) obstacles.push_back({p.start - guard, p.end + guard});
  std::vector<double> actual(events.size());
  std::vector<std::size_t> order(events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return events[a].onset < events[b].onset; });
  auto clear = [&](double t, double d) {
    for (auto o : obstacles)
      if (overlaps({t, t + d}, o)) return false;
    return true;
  };
  double last_delayed = -std::numeric_limits<double>::infinity();
  for (std::size_t i : order) {
    const ShiftEvent& e = events[i];
    actual[i] = e.onset;
    if (!e.is_virtual || clear(e.onset, e.duration)) continue;
    const double lower = std::max(e.onset, last_delayed);
    // Walk the lattice k * grid, k integer, from the first point >= lower.
    auto k = static_cast<std::int64_t>(std::ceil(lower / grid - 1e-9));
    while (!clear(k * grid, e.duration)) ++k;
    actual[i] = std::max(lower, k * grid);
    last_delayed = actual[i];
    obstacles.push_back({actual[i] - guard, actual[i] + e.duration + guard});
  }
  return actual;
}

// ---------------------------------------------------------------------------
// Scoring: exhaustive maximum matching

struct KeyedTime {
  double t = 0.0;
  int key = 0;
};

/// Largest number of (press, event) pairs with equal keys and
/// onset <= press <= onset + window, each used at most once. Exponential;
/// meant for a handful of items.
inline int max_matching(const std::vector<KeyedTime>& events, const std::vector<KeyedTime>& presses,
                        double window) {
  std::vector<bool> used(events.size(), false);
  std::function<int(std::size_t)> go = [&](std::size_t p) -> int {
    if (p == presses.size()) return 0;
    int best = go(p + 1);  // leave press p unmatched
    for (std::size_t e = 0; e < events.size(); ++e) {
      if (used[e] || events[e].key != presses[p].key) continue;
      if (presses[p].t < events[e].t || presses[p].t > events[e].t + window) continue;
      used[e] = true;
      best = std::max(best, 1 + go(p + 1));
      used[e] = false;
    }
    return best;
  };
  return go(0);
}

// ---------------------------------------------------------------------------
// Geometry

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct PathPoint {
  double t = 0.0;
  Point p;
};

inline Point lerp_path(const std::vector<PathPoint>& path, double t) {
  if (t <= path.front().t) return path.front().p;
  if (t >= path.back().t) return path.back().p;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (t <= path[i + 1].t) {
      const double u = (t - path[i].t) / (path[i + 1].t - path[i].t);
      const Point a = path[i].p;
      const Point b = path[i + 1].p;
      return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), a.z + u * (b.z - a.z)};
    }
  }
  return path.back().p;
}

/// Times at which a `step`-second scan first finds the path inside the
/// sphere after being outside (or at the start).
inline std::vector<double> proximity_scan(const std::vector<PathPoint>& path, Point c, double r,
                                          double step = 0.01) {
  std::vector<double> out;
  bool was_inside = false;
  const double end = path.back().t;
  for (long k = 0;; ++k) {
    const double t = std::min(end, path.front().t + k * step);
    const Point p = lerp_path(path, t);
    const double d = std::sqrt((p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y) +
                               (p.z - c.z) * (p.z - c.z));
    const bool inside = d <= r;
    if (inside && !was_inside) out.push_back(t);
    was_inside = inside;
    if (t >= end) break;
  }
  return out;
}

}  // namespace oracle
