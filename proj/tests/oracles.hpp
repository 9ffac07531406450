#pragma once

// Independent reference implementations used to check the library:
// adaptive Simpson quadrature, dense-sampling crossing search, and random
// instance generators. Deliberately simple and slow.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "hourglass/curves.hpp"
#include "hourglass/hourglass.hpp"
#include "hourglass/matching.hpp"

namespace oracles {

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

/// Adaptive Simpson quadrature. Split at `knots` first so the integrand is
/// smooth on every subinterval.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, const std::vector<double>& knots = {},
                        double eps = 1e-12) {
  std::vector<double> cuts{a, b};
  for (double k : knots)
    if (k > a && k < b) cuts.push_back(k);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    if (hi - lo < 1e-15) continue;
    double m = 0.5 * (lo + hi);
    double flo = f(lo), fm = f(m), fhi = f(hi);
    double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += simpson_rec(f, lo, hi, flo, fm, fhi, whole, eps, 40);
  }
  return total;
}

/// First strict sign change of f after `after`, located by dense sampling
/// followed by bisection. Returns nullopt when no change is seen before
/// `until`.
inline std::optional<double> first_sign_change(
    const std::function<double(double)>& f, double after, double until,
    int samples = 200000) {
  double prev_t = after, prev_v = f(after);
  for (int i = 1; i <= samples; ++i) {
    double t = after + (until - after) * i / samples;
    double v = f(t);
    if ((prev_v < 0 && v > 0) || (prev_v > 0 && v < 0)) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        double vm = f(mid);
        if (vm == 0.0) return mid;
        if ((vm < 0) == (prev_v < 0))
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    if (v != 0.0) {
      prev_t = t;
      prev_v = v;
    }
  }
  return std::nullopt;
}

/// Random positive piecewise-linear plan on an interval domain.
inline hourglass::FlightPlan random_linear_plan(std::mt19937_64& rng,
                                                double t0, double t1,
                                                int max_pieces = 4) {
  std::uniform_int_distribution<int> np(1, max_pieces);
  std::uniform_real_distribution<double> val(0.1, 10.0);
  int k = np(rng);
  std::vector<double> cuts{t0, t1};
  std::uniform_real_distribution<double> inner(t0, t1);
  for (int i = 1; i < k; ++i) cuts.push_back(inner(rng));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> vals;
  for (std::size_t i = 0; i < cuts.size(); ++i) vals.push_back(val(rng));
  std::vector<hourglass::CostPiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    double slope = (vals[i + 1] - vals[i]) / (b - a);
    pieces.push_back({a, b, hourglass::Linear{vals[i] - slope * a, slope}});
  }
  return hourglass::FlightPlan(hourglass::Domain::interval(t0, t1),
                               std::move(pieces));
}

/// Random max-of-|sinusoids| plan covering the full circle in one piece.
inline hourglass::FlightPlan random_sinusoid_plan(std::mt19937_64& rng,
                                                  int terms = 2) {
  std::uniform_real_distribution<double> amp(0.2, 3.0);
  std::uniform_real_distribution<double> ph(0.0, hourglass::kTwoPi);
  hourglass::MaxAbsSinusoids m;
  std::uniform_int_distribution<int> nt(1, terms);
  int k = nt(rng);
  for (int i = 0; i < k; ++i) m.terms.push_back({amp(rng), ph(rng)});
  std::vector<hourglass::CostPiece> pieces{{0.0, hourglass::kTwoPi, m}};
  return hourglass::FlightPlan(hourglass::Domain::circle(), std::move(pieces));
}

/// Random bipartite instance that always contains a perfect matching
/// (a hidden permutation plus extra edges).
inline hourglass::KineticGraph random_kinetic_graph(std::mt19937_64& rng,
                                                    int n, int extra,
                                                    double t0, double t1) {
  hourglass::KineticGraph g;
  g.n_left = n;
  g.n_right = n;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<std::pair<int, int>> used;
  for (int u = 0; u < n; ++u) {
    used.insert({u, perm[u]});
    g.edges.push_back({u, perm[u], random_linear_plan(rng, t0, t1)});
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int i = 0; i < extra; ++i) {
    int u = pick(rng), v = pick(rng);
    if (!used.insert({u, v}).second) continue;
    g.edges.push_back({u, v, random_linear_plan(rng, t0, t1)});
  }
  return g;
}

}  // namespace oracles
