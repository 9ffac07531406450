#include "hourglass/pht.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace hourglass {

namespace {

constexpr double kStitchTol = 1e-9;

double wrap_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

struct DSU {
  std::vector<int> parent;
  explicit DSU(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int into, int from) { parent[find(from)] = find(into); }
};

double point_segment_dist(const std::array<double, 2>& p,
                          const std::array<double, 2>& a,
                          const std::array<double, 2>& b) {
  double vx = b[0] - a[0], vy = b[1] - a[1];
  double wx = p[0] - a[0], wy = p[1] - a[1];
  double den = vx * vx + vy * vy;
  double s = den > 0 ? std::clamp((wx * vx + wy * vy) / den, 0.0, 1.0) : 0.0;
  double dx = wx - s * vx, dy = wy - s * vy;
  return std::hypot(dx, dy);
}

}  // namespace

void EmbeddedGraph::validate() const {
  int n = (int)vertices.size();
  if (n == 0) throw std::invalid_argument("graph has no vertices");
  for (const auto& v : vertices)
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
      throw std::invalid_argument("non-finite vertex coordinate");
  std::set<std::pair<int, int>> seen;
  DSU dsu(n);
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw std::invalid_argument("edge references a missing vertex");
    if (i == j) throw std::invalid_argument("self-loop edge");
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
      throw std::invalid_argument("duplicate edge");
    dsu.unite(i, j);
  }
  for (int v = 1; v < n; ++v)
    if (dsu.find(v) != dsu.find(0))
      throw std::invalid_argument("graph is not connected");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::hypot(vertices[i][0] - vertices[j][0],
                     vertices[i][1] - vertices[j][1]) < 1e-12)
        throw std::invalid_argument("coincident vertices");
}

DirectionDiagram lower_star_diagram(const EmbeddedGraph& g, double theta) {
  int n = (int)g.vertices.size();
  std::vector<double> h(n);
  for (int v = 0; v < n; ++v) h[v] = vertex_height(g, v, theta);
  auto key = [&](int v) { return std::make_pair(h[v], v); };

  std::vector<std::vector<int>> nbrs(n);
  for (auto [i, j] : g.edges) {
    nbrs[i].push_back(j);
    nbrs[j].push_back(i);
  }
  for (auto& a : nbrs) std::sort(a.begin(), a.end());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return key(a) < key(b); });

  DSU dsu(n);
  std::vector<int> comp_min(n);        // representative -> lowest vertex
  std::iota(comp_min.begin(), comp_min.end(), 0);
  std::vector<char> alive(n, 0);

  DirectionDiagram out;
  for (int v : order) {
    alive[v] = 1;
    for (int u : nbrs[v]) {
      if (!alive[u]) continue;
      int ru = dsu.find(u), rv = dsu.find(v);
      if (ru == rv) continue;
      int mu = comp_min[ru], mv = comp_min[rv];
      int elder = key(mu) < key(mv) ? ru : rv;
      int young = elder == ru ? rv : ru;
      int ym = comp_min[young];
      if (ym != v)  // the singleton {v} dies with zero persistence: dropped
        out.finite.push_back({h[ym], h[v], ym, v});
      dsu.unite(elder, young);
      comp_min[dsu.find(elder)] = key(mu) < key(mv) ? mu : mv;
    }
  }
  int root = dsu.find(order[0]);
  out.essential_vertex = comp_min[root];
  out.essential_birth = h[out.essential_vertex];
  return out;
}

std::vector<double> critical_directions(const EmbeddedGraph& g) {
  int n = (int)g.vertices.size();
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double dx = g.vertices[j][0] - g.vertices[i][0];
      double dy = g.vertices[j][1] - g.vertices[i][1];
      double base = std::atan2(dy, dx);
      out.push_back(wrap_angle(base + M_PI / 2));
      out.push_back(wrap_angle(base - M_PI / 2));
    }
  }
  std::sort(out.begin(), out.end());
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    if (out[i + 1] - out[i] < 1e-9)
      throw GenericityError("two vertex-pair lines are parallel");
  if (out.size() > 1 && out.front() + kTwoPi - out.back() < 1e-9)
    throw GenericityError("two vertex-pair lines are parallel");
  return out;
}

std::vector<ExtremalVertex> extremal_vertices(const EmbeddedGraph& g) {
  int n = (int)g.vertices.size();
  std::vector<std::vector<std::pair<double, int>>> inc(n);  // (angle, edge id)
  for (int e = 0; e < (int)g.edges.size(); ++e) {
    auto [i, j] = g.edges[e];
    double ang = std::atan2(g.vertices[j][1] - g.vertices[i][1],
                            g.vertices[j][0] - g.vertices[i][0]);
    inc[i].push_back({wrap_angle(ang), e});
    inc[j].push_back({wrap_angle(ang + M_PI), e});
  }
  std::vector<ExtremalVertex> out;
  for (int v = 0; v < n; ++v) {
    auto& a = inc[v];
    if (a.empty()) {
      out.push_back({v, 0.0, kTwoPi, {}});
      continue;
    }
    std::sort(a.begin(), a.end());
    // Largest angular gap between consecutive incident edge directions.
    std::size_t best = a.size() - 1;
    double best_gap = a.front().first + kTwoPi - a.back().first;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      double gap = a[i + 1].first - a[i].first;
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best_gap <= M_PI + 1e-12) continue;  // inside the hull of neighbors
    double alpha = a[best].first;                       // before the gap
    double beta_w = a[(best + 1) % a.size()].first;     // after the gap
    double span = kTwoPi - best_gap;  // all directions fit in `span`
    double alpha_unwrapped = beta_w + span;
    (void)alpha;
    ExtremalVertex ev;
    ev.vertex = v;
    ev.omega1 = wrap_angle(alpha_unwrapped - M_PI / 2);
    ev.omega2 = ev.omega1 + (M_PI - span);
    ev.external_edges.push_back(a[best].second);
    if (a.size() > 1) ev.external_edges.push_back(a[(best + 1) % a.size()].second);
    out.push_back(std::move(ev));
  }
  return out;
}

std::array<double, 2> Vine::at(const EmbeddedGraph& g, double theta) const {
  const VineArc& arc = arc_at(theta);
  double t = theta;
  while (t < arc.a0) t += kTwoPi;
  return {vertex_height(g, arc.birth_vertex, t),
          vertex_height(g, arc.death_vertex, t)};
}

const VineArc& Vine::arc_at(double theta) const {
  double t = theta;
  while (t < arcs.front().a0 - 1e-12) t += kTwoPi;
  while (t >= arcs.back().a1 + 1e-12 && closed) t -= kTwoPi;
  for (const auto& arc : arcs)
    if (t >= arc.a0 - 1e-12 && t <= arc.a1 + 1e-12) return arc;
  throw std::out_of_range("direction outside the vine's alive interval");
}

double PiecewiseSinusoid::eval(double theta) const {
  double t = wrap_angle(theta);
  for (const auto& p : pieces)
    if (t >= p.a0 - 1e-12 && t < p.a1) return p.s.value(t);
  return pieces.back().s.value(t);
}

PHTVineyard compute_vines(const EmbeddedGraph& g) {
  g.validate();
  std::vector<double> bounds = critical_directions(g);
  if (bounds.empty()) bounds.push_back(0.0);
  int na = (int)bounds.size();  // arc k covers [bounds[k], bounds[k+1])

  auto arc_lo = [&](int k) { return bounds[k]; };
  auto arc_hi = [&](int k) {
    return k + 1 < na ? bounds[k + 1] : bounds[0] + kTwoPi;
  };

  std::vector<DirectionDiagram> dg(na);
  for (int k = 0; k < na; ++k)
    dg[k] = lower_star_diagram(g, 0.5 * (arc_lo(k) + arc_hi(k)));

  // links[k][p] = index of the continuation of point p (arc k) in arc k+1.
  std::vector<std::vector<int>> links(na);
  for (int k = 0; k < na; ++k) {
    int k2 = (k + 1) % na;
    double beta = arc_hi(k);  // boundary angle between arc k and arc k2
    auto pos = [&](const FinitePoint& p) {
      return std::array<double, 2>{vertex_height(g, p.birth_vertex, beta),
                                   vertex_height(g, p.death_vertex, beta)};
    };
    links[k].assign(dg[k].finite.size(), -1);
    std::vector<int> taken(dg[k2].finite.size(), -1);
    // Pass 1: a point whose (birth, death) vertex pair survives the boundary
    // continues on the same ellipse; several such points may coincide in
    // position exactly at the boundary, so the pair match takes precedence.
    for (int p = 0; p < (int)dg[k].finite.size(); ++p) {
      auto lp = pos(dg[k].finite[p]);
      if (std::abs(lp[0] - lp[1]) <= kStitchTol) continue;  // dies here
      for (int q = 0; q < (int)dg[k2].finite.size(); ++q) {
        if (taken[q] >= 0) continue;
        if (dg[k2].finite[q].birth_vertex == dg[k].finite[p].birth_vertex &&
            dg[k2].finite[q].death_vertex == dg[k].finite[p].death_vertex) {
          taken[q] = p;
          links[k][p] = q;
          break;
        }
      }
    }
    // Pass 2: remaining points hand off to a new vertex pair; the position
    // limit identifies the continuation.
    for (int p = 0; p < (int)dg[k].finite.size(); ++p) {
      if (links[k][p] >= 0) continue;
      auto lp = pos(dg[k].finite[p]);
      // A point on the diagonal at the boundary dies there; a fresh vine may
      // be born at the same spot, so diagonal points never continue.
      if (std::abs(lp[0] - lp[1]) <= kStitchTol) continue;
      int hit = -1;
      for (int q = 0; q < (int)dg[k2].finite.size(); ++q) {
        if (taken[q] >= 0) continue;
        auto rp = pos(dg[k2].finite[q]);
        if (std::abs(rp[0] - rp[1]) <= kStitchTol) continue;
        if (std::abs(lp[0] - rp[0]) < kStitchTol &&
            std::abs(lp[1] - rp[1]) < kStitchTol) {
          if (hit >= 0)
            throw MonodromyError("ambiguous vine continuation at a critical direction");
          hit = q;
        }
      }
      if (hit < 0)
        throw MonodromyError(
            "vine limit mismatch at a critical direction (nontrivial "
            "monodromy / not star-shaped)");
      taken[hit] = p;
      links[k][p] = hit;
    }
    // Unmatched continuations must be newborn on the diagonal.
    for (int q = 0; q < (int)dg[k2].finite.size(); ++q) {
      if (taken[q] >= 0) continue;
      auto rp = pos(dg[k2].finite[q]);
      if (std::abs(rp[0] - rp[1]) > kStitchTol)
        throw MonodromyError(
            "vine appears away from the diagonal (nontrivial monodromy / "
            "not star-shaped)");
    }
  }

  PHTVineyard vy;
  vy.graph = g;

  // Decompose the link permutation into open chains and closed loops.
  std::vector<std::vector<char>> used(na);
  for (int k = 0; k < na; ++k) used[k].assign(dg[k].finite.size(), 0);
  auto has_pred = [&](int k, int q) {
    int kp = (k + na - 1) % na;
    for (int p = 0; p < (int)links[kp].size(); ++p)
      if (links[kp][p] == q) return true;
    return false;
  };
  auto walk = [&](int k0, int p0, bool closed) {
    Vine vine;
    vine.closed = closed;
    int k = k0, p = p0;
    double lo = arc_lo(k0);
    double offset = 0.0;
    int steps = 0;
    while (true) {
      used[k][p] = 1;
      double hi = arc_hi(k) + offset;
      vine.arcs.push_back({lo, hi, dg[k].finite[p].birth_vertex,
                           dg[k].finite[p].death_vertex});
      int q = links[k][p];
      if (q < 0 && !closed) break;
      if (++steps > na)
        throw MonodromyError(
            "vine does not close after one revolution (nontrivial monodromy)");
      int k2 = (k + 1) % na;
      if (k2 == 0) offset += kTwoPi;
      if (closed && k2 == k0) {
        if (q != p0)
          throw MonodromyError(
              "vine permutes diagram points after one revolution (nontrivial "
              "monodromy)");
        break;
      }
      if (q < 0)
        throw MonodromyError("closed vine chain broke unexpectedly");
      k = k2;
      p = q;
      lo = hi;
    }
    vy.vines.push_back(std::move(vine));
  };

  for (int k = 0; k < na; ++k)
    for (int p = 0; p < (int)dg[k].finite.size(); ++p)
      if (!used[k][p] && !has_pred(k, p)) walk(k, p, false);
  for (int k = 0; k < na; ++k)
    for (int p = 0; p < (int)dg[k].finite.size(); ++p)
      if (!used[k][p]) walk(k, p, true);

  for (int k = 0; k < na; ++k) {
    int v = dg[k].essential_vertex;
    vy.essential_birth.pieces.push_back(
        {arc_lo(k), arc_hi(k),
         Sinusoid::from_ab(g.vertices[v][0], g.vertices[v][1])});
  }
  // The final arc extends past 2*pi; fold its tail back to [0, bounds[0]).
  if (bounds[0] > 0.0) {
    auto& last = vy.essential_birth.pieces.back();
    last.a1 = kTwoPi;
    vy.essential_birth.pieces.insert(
        vy.essential_birth.pieces.begin(),
        {0.0, bounds[0],
         Sinusoid::from_ab(g.vertices[dg[na - 1].essential_vertex][0],
                           g.vertices[dg[na - 1].essential_vertex][1])});
  }
  return vy;
}

namespace {

struct VineRef {
  const PHTVineyard* vy;
  int idx;
  std::array<double, 2> birth_coords(double theta) const {
    const VineArc& a = vy->vines[idx].arc_at(theta);
    return vy->graph.vertices[a.birth_vertex];
  }
  std::array<double, 2> death_coords(double theta) const {
    const VineArc& a = vy->vines[idx].arc_at(theta);
    return vy->graph.vertices[a.death_vertex];
  }
};

// All vine arc boundaries falling strictly inside (theta0, theta1).
void add_breaks(const PHTVineyard& vy, const std::vector<int>& alive,
                double theta0, double theta1, std::set<double>& breaks) {
  for (int idx : alive) {
    for (const auto& arc : vy.vines[idx].arcs) {
      for (double raw : {arc.a0, arc.a1}) {
        double t = wrap_angle(raw);
        for (double cand : {t, t + kTwoPi})
          if (cand > theta0 + 1e-12 && cand < theta1 - 1e-12)
            breaks.insert(cand);
      }
    }
  }
}

Sinusoid diff_sinusoid(const std::array<double, 2>& a,
                       const std::array<double, 2>& b) {
  return Sinusoid::from_ab(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

KineticGraph pht_bipartite_graph(const PHTVineyard& a,
                                 const std::vector<int>& alive_a,
                                 const PHTVineyard& b,
                                 const std::vector<int>& alive_b,
                                 double theta0, double theta1) {
  int n1 = (int)alive_a.size(), n2 = (int)alive_b.size();
  int total = n1 + n2;
  KineticGraph g;
  g.n_left = g.n_right = total;
  if (total == 0) return g;

  std::set<double> break_set;
  add_breaks(a, alive_a, theta0, theta1, break_set);
  add_breaks(b, alive_b, theta0, theta1, break_set);
  std::vector<double> cuts{theta0};
  cuts.insert(cuts.end(), break_set.begin(), break_set.end());
  cuts.push_back(theta1);

  Domain dom = Domain::interval(theta0, theta1);
  // Left nodes: alive A vines, then projections of alive B vines.
  // Right nodes: alive B vines, then projections of alive A vines.
  for (int u = 0; u < total; ++u) {
    for (int v = 0; v < total; ++v) {
      bool u_proj = u >= n1, v_proj = v >= n2;
      std::vector<CostPiece> pieces;
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        double lo = cuts[c], hi = cuts[c + 1];
        double mid = 0.5 * (lo + hi);
        PieceForm form = Zero{};
        if (!u_proj || !v_proj) {
          MaxAbsSinusoids m;
          auto mid_coords = [&](const VineRef& r) {
            auto bc = r.birth_coords(mid), dc = r.death_coords(mid);
            return std::array<double, 2>{0.5 * (bc[0] + dc[0]),
                                         0.5 * (bc[1] + dc[1])};
          };
          if (!u_proj && !v_proj) {
            VineRef ra{&a, alive_a[u]}, rb{&b, alive_b[v]};
            m.terms.push_back(
                diff_sinusoid(ra.birth_coords(mid), rb.birth_coords(mid)));
            m.terms.push_back(
                diff_sinusoid(ra.death_coords(mid), rb.death_coords(mid)));
          } else if (!u_proj) {  // A vine vs projection of an A vine
            VineRef ra{&a, alive_a[u]}, rk{&a, alive_a[v - n2]};
            if (u == v - n2) {
              auto bc = ra.birth_coords(mid), dc = ra.death_coords(mid);
              m.terms.push_back(Sinusoid::from_ab(0.5 * (dc[0] - bc[0]),
                                                  0.5 * (dc[1] - bc[1])));
            } else {
              auto pk = mid_coords(rk);
              m.terms.push_back(diff_sinusoid(ra.birth_coords(mid), pk));
              m.terms.push_back(diff_sinusoid(ra.death_coords(mid), pk));
            }
          } else {  // projection of a B vine vs a B vine
            VineRef rb{&b, alive_b[v]}, rk{&b, alive_b[u - n1]};
            if (v == u - n1) {
              auto bc = rb.birth_coords(mid), dc = rb.death_coords(mid);
              m.terms.push_back(Sinusoid::from_ab(0.5 * (dc[0] - bc[0]),
                                                  0.5 * (dc[1] - bc[1])));
            } else {
              auto pk = mid_coords(rk);
              m.terms.push_back(diff_sinusoid(rb.birth_coords(mid), pk));
              m.terms.push_back(diff_sinusoid(rb.death_coords(mid), pk));
            }
          }
          form = std::move(m);
        }
        pieces.push_back({lo, hi, std::move(form)});
      }
      g.edges.push_back({u, v, FlightPlan(dom, std::move(pieces))});
    }
  }
  return g;
}

namespace {

void spot_check_star_shape(const EmbeddedGraph& g) {
  if (!g.center || g.edges.empty()) return;
  const auto& c = *g.center;
  int samples = 1000;
  for (int s = 0; s < samples; ++s) {
    const auto& [i, j] = g.edges[s % g.edges.size()];
    double u = (s / (double)g.edges.size() + 0.5) /
               (samples / (double)g.edges.size() + 1.0);
    std::array<double, 2> p{
        g.vertices[i][0] + u * (g.vertices[j][0] - g.vertices[i][0]),
        g.vertices[i][1] + u * (g.vertices[j][1] - g.vertices[i][1])};
    for (int k = 1; k < 32; ++k) {
      double w = k / 32.0;
      std::array<double, 2> q{c[0] + w * (p[0] - c[0]), c[1] + w * (p[1] - c[1])};
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [x, y] : g.edges)
        best = std::min(best,
                        point_segment_dist(q, g.vertices[x], g.vertices[y]));
      if (best > 1e-9)
        throw MonodromyError("input is not star-shaped around the given center");
    }
  }
}

bool vine_alive_at(const Vine& v, double theta) {
  if (v.closed) return true;
  double t = wrap_angle(theta);
  double s = v.start(), e = v.end();
  for (double cand : {t, t + kTwoPi})
    if (cand > s + 1e-12 && cand < e - 1e-12) return true;
  return false;
}

FlightPlan essential_gap_plan(const PiecewiseSinusoid& a,
                              const PiecewiseSinusoid& b) {
  std::set<double> cuts{0.0, kTwoPi};
  for (const auto& p : a.pieces) cuts.insert(wrap_angle(p.a0));
  for (const auto& p : b.pieces) cuts.insert(wrap_angle(p.a0));
  std::vector<double> cs(cuts.begin(), cuts.end());
  std::vector<CostPiece> pieces;
  for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
    double lo = cs[i], hi = cs[i + 1];
    if (hi - lo < 1e-15) continue;
    double mid = 0.5 * (lo + hi);
    Sinusoid sa, sb;
    for (const auto& p : a.pieces)
      if (mid >= p.a0 && mid < p.a1) sa = p.s;
    for (const auto& p : b.pieces)
      if (mid >= p.a0 && mid < p.a1) sb = p.s;
    pieces.push_back({lo, hi, MaxAbsSinusoids{{sa - sb}}});
  }
  return FlightPlan(Domain::circle(), std::move(pieces));
}

}  // namespace

IntegratedDistance integrated_distance(const EmbeddedGraph& k1,
                                       const EmbeddedGraph& k2,
                                       Flavor flavor, std::uint64_t seed) {
  spot_check_star_shape(k1);
  spot_check_star_shape(k2);
  PHTVineyard va = compute_vines(k1);
  PHTVineyard vb = compute_vines(k2);

  // Super-arcs: spans between angles where some vine is born or dies. The
  // alive sets (hence the bipartite graph) are constant on each span.
  std::set<double> ends;
  for (const auto* vy : {&va, &vb})
    for (const auto& vine : vy->vines)
      if (!vine.closed) {
        ends.insert(wrap_angle(vine.start()));
        ends.insert(wrap_angle(vine.end()));
      }
  std::vector<double> bounds(ends.begin(), ends.end());
  {
    std::vector<double> dedup;
    for (double t : bounds)
      if (dedup.empty() || t - dedup.back() > 1e-12) dedup.push_back(t);
    if (dedup.size() > 1 && dedup.front() + kTwoPi - dedup.back() < 1e-12)
      dedup.pop_back();
    bounds = std::move(dedup);
  }
  if (bounds.empty()) bounds.push_back(0.0);

  IntegratedDistance out;
  std::vector<CostPiece> finite_pieces;  // over [0, 2pi), assembled below
  for (std::size_t s = 0; s < bounds.size(); ++s) {
    double lo = bounds[s];
    double hi = s + 1 < bounds.size() ? bounds[s + 1] : bounds[0] + kTwoPi;
    double mid = 0.5 * (lo + hi);
    std::vector<int> alive_a, alive_b;
    for (int i = 0; i < (int)va.vines.size(); ++i)
      if (vine_alive_at(va.vines[i], mid)) alive_a.push_back(i);
    for (int i = 0; i < (int)vb.vines.size(); ++i)
      if (vine_alive_at(vb.vines[i], mid)) alive_b.push_back(i);

    std::vector<CostPiece> span_pieces;
    if (alive_a.empty() && alive_b.empty()) {
      span_pieces.push_back({lo, hi, Zero{}});
      out.finite.segments.push_back({lo, hi, -1, span_pieces});
    } else {
      KineticGraph g = pht_bipartite_graph(va, alive_a, vb, alive_b, lo, hi);
      Hourglass h(std::move(g), lo, {flavor, seed});
      BottleneckTrajectory traj = h.run(hi);
      out.events += h.stats().events_processed;
      for (auto& seg : traj.segments) {
        for (const auto& piece : seg.pieces) span_pieces.push_back(piece);
        out.finite.segments.push_back(seg);
      }
    }
    // Fold pieces past 2*pi back to the start of the circle.
    for (auto piece : span_pieces) {
      if (piece.t0 >= kTwoPi - 1e-15) {
        piece.t0 -= kTwoPi;
        piece.t1 -= kTwoPi;
        finite_pieces.push_back(piece);
      } else if (piece.t1 > kTwoPi + 1e-15) {
        CostPiece head = piece, tail = piece;
        head.t1 = kTwoPi;
        tail.t0 = 0.0;
        tail.t1 = piece.t1 - kTwoPi;
        finite_pieces.push_back(head);
        finite_pieces.push_back(tail);
      } else {
        finite_pieces.push_back(piece);
      }
    }
  }
  std::sort(finite_pieces.begin(), finite_pieces.end(),
            [](const CostPiece& x, const CostPiece& y) { return x.t0 < y.t0; });
  // Snap tiny float gaps introduced by the fold; construction (and with it
  // the one-revolution closure check) happens in the FlightPlan ctor.
  for (std::size_t i = 0; i + 1 < finite_pieces.size(); ++i)
    finite_pieces[i].t1 = finite_pieces[i + 1].t0;
  if (!finite_pieces.empty()) {
    finite_pieces.front().t0 = 0.0;
    finite_pieces.back().t1 = kTwoPi;
  }
  FlightPlan finite_plan(Domain::circle(), std::move(finite_pieces));
  FlightPlan essential_plan =
      essential_gap_plan(va.essential_birth, vb.essential_birth);
  out.distance = max_plans(finite_plan, essential_plan);
  out.value = integrate(out.distance, 0.0, kTwoPi);
  return out;
}

double direction_distance(const EmbeddedGraph& k1, const EmbeddedGraph& k2,
                          double theta) {
  DirectionDiagram d1 = lower_star_diagram(k1, theta);
  DirectionDiagram d2 = lower_star_diagram(k2, theta);
  double finite = 0.0;
  if (!d1.finite.empty() || !d2.finite.empty()) {
    std::vector<DiagramPoint> xs, ys;
    for (const auto& p : d1.finite) xs.push_back({p.birth, p.death});
    for (const auto& p : d2.finite) ys.push_back({p.birth, p.death});
    finite = static_bottleneck(diagram_reduction(xs, ys)).value;
  }
  return std::max(finite, std::abs(d1.essential_birth - d2.essential_birth));
}

double sampled_oracle(const EmbeddedGraph& k1, const EmbeddedGraph& k2,
                      int samples) {
  if (samples < 4) throw std::invalid_argument("need at least 4 samples");
  double step = kTwoPi / samples;
  double total = 0.0;
  for (int i = 0; i < samples; ++i)
    total += direction_distance(k1, k2, (i + 0.5) * step) * step;
  return total;
}

}  // namespace hourglass
