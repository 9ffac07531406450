#include "hourglass/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>

namespace hourglass {

void BipartiteGraph::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n_left || e.v < 0 || e.v >= n_right)
      throw std::invalid_argument("edge endpoint out of range");
    if (!seen.insert({e.u, e.v}).second)
      throw std::invalid_argument("duplicate edge");
  }
}

int Matching::size() const {
  int n = 0;
  for (int v : right_of)
    if (v >= 0) ++n;
  return n;
}

void Matching::add(int u, int v) {
  if (right_of[u] >= 0 || left_of[v] >= 0)
    throw std::invalid_argument("matching is not injective");
  right_of[u] = v;
  left_of[v] = u;
}

void Matching::remove(int u) {
  int v = right_of[u];
  if (v < 0) return;
  right_of[u] = -1;
  left_of[v] = -1;
}

namespace {

// Sorted adjacency (left -> right ids) for deterministic traversal.
std::vector<std::vector<int>> adjacency(const BipartiteGraph& g) {
  std::vector<std::vector<int>> adj(g.n_left);
  for (const auto& e : g.edges) adj[e.u].push_back(e.v);
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

void check_seed(const BipartiteGraph& g, const Matching& seed) {
  if ((int)seed.right_of.size() != g.n_left ||
      (int)seed.left_of.size() != g.n_right)
    throw std::invalid_argument("seed matching has wrong dimensions");
  std::set<std::pair<int, int>> edge_set;
  for (const auto& e : g.edges) edge_set.insert({e.u, e.v});
  for (int u = 0; u < g.n_left; ++u) {
    int v = seed.right_of[u];
    if (v < 0) continue;
    if (seed.left_of[v] != u || !edge_set.count({u, v}))
      throw std::invalid_argument("seed matching invalid in graph");
  }
}

constexpr int kInf = std::numeric_limits<int>::max();

}  // namespace

Matching hopcroft_karp(const BipartiteGraph& g, const Matching& seed) {
  check_seed(g, seed);
  auto adj = adjacency(g);
  Matching m = seed;

  std::vector<int> dist(g.n_left);
  auto bfs = [&]() {
    std::queue<int> q;
    for (int u = 0; u < g.n_left; ++u) {
      if (!m.matched_left(u)) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        int w = m.left_of[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  std::function<bool(int)> dfs = [&](int u) {
    for (int v : adj[u]) {
      int w = m.left_of[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        m.right_of[u] = v;
        m.left_of[v] = u;
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  };

  while (bfs()) {
    for (int u = 0; u < g.n_left; ++u)
      if (!m.matched_left(u)) dfs(u);
  }
  return m;
}

std::vector<int> hall_witness(const BipartiteGraph& g, const Matching& m) {
  // Koenig: W = left vertices reachable from unmatched lefts by alternating
  // paths. All their neighbors are matched back into W, so |N(W)| < |W|.
  auto adj = adjacency(g);
  std::vector<char> left_seen(g.n_left, 0), right_seen(g.n_right, 0);
  std::queue<int> q;
  for (int u = 0; u < g.n_left; ++u)
    if (!m.matched_left(u)) {
      left_seen[u] = 1;
      q.push(u);
    }
  if (q.empty()) return {};
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (right_seen[v]) continue;
      right_seen[v] = 1;
      int w = m.left_of[v];
      if (w >= 0 && !left_seen[w]) {
        left_seen[w] = 1;
        q.push(w);
      }
    }
  }
  std::vector<int> witness;
  for (int u = 0; u < g.n_left; ++u)
    if (left_seen[u]) witness.push_back(u);
  return witness;
}

std::optional<std::vector<int>> find_augmenting_path(const BipartiteGraph& g,
                                                     const Matching& m, int u,
                                                     int v) {
  if (m.matched_left(u) || m.matched_right(v))
    throw std::invalid_argument("endpoints must be unmatched");
  auto adj = adjacency(g);
  // BFS over left vertices; step = unmatched edge to a right vertex,
  // then its matching edge back to a left vertex.
  std::vector<int> prev_left(g.n_left, -2), via_right(g.n_left, -1);
  std::vector<char> right_seen(g.n_right, 0);
  prev_left[u] = -1;
  std::queue<int> q;
  q.push(u);
  int end_right = -1;
  std::vector<int> right_prev(g.n_right, -1);
  while (!q.empty() && end_right < 0) {
    int x = q.front();
    q.pop();
    for (int y : adj[x]) {
      if (m.right_of[x] == y) continue;  // must leave on a non-matching edge
      if (right_seen[y]) continue;
      right_seen[y] = 1;
      right_prev[y] = x;
      if (y == v) {
        end_right = y;
        break;
      }
      int w = m.left_of[y];
      if (w >= 0 && prev_left[w] == -2) {
        prev_left[w] = x;
        via_right[w] = y;
        q.push(w);
      }
    }
  }
  if (end_right < 0) return std::nullopt;
  std::vector<int> path;
  path.push_back(end_right);
  int x = right_prev[end_right];
  while (x != -1) {
    path.push_back(x);
    int y = via_right[x];
    if (prev_left[x] == -1) break;
    path.push_back(y);
    x = prev_left[x];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Matching aug(const Matching& m, const std::vector<int>& path) {
  if (path.size() < 2 || path.size() % 2 != 0)
    throw std::invalid_argument("path must alternate left/right");
  if (m.matched_left(path.front()) || m.matched_right(path.back()))
    throw std::invalid_argument("path endpoints must be unmatched");
  for (size_t i = 1; i + 1 < path.size(); i += 2)
    if (m.left_of[path[i]] != path[i + 1])
      throw std::invalid_argument("path is not alternating for m");
  Matching out = m;
  // path = u, y0, x0, y1, ... , v ; odd positions are right vertices.
  for (size_t i = 0; i + 1 < path.size(); i += 2) {
    int x = path[i], y = path[i + 1];
    if (out.right_of[x] >= 0) out.remove(x);
    int x2 = out.left_of[y];
    if (x2 >= 0) out.remove(x2);
    out.add(x, y);
  }
  return out;
}

bool edge_less(const BipartiteGraph& g, int e, int f) {
  if (g.edges[e].w != g.edges[f].w) return g.edges[e].w < g.edges[f].w;
  return e < f;
}

BottleneckResult static_bottleneck(const BipartiteGraph& g) {
  if (g.n_left != g.n_right)
    throw std::invalid_argument("static_bottleneck needs |X| = |Y|");
  const int n = g.n_left;
  if (n == 0) return {0.0, Matching(0, 0), -1};

  std::vector<int> order((size_t)g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int e, int f) { return edge_less(g, e, f); });

  // feasible(k): the first k edges in tiebreak order admit a perfect matching.
  Matching best;
  auto feasible = [&](int k, const Matching& seed_hint) {
    BipartiteGraph sub{g.n_left, g.n_right, {}};
    std::vector<char> allowed(g.edges.size(), 0);
    for (int i = 0; i < k; ++i) allowed[order[i]] = 1;
    for (size_t e = 0; e < g.edges.size(); ++e)
      if (allowed[e]) sub.edges.push_back(g.edges[e]);
    Matching seed = seed_hint;
    for (int u = 0; u < n; ++u) {
      int v = seed.right_of[u];
      if (v < 0) continue;
      bool ok = false;
      for (const auto& e : sub.edges)
        if (e.u == u && e.v == v) ok = true;
      if (!ok) seed.remove(u);
    }
    Matching m = hopcroft_karp(sub, seed);
    if (m.size() == n) {
      best = m;
      return true;
    }
    return false;
  };

  int m_edges = (int)g.edges.size();
  if (!feasible(m_edges, Matching(n, n))) {
    Matching full = hopcroft_karp(g, Matching(n, n));
    throw NoPerfectMatching(hall_witness(g, full));
  }
  int lo = n, hi = m_edges;  // feasible at hi
  Matching hint = best;
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (feasible(mid, hint)) {
      hi = mid;
      hint = best;
    } else {
      lo = mid + 1;
    }
  }
  feasible(hi, hint);

  BottleneckResult res;
  res.matching = best;
  res.bottleneck_edge = order[hi - 1];
  // The max-weight matched edge under the tiebreak order. The binary search
  // lands exactly on it, but recompute from the matching for clarity.
  std::vector<std::vector<int>> edge_idx(n, std::vector<int>(n, -1));
  for (size_t e = 0; e < g.edges.size(); ++e)
    edge_idx[g.edges[e].u][g.edges[e].v] = (int)e;
  int top = -1;
  for (int u = 0; u < n; ++u) {
    int e = edge_idx[u][best.right_of[u]];
    if (top < 0 || edge_less(g, top, e)) top = e;
  }
  res.bottleneck_edge = top;
  res.value = g.edges[top].w;
  return res;
}

double brute_force_bottleneck(const BipartiteGraph& g) {
  if (g.n_left != g.n_right)
    throw std::invalid_argument("needs |X| = |Y|");
  const int n = g.n_left;
  if (n > 8) throw std::invalid_argument("brute force refused for n > 8");
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> w(
      n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
  for (const auto& e : g.edges) w[e.u][e.v] = e.w;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double mx = 0.0;
    bool ok = true;
    for (int u = 0; u < n && ok; ++u) {
      if (std::isinf(w[u][perm[u]]))
        ok = false;
      else
        mx = std::max(mx, w[u][perm[u]]);
    }
    if (ok) best = std::min(best, mx);
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (std::isinf(best)) {
    Matching full = hopcroft_karp(g, Matching(n, n));
    throw NoPerfectMatching(hall_witness(g, full));
  }
  return best;
}

BipartiteGraph diagram_reduction(const std::vector<DiagramPoint>& xs,
                                 const std::vector<DiagramPoint>& ys) {
  for (const auto& p : xs)
    if (!(p.death > p.birth))
      throw std::invalid_argument("on-diagonal point in X");
  for (const auto& p : ys)
    if (!(p.death > p.birth))
      throw std::invalid_argument("on-diagonal point in Y");

  const int nx = (int)xs.size(), ny = (int)ys.size();
  auto proj = [](const DiagramPoint& p) {
    double m = 0.5 * (p.birth + p.death);
    return DiagramPoint{m, m};
  };
  // U = X then proj(Y); V = Y then proj(X).
  std::vector<DiagramPoint> us, vs;
  std::vector<char> u_is_proj, v_is_proj;
  for (const auto& p : xs) us.push_back(p), u_is_proj.push_back(0);
  for (const auto& p : ys) us.push_back(proj(p)), u_is_proj.push_back(1);
  for (const auto& p : ys) vs.push_back(p), v_is_proj.push_back(0);
  for (const auto& p : xs) vs.push_back(proj(p)), v_is_proj.push_back(1);

  BipartiteGraph g{nx + ny, nx + ny, {}};
  for (int u = 0; u < nx + ny; ++u) {
    for (int v = 0; v < nx + ny; ++v) {
      double w;
      if (u_is_proj[u] && v_is_proj[v]) {
        w = 0.0;
      } else {
        w = std::max(std::abs(us[u].birth - vs[v].birth),
                     std::abs(us[u].death - vs[v].death));
      }
      g.edges.push_back({u, v, w});
    }
  }
  return g;
}

}  // namespace hourglass
