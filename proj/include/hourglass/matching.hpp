#ifndef HOURGLASS_MATCHING_HPP
#define HOURGLASS_MATCHING_HPP

#include <optional>
#include <stdexcept>
#include <vector>

namespace hourglass {

struct WeightedEdge {
  int u = 0;  // left vertex
  int v = 0;  // right vertex
  double w = 0.0;
};

struct BipartiteGraph {
  int n_left = 0;
  int n_right = 0;
  std::vector<WeightedEdge> edges;

  void validate() const;
};

/// Matching as a left-to-right assignment; -1 means unmatched.
struct Matching {
  std::vector<int> right_of;  // indexed by left vertex
  std::vector<int> left_of;   // indexed by right vertex

  Matching() = default;
  Matching(int n_left, int n_right)
      : right_of(n_left, -1), left_of(n_right, -1) {}

  int size() const;
  void add(int u, int v);
  void remove(int u);
  bool matched_left(int u) const { return right_of[u] >= 0; }
  bool matched_right(int v) const { return left_of[v] >= 0; }
};

/// Thrown when a perfect matching is required but does not exist. Carries a
/// Hall violation witness when one was computed: |witness| > |N(witness)|.
class NoPerfectMatching : public std::runtime_error {
 public:
  explicit NoPerfectMatching(std::vector<int> witness)
      : std::runtime_error("no perfect matching exists"),
        hall_witness(std::move(witness)) {}
  std::vector<int> hall_witness;  // subset of left vertices
};

/// Maximum matching by Hopcroft-Karp, starting from `seed`.
Matching hopcroft_karp(const BipartiteGraph& g, const Matching& seed);

/// Left vertices W with |W| > |N(W)| (empty when the matching is perfect).
/// Derived from the final Hopcroft-Karp layering.
std::vector<int> hall_witness(const BipartiteGraph& g, const Matching& m);

/// Shortest alternating path from unmatched left u to unmatched right v,
/// as a vertex sequence u, y0, x0, y1, ..., v. Deterministic under
/// neighbor-id order.
std::optional<std::vector<int>> find_augmenting_path(const BipartiteGraph& g,
                                                     const Matching& m, int u,
                                                     int v);

/// Berge step: symmetric difference of m with the path's edges.
Matching aug(const Matching& m, const std::vector<int>& path);

struct BottleneckResult {
  double value = 0.0;
  Matching matching;
  int bottleneck_edge = -1;  // index into g.edges
};

/// Global tiebreak order on edges: (weight, edge index) lexicographic.
bool edge_less(const BipartiteGraph& g, int e, int f);

/// Minimum over perfect matchings of the max edge weight, via sorted weights,
/// binary search and Hopcroft-Karp. Throws NoPerfectMatching.
BottleneckResult static_bottleneck(const BipartiteGraph& g);

/// Exhaustive oracle over all n! assignments; refuses n > 8.
double brute_force_bottleneck(const BipartiteGraph& g);

struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
};

/// Reduction of the diagram bottleneck problem to a bipartite graph:
/// U = X u proj(Y), V = Y u proj(X), with L-inf weights and zero cost
/// between projections. Throws on on-diagonal input points.
BipartiteGraph diagram_reduction(const std::vector<DiagramPoint>& xs,
                                 const std::vector<DiagramPoint>& ys);

}  // namespace hourglass

#endif
