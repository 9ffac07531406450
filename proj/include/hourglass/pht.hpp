#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hourglass/curves.hpp"
#include "hourglass/hourglass.hpp"
#include "hourglass/matching.hpp"

namespace hourglass {

/// Planar graph with straight-line embedded edges. The optional center is a
/// point the graph is claimed to be star-shaped around.
struct EmbeddedGraph {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::pair<int, int>> edges;
  std::optional<std::array<double, 2>> center;

  void validate() const;  // shape, simplicity, connectivity
};

class GenericityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MonodromyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Height of a vertex in direction angle theta.
inline double vertex_height(const EmbeddedGraph& g, int v, double theta) {
  return g.vertices[v][0] * std::cos(theta) + g.vertices[v][1] * std::sin(theta);
}

struct FinitePoint {
  double birth = 0.0;
  double death = 0.0;
  int birth_vertex = -1;
  int death_vertex = -1;
};

struct DirectionDiagram {
  double essential_birth = 0.0;
  int essential_vertex = -1;
  std::vector<FinitePoint> finite;
};

/// 0-dimensional persistence of the lower-star filtration in direction theta.
/// Ties in height are broken by vertex id (elder = lower height, then lower
/// id); zero-persistence pairs are dropped.
DirectionDiagram lower_star_diagram(const EmbeddedGraph& g, double theta);

/// Angles (sorted, on [0, 2pi)) perpendicular to some vertex-pair line; the
/// sublevel vertex order is constant on each open arc between them.
/// Throws GenericityError when two angles collide within 1e-9.
std::vector<double> critical_directions(const EmbeddedGraph& g);

struct ExtremalVertex {
  int vertex = -1;
  double omega1 = 0.0;  // birth interval of directions, [omega1, omega2]
  double omega2 = 0.0;  // unwrapped: omega2 > omega1, may exceed 2pi
  std::vector<int> external_edges;  // edges bounding the largest incident gap
};

/// Vertices outside the convex hull of their neighbors, i.e. those that are
/// the lowest point of their star for some direction interval.
std::vector<ExtremalVertex> extremal_vertices(const EmbeddedGraph& g);

/// One maximal arc of a vine: on [a0, a1) the tracked diagram point is
/// (<v_b, w>, <v_d, w>), an ellipse arc.
struct VineArc {
  double a0 = 0.0;
  double a1 = 0.0;  // unwrapped; consecutive arcs satisfy a1 == next.a0
  int birth_vertex = -1;
  int death_vertex = -1;
};

struct Vine {
  std::vector<VineArc> arcs;
  bool closed = false;  // alive for the whole revolution

  double start() const { return arcs.front().a0; }
  double end() const { return arcs.back().a1; }
  /// Diagram position at angle theta (caller guarantees theta is inside the
  /// alive interval, up to wrapping).
  std::array<double, 2> at(const EmbeddedGraph& g, double theta) const;
  const VineArc& arc_at(double theta) const;
};

/// Piecewise sinusoid over the circle (the essential-class birth curve; can
/// be negative, unlike a FlightPlan).
struct PiecewiseSinusoid {
  struct Piece {
    double a0 = 0.0, a1 = 0.0;
    Sinusoid s;
  };
  std::vector<Piece> pieces;

  double eval(double theta) const;
};

struct PHTVineyard {
  EmbeddedGraph graph;
  PiecewiseSinusoid essential_birth;
  std::vector<Vine> vines;
};

/// Trace all diagram points over the full circle of directions: per-arc
/// diagrams at critical-arc midpoints, stitched across critical angles by
/// position continuity (tolerance 1e-9). Throws MonodromyError when limits
/// mismatch or stitching is ambiguous.
PHTVineyard compute_vines(const EmbeddedGraph& g);

/// Kinetic form of the diagram-distance reduction graph between the finite
/// vines of two vineyards, restricted to directions [theta0, theta1) on
/// which `alive_a` / `alive_b` (indices into the vineyards' vines) are all
/// alive. Left nodes: alive_a then proj(alive_b); right nodes: alive_b then
/// proj(alive_a).
KineticGraph pht_bipartite_graph(const PHTVineyard& a,
                                 const std::vector<int>& alive_a,
                                 const PHTVineyard& b,
                                 const std::vector<int>& alive_b,
                                 double theta0, double theta1);

struct IntegratedDistance {
  double value = 0.0;            // integral of d over [0, 2pi)
  FlightPlan distance;           // exact d(theta) over the circle
  BottleneckTrajectory finite;   // finite-part trajectory (per super-arc)
  std::uint64_t events = 0;      // total hourglass events processed
};

/// Exact integrated bottleneck distance between the 0-dim persistent
/// homology transforms of two star-shaped embedded graphs.
IntegratedDistance integrated_distance(const EmbeddedGraph& k1,
                                       const EmbeddedGraph& k2,
                                       Flavor flavor = Flavor::Heap,
                                       std::uint64_t seed = 0);

/// Riemann-sum baseline: static bottleneck distance at `samples` uniformly
/// spaced directions (offset half a step to dodge critical directions).
double sampled_oracle(const EmbeddedGraph& k1, const EmbeddedGraph& k2,
                      int samples);

/// Static bottleneck distance between the two diagrams at one direction,
/// including the essential-class term.
double direction_distance(const EmbeddedGraph& k1, const EmbeddedGraph& k2,
                          double theta);

}  // namespace hourglass
