#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hourglass/curves.hpp"
#include "hourglass/kinetic_pq.hpp"
#include "hourglass/matching.hpp"

namespace hourglass {

/// A bipartite graph whose edge weights vary with time.
struct KineticEdge {
  int u = 0;
  int v = 0;
  FlightPlan plan;
};

struct KineticGraph {
  int n_left = 0;
  int n_right = 0;
  std::vector<KineticEdge> edges;

  /// Static snapshot with weights evaluated at time t.
  BipartiteGraph frozen(double t) const;
  void validate() const;
};

enum class Label { Lower, Matched, Upper };

enum class EventKind {
  Internal,        // swap away from the roots; structure-only
  LowerToUpper,    // lower non-matching edge rises above the root
  MatchAugment,    // matching edge rises above the root; augmenting path found
  MatchRootSwap,   // matching edge rises above the root; it becomes the root
  UpperRootChange, // upper root falls below the root; augmenting path, new root
  UpperToLower,    // upper root falls below the root; no path, edge descends
};

std::string event_kind_name(EventKind k);

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::Internal;
  int edge_a = -1;       // first edge involved (the moving edge)
  int edge_b = -1;       // other edge of the certificate, -1 if none
  int root_after = -1;   // bottleneck edge after the event
  double value_after = 0.0;
};

/// The minimum bottleneck cost over a time window, as a piecewise curve
/// together with which edge realises it on each segment.
struct TrajectorySegment {
  double t0 = 0.0;
  double t1 = 0.0;
  int root_edge = -1;
  std::vector<CostPiece> pieces;  // the root edge's plan restricted to [t0,t1)
};

struct BottleneckTrajectory {
  std::vector<TrajectorySegment> segments;

  double value(double t) const;
  double integral() const;
};

struct HourglassStats {
  std::uint64_t events_processed = 0;
  std::uint64_t internal_events = 0;
  std::uint64_t external_events = 0;
  std::uint64_t lower_events = 0;
  std::uint64_t match_events = 0;
  std::uint64_t upper_events = 0;
  std::uint64_t augmenting_searches = 0;
};

/// Kinetic structure maintaining the minimum bottleneck cost and a min-cost
/// perfect matching of a bipartite graph under continuously changing weights.
///
/// Edges at or below the current bottleneck edge live in a kinetic max-heap
/// (matched and non-matched alike, the bottleneck edge at its root); edges
/// above it live in a kinetic min-heap. A dedicated certificate compares the
/// two roots.
class Hourglass {
 public:
  struct Options {
    Flavor flavor = Flavor::Heap;
    std::uint64_t seed = 0;
  };

  Hourglass(KineticGraph g, double t0, Options opts);
  Hourglass(KineticGraph g, double t0) : Hourglass(std::move(g), t0, Options{}) {}

  /// Processes events up to (strictly before) `until` and returns the
  /// completed trajectory on [t0, until).
  BottleneckTrajectory run(double until);

  /// Processes the single earliest event strictly before `until`, if any.
  std::optional<EventRecord> step(double until);

  double now() const { return now_; }
  int root_edge() const { return root_edge_; }
  double bottleneck(double t) const;
  const Matching& matching() const { return matching_; }
  Label label(int edge) const { return labels_.at(edge); }
  const KineticGraph& graph() const { return graph_; }
  const std::vector<EventRecord>& event_log() const { return log_; }
  const HourglassStats& stats() const { return stats_; }

  /// Structural invariants at an event-free time t; throws on violation.
  void check_invariants(double t) const;

 private:
  struct PendingEvent {
    double time;
    int source;  // 0 = lower heap, 1 = upper heap, 2 = shared-root certificate
    int edge;
    std::optional<KineticPQ::Event> pq_event;
  };

  std::optional<PendingEvent> peek(double until);
  void recompute_special(double after);
  void switch_root(int new_root, double t);
  void settle_after_event(double t, double teval);
  double post_offset(int edge_a, int edge_b, double t);
  double pair_offset(int edge_a, int edge_b, double t) const;
  BipartiteGraph residual_graph(const std::vector<int>& edge_ids) const;
  void relabel_from_state();
  void handle_lower_event(const KineticPQ::Event& ev);
  void handle_upper_event(double t);
  void log_event(double t, EventKind kind, int a, int b);

  KineticGraph graph_;
  double t0_;
  double now_;
  KineticPQ lower_;
  KineticPQ upper_;
  Matching matching_;
  std::map<int, Label> labels_;
  std::map<std::pair<int, int>, int> edge_index_;
  int root_edge_ = -1;
  std::optional<double> special_fail_;
  std::vector<TrajectorySegment> closed_segments_;
  double seg_start_;
  std::vector<EventRecord> log_;
  HourglassStats stats_;
  bool logging_ = false;  // set when HOURGLASS_LOG is present
};

}  // namespace hourglass
