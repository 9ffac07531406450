#ifndef HOURGLASS_KINETIC_PQ_HPP
#define HOURGLASS_KINETIC_PQ_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <unordered_map>
#include <vector>

#include "hourglass/curves.hpp"

namespace hourglass {

enum class Order { Max, Min };
enum class Flavor { Heap, Hanger };

/// Kinetic priority structure over elements with FlightPlan priorities.
/// One certificate per parent-child tree edge; failure times live in an
/// event queue keyed by (time, certificate id). Simultaneous failures are
/// processed in certificate-id order; rescheduled certificates are discarded
/// lazily via a generation counter.
///
/// Priorities are totally ordered by the (value, element id) tiebreak, so
/// equal values never make the structure ambiguous.
class KineticPQ {
 public:
  KineticPQ(Order order, Flavor flavor, double t0, std::uint64_t seed = 0);

  /// Bulk construction at time t0. For the hanger flavor, elements are hung
  /// in decreasing priority order along seeded random root-leaf descents.
  void build(const std::vector<std::pair<int, FlightPlan>>& elements,
             double teval = std::numeric_limits<double>::quiet_NaN());

  /// `teval` is the time used for priority comparisons during the structural
  /// update (defaults to t). Callers operating at an exact crossing time pass
  /// t + delta so the post-event order decides placement.
  void insert(int elem, FlightPlan plan, double t, double teval = std::numeric_limits<double>::quiet_NaN());
  void erase(int elem, double t, double teval = std::numeric_limits<double>::quiet_NaN());

  struct Event {
    double time = 0.0;
    int parent_node = -1, child_node = -1;
    int parent_elem = -1, child_elem = -1;
  };

  /// Earliest queued certificate failure strictly after `now`, skipping
  /// generation-stale entries. Does not pop.
  std::optional<Event> next_event();

  /// True when the swap is real: the child beats the parent just after the
  /// event time (at t + delta, delta = half the gap to the pair's next
  /// crossing).
  bool event_valid(const Event& ev) const;

  /// Pop the head entry without acting on it (stale events).
  void discard_event(const Event& ev);

  /// Pop + swap the two elements + recompute the <= 5 affected certificates.
  /// Advances `now` to the event time.
  void apply_swap(const Event& ev);

  /// Convenience: validity check, then swap or silent drop. Returns the
  /// element pairs whose tree relation changed (empty for a stale event).
  std::vector<std::pair<int, int>> handle_swap(const Event& ev);

  /// Process all valid events with time <= t; afterwards now == t.
  struct SwapRecord {
    double time;
    int elem_a, elem_b;
    int root_after;
  };
  std::vector<SwapRecord> advance(double t);

  bool empty() const { return node_of_elem_.empty(); }
  std::size_t size() const { return node_of_elem_.size(); }
  bool contains(int elem) const { return node_of_elem_.count(elem) > 0; }
  int root_elem() const;
  double now() const { return now_; }
  void set_now(double t) { now_ = t; }
  const FlightPlan& plan_of(int elem) const;
  std::vector<int> elements() const;
  double value_of(int elem, double t) const { return plan_of(elem).eval(t); }

  /// Depth of the node holding `elem` (root = 0); balance diagnostics.
  int depth_of(int elem) const;
  int max_depth() const;

  /// Invariant check: heap order between every parent-child pair at time t.
  bool heap_property_holds(double t) const;
  /// Number of certificates the element currently participates in.
  int certificate_count(int elem) const;

 private:
  struct Node {
    int elem = -1;
    int parent = -1;
    int kid[2] = {-1, -1};
    std::uint64_t gen = 0;
    double fail = 0.0;
  };

  bool beats(int elem_a, int elem_b, double t) const;
  int new_node();
  void free_node(int n);
  void detach_leaf(int n);
  void recompute_cert(int n);
  void recompute_cert_after(int n, double after);
  void recompute_around(const std::vector<int>& nodes);
  void swap_elems(int a, int b);
  void sift_up(int n, double t, std::vector<int>& dirty);
  void sift_down(int n, double t, std::vector<int>& dirty);
  void heap_insert(int elem, double t);
  void heap_erase(int node, double t);
  void hanger_hang(int elem, double t, bool compare);
  void hanger_erase(int node, double t);
  double eval_offset(const Event& ev) const;

  Order order_;
  Flavor flavor_;
  double now_;
  std::mt19937_64 rng_;

  std::vector<Node> nodes_;
  std::vector<int> free_nodes_;
  int root_ = -1;
  std::vector<int> slots_;  // heap flavor: node ids in level order
  std::unordered_map<int, int> node_of_elem_;
  std::unordered_map<int, FlightPlan> plans_;

  struct Entry {
    double time;
    int node;
    std::uint64_t gen;
    bool operator>(const Entry& o) const {
      if (time != o.time) return time > o.time;
      return node > o.node;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
};

}  // namespace hourglass

#endif
