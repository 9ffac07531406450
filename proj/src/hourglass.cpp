#include "hourglass/hourglass.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <set>
#include <stdexcept>

namespace hourglass {

namespace {
constexpr double kPostEps = 1e-6;
constexpr double kTieEps = 1e-12;

// Total order on edges at time t: (cost, edge id) lexicographic. This is the
// single order both priority structures and the label partition agree on.
bool key_less(const KineticGraph& g, int e, int f, double t) {
  double ve = g.edges[e].plan.eval(t), vf = g.edges[f].plan.eval(t);
  if (ve != vf) return ve < vf;
  return e < f;
}

double eval_pieces(const std::vector<CostPiece>& pieces, double t) {
  for (const auto& p : pieces)
    if (t >= p.t0 && t < p.t1) return p.value(t);
  if (!pieces.empty() && t >= pieces.back().t1) return pieces.back().value(t);
  if (!pieces.empty() && t < pieces.front().t0) return pieces.front().value(t);
  throw std::out_of_range("time outside trajectory");
}
}  // namespace

BipartiteGraph KineticGraph::frozen(double t) const {
  BipartiteGraph g;
  g.n_left = n_left;
  g.n_right = n_right;
  g.edges.reserve(edges.size());
  for (const auto& e : edges) g.edges.push_back({e.u, e.v, e.plan.eval(t)});
  return g;
}

void KineticGraph::validate() const {
  BipartiteGraph shape;
  shape.n_left = n_left;
  shape.n_right = n_right;
  for (const auto& e : edges) shape.edges.push_back({e.u, e.v, 0.0});
  shape.validate();
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges)
    if (!seen.insert({e.u, e.v}).second)
      throw std::invalid_argument("duplicate edge");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const Domain &a = edges[0].plan.domain(), &b = edges[i].plan.domain();
    if (a.is_circle() != b.is_circle() || a.start != b.start || a.end != b.end)
      throw std::invalid_argument("edge plans disagree on the time domain");
  }
}

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Internal: return "internal";
    case EventKind::LowerToUpper: return "L";
    case EventKind::MatchAugment: return "M1";
    case EventKind::MatchRootSwap: return "M2";
    case EventKind::UpperRootChange: return "U1";
    case EventKind::UpperToLower: return "U2";
  }
  return "?";
}

double BottleneckTrajectory::value(double t) const {
  for (const auto& s : segments)
    if (t >= s.t0 && t < s.t1) return eval_pieces(s.pieces, t);
  if (!segments.empty() && t >= segments.back().t1)
    return eval_pieces(segments.back().pieces, t);
  throw std::out_of_range("time outside trajectory");
}

double BottleneckTrajectory::integral() const {
  double total = 0.0;
  for (const auto& s : segments) total += integrate_pieces(s.pieces);
  return total;
}

Hourglass::Hourglass(KineticGraph g, double t0, Options opts)
    : graph_(std::move(g)),
      t0_(t0),
      now_(t0),
      lower_(Order::Max, opts.flavor, t0, opts.seed),
      upper_(Order::Min, opts.flavor, t0, opts.seed ^ 0x9e3779b97f4a7c15ull),
      seg_start_(t0) {
  graph_.validate();
  logging_ = std::getenv("HOURGLASS_LOG") != nullptr;
  for (int i = 0; i < (int)graph_.edges.size(); ++i)
    edge_index_[{graph_.edges[i].u, graph_.edges[i].v}] = i;

  if (graph_.edges.empty()) {
    if (graph_.n_left != 0 || graph_.n_right != 0)
      throw NoPerfectMatching({});
    matching_ = Matching(0, 0);
    return;  // empty instance: trajectory is identically zero
  }

  // Initialize from the graph frozen just past t0: weights tied exactly at
  // t0 diverge immediately, and the matching must be optimal for the open
  // interval that follows, not for the tie instant itself.
  double delta0 = kPostEps;
  for (std::size_t i = 0; i < graph_.edges.size(); ++i)
    for (std::size_t j = i + 1; j < graph_.edges.size(); ++j)
      if (auto tc = next_crossing(graph_.edges[i].plan, graph_.edges[j].plan,
                                  t0))
        delta0 = std::min(delta0, 0.5 * (*tc - t0));
  const Domain& dom = graph_.edges[0].plan.domain();
  if (!dom.is_circle() && t0 + delta0 > dom.end)
    delta0 = 0.5 * (dom.end - t0);
  double probe = t0 + delta0;

  BipartiteGraph frozen = graph_.frozen(probe);
  BottleneckResult init = static_bottleneck(frozen);
  matching_ = init.matching;
  root_edge_ = init.bottleneck_edge;

  std::vector<std::pair<int, FlightPlan>> lo, up;
  for (int i = 0; i < (int)graph_.edges.size(); ++i) {
    const auto& e = graph_.edges[i];
    bool in_m = matching_.right_of[e.u] == e.v;
    if (in_m || key_less(graph_, i, root_edge_, probe)) {
      lo.emplace_back(i, e.plan);
      labels_[i] = in_m ? Label::Matched : Label::Lower;
    } else {
      up.emplace_back(i, e.plan);
      labels_[i] = Label::Upper;
    }
  }
  lower_.build(lo, probe);
  upper_.build(up, probe);
  if (lower_.root_elem() != root_edge_)
    throw std::logic_error("bottleneck edge not at the lower root");
  recompute_special(t0);
}

double Hourglass::pair_offset(int edge_a, int edge_b, double t) const {
  double eps = kPostEps;
  auto tn = next_crossing(graph_.edges[edge_a].plan, graph_.edges[edge_b].plan, t);
  if (tn) eps = std::min(eps, 0.5 * (*tn - t));
  const Domain& d = graph_.edges[edge_a].plan.domain();
  if (!d.is_circle() && t + eps > d.end) eps = 0.5 * (d.end - t);
  return eps;
}

void Hourglass::recompute_special(double after) {
  special_fail_.reset();
  if (upper_.empty() || root_edge_ < 0) return;
  int e = upper_.root_elem();
  auto t = next_crossing(graph_.edges[e].plan, graph_.edges[root_edge_].plan,
                         after);
  // The upper minimum may already sit below the root right after `after`
  // (it can arrive there through a simultaneous crossing with a plan that
  // coincides with the root's); fire immediately rather than waiting for a
  // crossing that will never come.
  double eps = pair_offset(e, root_edge_, after);
  if (eps > 0.0 && key_less(graph_, e, root_edge_, after + eps)) {
    special_fail_ = after;
    return;
  }
  if (t) special_fail_ = *t;
}

double Hourglass::post_offset(int edge_a, int edge_b, double t) {
  double eps = pair_offset(edge_a, edge_b, t);
  // Queued events essentially at t are same-time cascade repairs, not future
  // crossings; respecting them would shrink the probe into rounding noise.
  if (auto le = lower_.next_event(); le && le->time > t + kTieEps)
    eps = std::min(eps, 0.5 * (le->time - t));
  if (auto ue = upper_.next_event(); ue && ue->time > t + kTieEps)
    eps = std::min(eps, 0.5 * (ue->time - t));
  return eps;
}

void Hourglass::switch_root(int new_root, double t) {
  if (t > seg_start_) {
    TrajectorySegment seg;
    seg.t0 = seg_start_;
    seg.t1 = t;
    seg.root_edge = root_edge_;
    seg.pieces = slice(graph_.edges[root_edge_].plan, seg_start_, t);
    closed_segments_.push_back(std::move(seg));
  }
  seg_start_ = t;
  root_edge_ = new_root;
}

BipartiteGraph Hourglass::residual_graph(const std::vector<int>& edge_ids) const {
  BipartiteGraph g;
  g.n_left = graph_.n_left;
  g.n_right = graph_.n_right;
  for (int id : edge_ids)
    g.edges.push_back({graph_.edges[id].u, graph_.edges[id].v, 0.0});
  return g;
}

void Hourglass::settle_after_event(double t, double teval) {
  // Edges with coincident plans can tie with the root exactly at an event
  // time, so the surgery may land with a different edge on top of the lower
  // heap. Promote the matched maximum (the true bottleneck edge) and push
  // tied non-matching edges upstairs; any remaining disorder re-fires as
  // fresh events at the same time.
  bool touched = false;
  while (!lower_.empty()) {
    int x = lower_.root_elem();
    const auto& xe = graph_.edges[x];
    bool matched = matching_.right_of[xe.u] == xe.v;
    if (!matched) {
      FlightPlan plan = lower_.plan_of(x);
      lower_.erase(x, t, teval);
      upper_.insert(x, std::move(plan), t, teval);
      labels_[x] = Label::Upper;
      touched = true;
      continue;
    }
    if (x == root_edge_) break;
    // A tied matched edge surfaced above the installed root. If the matching
    // can be rerouted around it within the lower set it stops binding and
    // moves upstairs; otherwise it is the true bottleneck edge.
    stats_.match_events++;
    stats_.augmenting_searches++;
    std::vector<int> ids = lower_.elements();
    ids.erase(std::remove(ids.begin(), ids.end(), x), ids.end());
    Matching reduced = matching_;
    reduced.remove(xe.u);
    auto path = find_augmenting_path(residual_graph(ids), reduced, xe.u, xe.v);
    if (path) {
      matching_ = aug(reduced, *path);
      FlightPlan plan = lower_.plan_of(x);
      lower_.erase(x, t, teval);
      upper_.insert(x, std::move(plan), t, teval);
      labels_[x] = Label::Upper;
      touched = true;
      log_event(t, EventKind::MatchAugment, x, root_edge_);
      continue;
    }
    switch_root(x, t);
    touched = true;
    break;
  }
  if (touched) relabel_from_state();
  recompute_special(t);
}

void Hourglass::relabel_from_state() {
  for (int id : lower_.elements()) {
    const auto& e = graph_.edges[id];
    labels_[id] =
        matching_.right_of[e.u] == e.v ? Label::Matched : Label::Lower;
  }
  for (int id : upper_.elements()) labels_[id] = Label::Upper;
}

void Hourglass::log_event(double t, EventKind kind, int a, int b) {
  EventRecord rec;
  rec.time = t;
  rec.kind = kind;
  rec.edge_a = a;
  rec.edge_b = b;
  rec.root_after = root_edge_;
  rec.value_after =
      root_edge_ >= 0 ? graph_.edges[root_edge_].plan.eval(t) : 0.0;
  if (logging_)
    std::cerr << "[hourglass] t=" << t << " " << event_kind_name(kind)
              << " edge=" << a << " other=" << b << " root=" << rec.root_after
              << " value=" << rec.value_after << "\n";
  log_.push_back(rec);
}

void Hourglass::handle_lower_event(const KineticPQ::Event& ev) {
  double t = ev.time;
  int e = ev.child_elem;
  now_ = t;
  if (labels_.at(e) == Label::Lower) {
    // The rising edge is not in the matching: it simply moves upstairs.
    double teval = t + post_offset(e, root_edge_, t);
    FlightPlan plan = lower_.plan_of(e);
    lower_.erase(e, t, teval);
    upper_.insert(e, std::move(plan), t, teval);
    labels_[e] = Label::Upper;
    stats_.lower_events++;
    log_event(t, EventKind::LowerToUpper, e, ev.parent_elem);
    // The erase may have sifted a tied matched edge over the root.
    settle_after_event(t, teval);
    return;
  }

  // A matching edge rises above the root: try to reroute the matching
  // around it inside the lower edge set.
  stats_.match_events++;
  stats_.augmenting_searches++;
  const auto& ke = graph_.edges[e];
  std::vector<int> ids = lower_.elements();
  ids.erase(std::remove(ids.begin(), ids.end(), e), ids.end());
  Matching reduced = matching_;
  reduced.remove(ke.u);
  auto path = find_augmenting_path(residual_graph(ids), reduced, ke.u, ke.v);
  double teval = t + post_offset(e, root_edge_, t);
  if (path) {
    matching_ = aug(reduced, *path);
    const auto& r = graph_.edges[root_edge_];
    if (matching_.right_of[r.u] != r.v)
      throw std::logic_error("bottleneck edge left the matching");
    FlightPlan plan = lower_.plan_of(e);
    lower_.erase(e, t, teval);
    upper_.insert(e, std::move(plan), t, teval);
    relabel_from_state();
    recompute_special(t);
    log_event(t, EventKind::MatchAugment, e, root_edge_);
  } else {
    // No reroute: the rising edge is now the matching's maximum.
    int old_root = root_edge_;
    lower_.apply_swap(ev);
    switch_root(e, t);
    recompute_special(t);
    log_event(t, EventKind::MatchRootSwap, e, old_root);
  }
  settle_after_event(t, teval);
}

void Hourglass::handle_upper_event(double t) {
  now_ = t;
  stats_.upper_events++;
  stats_.augmenting_searches++;
  int e = upper_.root_elem();
  int r = root_edge_;
  const auto& re = graph_.edges[r];
  std::vector<int> ids = lower_.elements();
  ids.erase(std::remove(ids.begin(), ids.end(), r), ids.end());
  ids.push_back(e);
  Matching reduced = matching_;
  reduced.remove(re.u);
  auto path = find_augmenting_path(residual_graph(ids), reduced, re.u, re.v);
  double teval = t + post_offset(e, r, t);
  if (path) {
    matching_ = aug(reduced, *path);
    const auto& ke = graph_.edges[e];
    if (matching_.right_of[ke.u] == ke.v) {
      FlightPlan plan_e = upper_.plan_of(e);
      FlightPlan plan_r = lower_.plan_of(r);
      upper_.erase(e, t, teval);
      lower_.erase(r, t, teval);
      lower_.insert(e, std::move(plan_e), t, teval);
      upper_.insert(r, std::move(plan_r), t, teval);
      switch_root(e, t);
    } else {
      // A tie let the reroute stay inside the lower set: the old root is
      // simply unmatched now and moves upstairs; e keeps its place.
      FlightPlan plan_r = lower_.plan_of(r);
      lower_.erase(r, t, teval);
      upper_.insert(r, std::move(plan_r), t, teval);
      switch_root(lower_.root_elem(), t);
    }
    relabel_from_state();
    recompute_special(t);
    log_event(t, EventKind::UpperRootChange, e, r);
  } else {
    FlightPlan plan_e = upper_.plan_of(e);
    upper_.erase(e, t, teval);
    lower_.insert(e, std::move(plan_e), t, teval);
    labels_[e] = Label::Lower;
    recompute_special(t);
    log_event(t, EventKind::UpperToLower, e, r);
  }
  settle_after_event(t, teval);
}

std::optional<Hourglass::PendingEvent> Hourglass::peek(double until) {
  std::optional<PendingEvent> best;
  auto consider = [&](PendingEvent pe) {
    if (pe.time >= until) return;
    if (!best || pe.time < best->time ||
        (pe.time == best->time &&
         std::make_pair(pe.edge, pe.source) <
             std::make_pair(best->edge, best->source)))
      best = std::move(pe);
  };
  if (auto le = lower_.next_event())
    consider({le->time, 0, le->child_elem, le});
  if (auto ue = upper_.next_event())
    consider({ue->time, 1, ue->child_elem, ue});
  if (special_fail_)
    consider({*special_fail_, 2, upper_.root_elem(), std::nullopt});
  return best;
}

std::optional<EventRecord> Hourglass::step(double until) {
  if (root_edge_ < 0) return std::nullopt;  // empty instance
  while (auto pe = peek(until)) {
    double t = pe->time;
    if (pe->source == 2) {
      // Shared-root certificate: the upper minimum meets the root.
      int e = upper_.root_elem();
      double teval = t + pair_offset(e, root_edge_, t);
      bool real = key_less(graph_, e, root_edge_, teval);
      if (!real) {
        recompute_special(t);
        continue;
      }
      stats_.events_processed++;
      stats_.external_events++;
      handle_upper_event(t);
      return log_.back();
    }
    KineticPQ& pq = pe->source == 0 ? lower_ : upper_;
    const KineticPQ::Event& ev = *pe->pq_event;
    if (!pq.event_valid(ev)) {
      pq.discard_event(ev);
      continue;
    }
    bool external = pe->source == 0 && ev.parent_elem == root_edge_;
    if (external) {
      stats_.events_processed++;
      stats_.external_events++;
      handle_lower_event(ev);
      return log_.back();
    }
    int old_upper_root = pe->source == 1 ? upper_.root_elem() : -1;
    pq.apply_swap(ev);
    now_ = t;
    if (pe->source == 1 && upper_.root_elem() != old_upper_root)
      recompute_special(t);
    stats_.events_processed++;
    stats_.internal_events++;
    log_event(t, EventKind::Internal, ev.child_elem, ev.parent_elem);
    return log_.back();
  }
  return std::nullopt;
}

BottleneckTrajectory Hourglass::run(double until) {
  const Domain* dom =
      graph_.edges.empty() ? nullptr : &graph_.edges[0].plan.domain();
  if (dom && until > dom->end + 1e-12)
    throw std::invalid_argument("run horizon exceeds the plan domain");
  while (step(until)) {
  }
  now_ = std::max(now_, until);
  BottleneckTrajectory traj;
  traj.segments = closed_segments_;
  if (until > seg_start_) {
    TrajectorySegment seg;
    seg.t0 = seg_start_;
    seg.t1 = until;
    seg.root_edge = root_edge_;
    if (root_edge_ >= 0)
      seg.pieces = slice(graph_.edges[root_edge_].plan, seg_start_, until);
    else
      seg.pieces = {CostPiece{seg_start_, until, Zero{}}};
    traj.segments.push_back(std::move(seg));
  }
  return traj;
}

double Hourglass::bottleneck(double t) const {
  if (root_edge_ < 0) return 0.0;
  return graph_.edges[root_edge_].plan.eval(t);
}

void Hourglass::check_invariants(double t) const {
  if (root_edge_ < 0) {
    if (!graph_.edges.empty())
      throw std::logic_error("missing bottleneck edge");
    return;
  }
  int n = graph_.n_left;
  if (graph_.n_right != n || matching_.size() != n)
    throw std::logic_error("matching is not perfect");
  const auto& r = graph_.edges[root_edge_];
  if (matching_.right_of[r.u] != r.v)
    throw std::logic_error("bottleneck edge not in the matching");
  if ((int)labels_.size() != (int)graph_.edges.size())
    throw std::logic_error("label partition incomplete");
  if (lower_.root_elem() != root_edge_)
    throw std::logic_error("bottleneck edge not at the lower root");
  for (int id : lower_.elements()) {
    const auto& e = graph_.edges[id];
    bool in_m = matching_.right_of[e.u] == e.v;
    Label want = in_m ? Label::Matched : Label::Lower;
    if (labels_.at(id) != want) throw std::logic_error("lower label mismatch");
    if (id != root_edge_ && !key_less(graph_, id, root_edge_, t))
      throw std::logic_error("lower element above the bottleneck cost");
  }
  for (int id : upper_.elements()) {
    if (labels_.at(id) != Label::Upper)
      throw std::logic_error("upper label mismatch");
    if (key_less(graph_, id, root_edge_, t))
      throw std::logic_error("upper element below the bottleneck cost");
    const auto& e = graph_.edges[id];
    if (matching_.right_of[e.u] == e.v)
      throw std::logic_error("matching edge in the upper structure");
  }
  // Root cost is the matching maximum.
  for (int u = 0; u < n; ++u) {
    int id = edge_index_.at({u, matching_.right_of[u]});
    if (id != root_edge_ && !key_less(graph_, id, root_edge_, t))
      throw std::logic_error("matching edge above the bottleneck cost");
  }
  if (!lower_.heap_property_holds(t) || !upper_.heap_property_holds(t))
    throw std::logic_error("heap certificate violated");
}

}  // namespace hourglass
