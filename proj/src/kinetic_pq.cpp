#include "hourglass/kinetic_pq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hourglass {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDefaultEps = 1e-6;
}  // namespace

KineticPQ::KineticPQ(Order order, Flavor flavor, double t0, std::uint64_t seed)
    : order_(order), flavor_(flavor), now_(t0), rng_(seed) {}

bool KineticPQ::beats(int a, int b, double t) const {
  double va = plans_.at(a).eval(t), vb = plans_.at(b).eval(t);
  if (order_ == Order::Max) {
    if (va != vb) return va > vb;
    return a > b;
  }
  if (va != vb) return va < vb;
  return a < b;
}

int KineticPQ::new_node() {
  if (!free_nodes_.empty()) {
    int n = free_nodes_.back();
    free_nodes_.pop_back();
    nodes_[n] = Node{};
    nodes_[n].gen = 1;  // invalidate any queued entries from a past life
    return n;
  }
  nodes_.push_back(Node{});
  return (int)nodes_.size() - 1;
}

void KineticPQ::free_node(int n) {
  nodes_[n].elem = -1;
  nodes_[n].gen++;
  free_nodes_.push_back(n);
}

void KineticPQ::detach_leaf(int n) {
  int p = nodes_[n].parent;
  if (p >= 0) {
    if (nodes_[p].kid[0] == n) nodes_[p].kid[0] = -1;
    if (nodes_[p].kid[1] == n) nodes_[p].kid[1] = -1;
  } else {
    root_ = -1;
  }
  free_node(n);
}

void KineticPQ::recompute_cert(int n) { recompute_cert_after(n, now_); }

void KineticPQ::recompute_cert_after(int n, double after) {
  Node& nd = nodes_[n];
  nd.gen++;
  if (nd.elem < 0 || nd.parent < 0) return;
  int p = nodes_[nd.parent].elem;
  auto t = next_crossing(plans_.at(p), plans_.at(nd.elem), after);
  // Simultaneous crossings (e.g. coincident plans crossed by a third) can
  // leave the pair already out of order at `after` with no crossing ahead;
  // probe just past `after` and fire immediately in that case.
  double eps = kDefaultEps;
  if (t) eps = std::min(eps, 0.5 * (*t - after));
  const Domain& d = plans_.at(p).domain();
  if (!d.is_circle() && after + eps > d.end) eps = 0.5 * (d.end - after);
  if (eps > 0.0 && beats(nd.elem, p, after + eps)) {
    nd.fail = after;
    queue_.push(Entry{after, n, nd.gen});
    return;
  }
  if (t) {
    nd.fail = *t;
    queue_.push(Entry{*t, n, nd.gen});
  } else {
    nd.fail = kInf;
  }
}

void KineticPQ::recompute_around(const std::vector<int>& dirty) {
  // Recompute the node's own certificate and its children's.
  std::vector<int> todo;
  for (int n : dirty) {
    if (n < 0 || nodes_[n].elem < 0) continue;
    todo.push_back(n);
    for (int k : nodes_[n].kid)
      if (k >= 0) todo.push_back(k);
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
  for (int n : todo) recompute_cert(n);
}

void KineticPQ::swap_elems(int a, int b) {
  std::swap(nodes_[a].elem, nodes_[b].elem);
  node_of_elem_[nodes_[a].elem] = a;
  node_of_elem_[nodes_[b].elem] = b;
}

void KineticPQ::build(const std::vector<std::pair<int, FlightPlan>>& elements,
                      double teval) {
  if (std::isnan(teval)) teval = now_;
  std::vector<std::pair<int, FlightPlan>> sorted = elements;
  for (const auto& [id, plan] : sorted) {
    if (plans_.count(id)) throw std::invalid_argument("duplicate element id");
    plans_.emplace(id, plan);
  }
  std::sort(sorted.begin(), sorted.end(), [&](const auto& x, const auto& y) {
    return beats(x.first, y.first, teval);
  });
  if (flavor_ == Flavor::Heap) {
    for (const auto& [id, plan] : sorted) {
      int n = new_node();
      int slot = (int)slots_.size();
      slots_.push_back(n);
      nodes_[n].elem = id;
      node_of_elem_[id] = n;
      if (slot == 0) {
        root_ = n;
      } else {
        int p = slots_[(slot - 1) / 2];
        nodes_[n].parent = p;
        nodes_[p].kid[(slot - 1) % 2] = n;
      }
    }
  } else {
    for (const auto& [id, plan] : sorted) hanger_hang(id, now_, false);
  }
  for (int n = 0; n < (int)nodes_.size(); ++n)
    if (nodes_[n].elem >= 0) recompute_cert(n);
}

void KineticPQ::hanger_hang(int elem, double t, bool compare) {
  if (root_ < 0) {
    int n = new_node();
    nodes_[n].elem = elem;
    node_of_elem_[elem] = n;
    root_ = n;
    return;
  }
  int v = root_;
  int carried = elem;
  std::vector<int> dirty;
  while (true) {
    if (compare && beats(carried, nodes_[v].elem, t)) {
      std::swap(carried, nodes_[v].elem);
      node_of_elem_[nodes_[v].elem] = v;
      dirty.push_back(v);
    }
    int r = (int)(rng_() & 1u);
    if (nodes_[v].kid[r] < 0) {
      int n = new_node();
      nodes_[n].elem = carried;
      nodes_[n].parent = v;
      nodes_[v].kid[r] = n;
      node_of_elem_[carried] = n;
      dirty.push_back(n);
      break;
    }
    v = nodes_[v].kid[r];
  }
  if (compare) recompute_around(dirty);
}

void KineticPQ::sift_up(int n, double t, std::vector<int>& dirty) {
  while (nodes_[n].parent >= 0 &&
         beats(nodes_[n].elem, nodes_[nodes_[n].parent].elem, t)) {
    int p = nodes_[n].parent;
    swap_elems(n, p);
    dirty.push_back(n);
    dirty.push_back(p);
    n = p;
  }
  dirty.push_back(n);
}

void KineticPQ::sift_down(int n, double t, std::vector<int>& dirty) {
  while (true) {
    int best = n;
    for (int k : nodes_[n].kid)
      if (k >= 0 && beats(nodes_[k].elem, nodes_[best].elem, t)) best = k;
    if (best == n) break;
    swap_elems(n, best);
    dirty.push_back(n);
    dirty.push_back(best);
    n = best;
  }
  dirty.push_back(n);
}

void KineticPQ::heap_insert(int elem, double t) {
  int n = new_node();
  int slot = (int)slots_.size();
  slots_.push_back(n);
  nodes_[n].elem = elem;
  node_of_elem_[elem] = n;
  if (slot == 0) {
    root_ = n;
  } else {
    int p = slots_[(slot - 1) / 2];
    nodes_[n].parent = p;
    nodes_[p].kid[(slot - 1) % 2] = n;
  }
  std::vector<int> dirty;
  sift_up(n, t, dirty);
  recompute_around(dirty);
}

void KineticPQ::heap_erase(int node, double t) {
  int last = slots_.back();
  std::vector<int> dirty;
  if (node == last) {
    int p = nodes_[node].parent;
    detach_leaf(node);
    slots_.pop_back();
    if (p >= 0) dirty.push_back(p);
  } else {
    // Move the last slot's element into the hole, then re-heapify.
    int moved = nodes_[last].elem;
    int p = nodes_[last].parent;
    nodes_[node].elem = moved;
    node_of_elem_[moved] = node;
    detach_leaf(last);
    slots_.pop_back();
    if (p >= 0 && p != node) dirty.push_back(p);
    if (nodes_[node].parent >= 0 &&
        beats(nodes_[node].elem, nodes_[nodes_[node].parent].elem, t))
      sift_up(node, t, dirty);
    else
      sift_down(node, t, dirty);
  }
  recompute_around(dirty);
}

void KineticPQ::hanger_erase(int node, double t) {
  std::vector<int> dirty;
  int n = node;
  while (true) {
    int k0 = nodes_[n].kid[0], k1 = nodes_[n].kid[1];
    int pick = -1;
    if (k0 >= 0 && k1 >= 0)
      pick = beats(nodes_[k0].elem, nodes_[k1].elem, t) ? k0 : k1;
    else if (k0 >= 0)
      pick = k0;
    else if (k1 >= 0)
      pick = k1;
    if (pick < 0) break;
    nodes_[n].elem = nodes_[pick].elem;
    node_of_elem_[nodes_[n].elem] = n;
    dirty.push_back(n);
    n = pick;
  }
  int p = nodes_[n].parent;
  detach_leaf(n);
  if (p >= 0) dirty.push_back(p);
  recompute_around(dirty);
}

void KineticPQ::insert(int elem, FlightPlan plan, double t, double teval) {
  if (plans_.count(elem)) throw std::invalid_argument("duplicate element id");
  if (std::isnan(teval)) teval = t;
  now_ = t;
  plans_.emplace(elem, std::move(plan));
  if (flavor_ == Flavor::Heap)
    heap_insert(elem, teval);
  else
    hanger_hang(elem, teval, true);
}

void KineticPQ::erase(int elem, double t, double teval) {
  auto it = node_of_elem_.find(elem);
  if (it == node_of_elem_.end())
    throw std::invalid_argument("unknown element id");
  if (std::isnan(teval)) teval = t;
  now_ = t;
  int node = it->second;
  node_of_elem_.erase(it);
  if (flavor_ == Flavor::Heap)
    heap_erase(node, teval);
  else
    hanger_erase(node, teval);
  plans_.erase(elem);
}

std::optional<KineticPQ::Event> KineticPQ::next_event() {
  while (!queue_.empty()) {
    const Entry& top = queue_.top();
    int n = top.node;
    if (n >= (int)nodes_.size() || nodes_[n].gen != top.gen ||
        nodes_[n].elem < 0 || nodes_[n].parent < 0 || top.time < now_) {
      queue_.pop();
      continue;
    }
    Event ev;
    ev.time = top.time;
    ev.child_node = n;
    ev.parent_node = nodes_[n].parent;
    ev.child_elem = nodes_[n].elem;
    ev.parent_elem = nodes_[ev.parent_node].elem;
    return ev;
  }
  return std::nullopt;
}

double KineticPQ::eval_offset(const Event& ev) const {
  double eps = kDefaultEps;
  auto tn = next_crossing(plans_.at(ev.parent_elem), plans_.at(ev.child_elem),
                          ev.time);
  if (tn) eps = std::min(eps, 0.5 * (*tn - ev.time));
  const Domain& d = plans_.at(ev.parent_elem).domain();
  if (!d.is_circle() && ev.time + eps > d.end)
    eps = 0.5 * (d.end - ev.time);
  return eps;
}

bool KineticPQ::event_valid(const Event& ev) const {
  if (nodes_[ev.child_node].elem != ev.child_elem ||
      nodes_[ev.child_node].parent != ev.parent_node ||
      nodes_[ev.parent_node].elem != ev.parent_elem)
    return false;
  double teval = ev.time + eval_offset(ev);
  return beats(ev.child_elem, ev.parent_elem, teval);
}

void KineticPQ::discard_event(const Event& ev) {
  if (!queue_.empty() && queue_.top().node == ev.child_node &&
      queue_.top().time == ev.time)
    queue_.pop();
  // Reschedule past the stale crossing so a numerically spurious root cannot
  // retrigger the same event forever.
  recompute_cert_after(ev.child_node, std::max(now_, ev.time));
}

void KineticPQ::apply_swap(const Event& ev) {
  if (!queue_.empty() && queue_.top().node == ev.child_node &&
      queue_.top().time == ev.time)
    queue_.pop();
  now_ = ev.time;
  int p = ev.parent_node, c = ev.child_node;
  swap_elems(p, c);
  // The <= 5 affected certificates: p's parent edge, the p-c edge, p's other
  // child edge, and c's two child edges.
  recompute_cert(p);
  recompute_cert(c);
  for (int k : nodes_[p].kid)
    if (k >= 0 && k != c) recompute_cert(k);
  for (int k : nodes_[c].kid)
    if (k >= 0) recompute_cert(k);
}

std::vector<std::pair<int, int>> KineticPQ::handle_swap(const Event& ev) {
  if (!event_valid(ev)) {
    discard_event(ev);
    return {};
  }
  int p = ev.parent_elem, c = ev.child_elem;
  apply_swap(ev);
  std::vector<std::pair<int, int>> changed;
  changed.emplace_back(p, c);
  int pn = ev.parent_node, cn = ev.child_node;
  if (nodes_[pn].parent >= 0)
    changed.emplace_back(nodes_[nodes_[pn].parent].elem, nodes_[pn].elem);
  for (int k : nodes_[pn].kid)
    if (k >= 0 && k != cn) changed.emplace_back(nodes_[pn].elem, nodes_[k].elem);
  for (int k : nodes_[cn].kid)
    if (k >= 0) changed.emplace_back(nodes_[cn].elem, nodes_[k].elem);
  return changed;
}

std::vector<KineticPQ::SwapRecord> KineticPQ::advance(double t) {
  std::vector<SwapRecord> log;
  while (auto ev = next_event()) {
    if (ev->time > t) break;
    int a = ev->parent_elem, b = ev->child_elem;
    auto changed = handle_swap(*ev);
    if (!changed.empty()) log.push_back({ev->time, a, b, root_elem()});
  }
  now_ = std::max(now_, t);
  return log;
}

int KineticPQ::root_elem() const {
  return root_ >= 0 ? nodes_[root_].elem : -1;
}

const FlightPlan& KineticPQ::plan_of(int elem) const { return plans_.at(elem); }

std::vector<int> KineticPQ::elements() const {
  std::vector<int> out;
  out.reserve(node_of_elem_.size());
  for (const auto& [e, n] : node_of_elem_) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

int KineticPQ::depth_of(int elem) const {
  int n = node_of_elem_.at(elem);
  int d = 0;
  while (nodes_[n].parent >= 0) {
    n = nodes_[n].parent;
    ++d;
  }
  return d;
}

int KineticPQ::max_depth() const {
  int best = 0;
  for (const auto& [e, n] : node_of_elem_) best = std::max(best, depth_of(e));
  return best;
}

bool KineticPQ::heap_property_holds(double t) const {
  for (const auto& [e, n] : node_of_elem_) {
    int p = nodes_[n].parent;
    if (p >= 0 && !beats(nodes_[p].elem, e, t)) return false;
  }
  return true;
}

int KineticPQ::certificate_count(int elem) const {
  int n = node_of_elem_.at(elem);
  int c = 0;
  if (nodes_[n].parent >= 0) ++c;
  for (int k : nodes_[n].kid)
    if (k >= 0) ++c;
  return c;
}

}  // namespace hourglass
