#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hourglass/hourglass.hpp"
#include "oracles.hpp"

using namespace hourglass;

namespace {

// weights: c(x1y1)=1, c(x1y2)=5, c(x2y1)=4, c(x2y2)=2+t
KineticGraph k22_instance(double T = 4.0) {
  Domain d = Domain::interval(0.0, T);
  KineticGraph g;
  g.n_left = g.n_right = 2;
  g.edges.push_back({0, 0, FlightPlan::constant(1.0, d)});
  g.edges.push_back({0, 1, FlightPlan::constant(5.0, d)});
  g.edges.push_back({1, 0, FlightPlan::constant(4.0, d)});
  g.edges.push_back({1, 1, FlightPlan::linear(2.0, 1.0, d)});
  return g;
}

bool near_event(double t, const std::vector<EventRecord>& log, double r) {
  for (const auto& e : log)
    if (std::abs(e.time - t) < r) return true;
  return false;
}

}  // namespace

TEST_CASE("hand-worked 2x2 instance") {
  for (Flavor flavor : {Flavor::Heap, Flavor::Hanger}) {
    Hourglass h(k22_instance(), 0.0, {flavor, 9});
    CHECK(h.root_edge() == 3);  // 2+t is the initial bottleneck
    CHECK(h.bottleneck(0.0) == doctest::Approx(2.0));

    auto traj = h.run(4.0);

    // External events: at t=2 the upper edge 4 descends without a reroute,
    // at t=3 the upper edge 5 takes over the matching and the root.
    std::vector<EventRecord> ext;
    for (const auto& e : h.event_log())
      if (e.kind != EventKind::Internal) ext.push_back(e);
    REQUIRE(ext.size() == 2);
    CHECK(ext[0].kind == EventKind::UpperToLower);
    CHECK(ext[0].time == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(ext[0].edge_a == 2);
    CHECK(ext[0].root_after == 3);
    CHECK(ext[1].kind == EventKind::UpperRootChange);
    CHECK(ext[1].time == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(ext[1].edge_a == 1);
    CHECK(ext[1].root_after == 1);

    // Trajectory: 2+t on [0,3), 5 on [3,4).
    for (int i = 0; i < 200; ++i) {
      double t = 4.0 * i / 200.0;
      double want = t < 3.0 ? 2.0 + t : 5.0;
      if (std::abs(t - 3.0) < 1e-9) continue;
      CHECK(traj.value(t) == doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(traj.integral() == doctest::Approx(2.0 * 3.0 + 0.5 * 9.0 + 5.0));

    // New matching after t=3 is {x2y1, x1y2}.
    CHECK(h.matching().right_of[0] == 1);
    CHECK(h.matching().right_of[1] == 0);
    CHECK(h.stats().augmenting_searches ==
          h.stats().match_events + h.stats().upper_events);
  }
}

TEST_CASE("constant weights produce a single segment and no events") {
  Domain d = Domain::interval(0.0, 8.0);
  KineticGraph g;
  g.n_left = g.n_right = 2;
  g.edges.push_back({0, 0, FlightPlan::constant(1.0, d)});
  g.edges.push_back({1, 1, FlightPlan::constant(2.0, d)});
  g.edges.push_back({0, 1, FlightPlan::constant(7.0, d)});
  Hourglass h(std::move(g), 0.0);
  auto traj = h.run(8.0);
  CHECK(h.event_log().empty());
  REQUIRE(traj.segments.size() == 1);
  CHECK(traj.segments[0].root_edge == 1);
  CHECK(traj.integral() == doctest::Approx(16.0));
}

TEST_CASE("single-edge instance never fires events") {
  Domain d = Domain::interval(0.0, 5.0);
  KineticGraph g;
  g.n_left = g.n_right = 1;
  g.edges.push_back({0, 0, FlightPlan::linear(1.0, 2.0, d)});
  Hourglass h(std::move(g), 0.0);
  auto traj = h.run(5.0);
  CHECK(h.event_log().empty());
  CHECK(traj.value(2.0) == doctest::Approx(5.0));
  CHECK(traj.integral() == doctest::Approx(5.0 + 25.0));
}

TEST_CASE("infeasible graphs are rejected at construction") {
  Domain d = Domain::interval(0.0, 1.0);
  KineticGraph g;
  g.n_left = g.n_right = 2;
  g.edges.push_back({0, 0, FlightPlan::constant(1.0, d)});
  g.edges.push_back({1, 0, FlightPlan::constant(1.0, d)});
  CHECK_THROWS_AS(Hourglass(std::move(g), 0.0), NoPerfectMatching);
}

TEST_CASE("trajectory equals the frozen static bottleneck") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + (int)(rng() % 4);
    int extra = (int)(rng() % (2 * n));
    auto g = oracles::random_kinetic_graph(rng, n, extra, 0.0, 10.0);
    KineticGraph gcopy = g;
    Hourglass h(std::move(gcopy), 0.0,
                {trial % 2 ? Flavor::Hanger : Flavor::Heap, (std::uint64_t)(17 + trial)});
    auto traj = h.run(10.0);
    for (int i = 0; i < 300; ++i) {
      double t = 10.0 * (i + 0.5) / 300.0;
      if (near_event(t, h.event_log(), 1e-6)) continue;
      auto want = static_bottleneck(g.frozen(t));
      CHECK(traj.value(t) == doctest::Approx(want.value).epsilon(1e-9));
    }
    CHECK(h.stats().augmenting_searches ==
          h.stats().match_events + h.stats().upper_events);
  }
}

TEST_CASE("invariants hold after every event") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 2 + (int)(rng() % 4);
    auto g = oracles::random_kinetic_graph(rng, n, n, 0.0, 10.0);
    Hourglass h(std::move(g), 0.0,
                {trial % 2 ? Flavor::Hanger : Flavor::Heap, (std::uint64_t)trial});
    h.check_invariants(0.0);
    double prev = 0.0;
    while (auto rec = h.step(10.0)) {
      // The state reflects t+, so probe just past the event time.
      h.check_invariants(rec->time + 1e-9);
      prev = rec->time;
    }
    h.check_invariants(0.5 * (prev + 10.0));
  }
}

TEST_CASE("heap and hanger flavors agree on the trajectory") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + (int)(rng() % 4);
    auto g = oracles::random_kinetic_graph(rng, n, n, 0.0, 10.0);
    KineticGraph g2 = g;
    Hourglass heap(std::move(g), 0.0, {Flavor::Heap, 1});
    Hourglass hang(std::move(g2), 0.0, {Flavor::Hanger, (std::uint64_t)trial});
    auto ta = heap.run(10.0);
    auto tb = hang.run(10.0);
    for (int i = 0; i < 200; ++i) {
      double t = 10.0 * (i + 0.5) / 200.0;
      if (near_event(t, heap.event_log(), 1e-6)) continue;
      if (near_event(t, hang.event_log(), 1e-6)) continue;
      CHECK(ta.value(t) == doctest::Approx(tb.value(t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("event count grows at most quadratically in edge count") {
  std::mt19937_64 rng(43);
  for (int n : {3, 5, 7}) {
    auto g = oracles::random_kinetic_graph(rng, n, 2 * n, 0.0, 10.0);
    std::size_t m = g.edges.size();
    Hourglass h(std::move(g), 0.0);
    h.run(10.0);
    // Generous fixed constant; each plan has <= 4 linear pieces.
    CHECK(h.stats().events_processed <= 40 * m * m);
  }
}

TEST_CASE("identical-diagram reduction stays at zero") {
  std::vector<DiagramPoint> d{{0.0, 3.0}, {1.0, 2.0}};
  auto bg = diagram_reduction(d, d);
  Domain dom = Domain::interval(0.0, 1.0);
  KineticGraph g;
  g.n_left = bg.n_left;
  g.n_right = bg.n_right;
  for (const auto& e : bg.edges)
    g.edges.push_back({e.u, e.v, FlightPlan::constant(e.w, dom)});
  Hourglass h(std::move(g), 0.0);
  auto traj = h.run(1.0);
  CHECK(traj.value(0.5) == doctest::Approx(0.0));
}
