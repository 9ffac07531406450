#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hourglass/hourglass.hpp"
#include "hourglass/io.hpp"
#include "hourglass/matching.hpp"
#include "hourglass/pht.hpp"

using namespace hourglass;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitMonodromy = 3;

struct CommonOpts {
  std::string flavor = "heap";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

Flavor resolve_flavor(const CommonOpts& c) {
  if (c.flavor == "heap") return Flavor::Heap;
  if (!c.seed_given)
    throw CLI::ValidationError("--seed is required with --flavor hanger");
  return Flavor::Hanger;
}

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--flavor", c.flavor, "priority-queue flavor")
      ->check(CLI::IsMember({"heap", "hanger"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "RNG seed (required for hanger)")
      ->each([&c](const std::string&) { c.seed_given = true; });
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

int run_static(const std::string& graph_path, const std::string& dx_path,
               const std::string& dy_path) {
  BipartiteGraph g;
  if (!graph_path.empty()) {
    g = parse_bipartite_graph(load_json(graph_path));
  } else {
    g = diagram_reduction(parse_diagram(load_json(dx_path)),
                          parse_diagram(load_json(dy_path)));
  }
  try {
    BottleneckResult res = static_bottleneck(g);
    std::cout << "bottleneck " << format_number(res.value) << "\n";
    std::cout << "bottleneck_edge " << res.bottleneck_edge << "\n";
    std::cout << "matching";
    for (int u = 0; u < g.n_left; ++u)
      std::cout << ' ' << u << '-' << res.matching.right_of[u];
    std::cout << "\n";
  } catch (const NoPerfectMatching& e) {
    std::cerr << "no perfect matching; Hall witness (left vertices):";
    for (int u : e.hall_witness) std::cerr << ' ' << u;
    std::cerr << "\n";
    return kExitInfeasible;
  }
  return 0;
}

int run_kinetic(const std::string& graph_path, double until,
                const CommonOpts& common, const std::string& trace_path,
                const std::string& traj_path) {
  KineticGraph g = parse_kinetic_graph(load_json(graph_path));
  Hourglass::Options opts{resolve_flavor(common), common.seed};
  double t0 = g.edges.empty() ? 0.0 : g.edges.front().plan.domain().start;
  Hourglass hg(std::move(g), t0, opts);
  BottleneckTrajectory traj;
  try {
    traj = hg.run(until);
  } catch (const NoPerfectMatching& e) {
    std::cerr << "no perfect matching; Hall witness (left vertices):";
    for (int u : e.hall_witness) std::cerr << ' ' << u;
    std::cerr << "\n";
    return kExitInfeasible;
  }
  if (!trace_path.empty()) {
    auto out = open_out(trace_path);
    write_trace_csv(out, hg.event_log());
  }
  if (!traj_path.empty()) {
    auto out = open_out(traj_path);
    write_trajectory_csv(out, traj);
    auto jout = open_out(traj_path + ".json");
    jout << trajectory_to_json(traj).dump(2) << "\n";
  }
  std::cout << "integral " << format_number(traj.integral()) << "\n";
  std::cout << "events " << hg.stats().events_processed << "\n";
  return 0;
}

int run_pht(const std::string& path1, const std::string& path2,
            const CommonOpts& common, const std::string& traj_path) {
  EmbeddedGraph k1 = parse_embedded_graph(load_json(path1));
  EmbeddedGraph k2 = parse_embedded_graph(load_json(path2));
  IntegratedDistance res =
      integrated_distance(k1, k2, resolve_flavor(common), common.seed);
  if (!traj_path.empty()) {
    auto out = open_out(traj_path);
    out << "theta_start,theta_end,value_at_midpoint\n";
    for (const auto& p : res.distance.pieces()) {
      double mid = 0.5 * (p.t0 + p.t1);
      out << format_number(p.t0) << ',' << format_number(p.t1) << ','
          << format_number(p.value(mid)) << '\n';
    }
    auto jout = open_out(traj_path + ".json");
    jout << flight_plan_to_json(res.distance).dump(2) << "\n";
  }
  std::cout << "integrated_distance " << format_number(res.value) << "\n";
  std::cout << "events " << res.events << "\n";
  return 0;
}

int run_compare(const std::string& path1, const std::string& path2, int samples,
                const CommonOpts& common, double tol) {
  EmbeddedGraph k1 = parse_embedded_graph(load_json(path1));
  EmbeddedGraph k2 = parse_embedded_graph(load_json(path2));
  IntegratedDistance res =
      integrated_distance(k1, k2, resolve_flavor(common), common.seed);
  double sampled = sampled_oracle(k1, k2, samples);
  double gap = std::abs(res.value - sampled);
  double rel = gap / std::max(std::abs(res.value), 1e-12);
  // Largest pointwise deviation between the exact distance curve and the
  // frozen per-direction computation, over the same sample grid.
  double max_dev = 0.0;
  for (int i = 0; i < samples; ++i) {
    double theta = (i + 0.5) * kTwoPi / samples;
    max_dev = std::max(max_dev, std::abs(res.distance.eval(theta) -
                                         direction_distance(k1, k2, theta)));
  }
  std::cout << "exact " << format_number(res.value) << "\n";
  std::cout << "sampled " << format_number(sampled) << "\n";
  std::cout << "abs_gap " << format_number(gap) << "\n";
  std::cout << "rel_gap " << format_number(rel) << "\n";
  std::cout << "max_direction_deviation " << format_number(max_dev) << "\n";
  std::cout << (rel <= tol ? "within_tolerance" : "exceeds_tolerance") << " "
            << format_number(tol) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinetic hourglass: time-varying bottleneck matching and "
               "integrated persistence distances"};
  app.require_subcommand(1);

  CommonOpts common;

  auto* st = app.add_subcommand(
      "static-bottleneck", "bottleneck cost of a weighted bipartite graph or "
                           "of a pair of persistence diagrams");
  std::string st_graph, st_dx, st_dy;
  st->add_option("graph", st_graph, "bipartite graph JSON");
  st->add_option("--diagrams", st_dx, "first diagram JSON (with --against)");
  st->add_option("--against", st_dy, "second diagram JSON");
  st->callback([&] {
    if (st_graph.empty() == (st_dx.empty() || st_dy.empty()))
      throw CLI::ValidationError(
          "provide either a graph file or --diagrams/--against");
  });

  auto* kin = app.add_subcommand(
      "kinetic", "run the hourglass over a kinetic bipartite graph");
  std::string kin_graph, kin_trace, kin_traj;
  double kin_until = 0.0;
  kin->add_option("graph", kin_graph, "kinetic graph JSON")->required();
  kin->add_option("--until", kin_until, "end of the simulated window")->required();
  kin->add_option("--out-trace", kin_trace, "event trace CSV path");
  kin->add_option("--out-traj", kin_traj,
                  "trajectory CSV path (exact pieces go to PATH.json)");
  add_common(kin, common);

  auto* pht = app.add_subcommand(
      "pht-distance", "integrated bottleneck distance between the persistent "
                      "homology transforms of two star-shaped graphs");
  std::string pht_g1, pht_g2, pht_traj;
  pht->add_option("graph1", pht_g1, "first embedded graph JSON")->required();
  pht->add_option("graph2", pht_g2, "second embedded graph JSON")->required();
  pht->add_option("--out-traj", pht_traj,
                  "distance-curve CSV path (exact pieces go to PATH.json)");
  add_common(pht, common);

  auto* cmp = app.add_subcommand(
      "compare-oracle", "exact integrated distance vs direction sampling");
  std::string cmp_g1, cmp_g2;
  int cmp_samples = 10000;
  double cmp_tol = 1e-3;
  cmp->add_option("graph1", cmp_g1, "first embedded graph JSON")->required();
  cmp->add_option("graph2", cmp_g2, "second embedded graph JSON")->required();
  cmp->add_option("--samples", cmp_samples, "number of sampled directions")
      ->capture_default_str();
  cmp->add_option("--tol", cmp_tol, "relative-gap tolerance to report against")
      ->capture_default_str();
  add_common(cmp, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (st->parsed()) return run_static(st_graph, st_dx, st_dy);
    if (kin->parsed())
      return run_kinetic(kin_graph, kin_until, common, kin_trace, kin_traj);
    if (pht->parsed()) return run_pht(pht_g1, pht_g2, common, pht_traj);
    return run_compare(cmp_g1, cmp_g2, cmp_samples, common, cmp_tol);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const GenericityError& e) {
    std::cerr << "genericity failure: " << e.what() << "\n";
    return kExitMonodromy;
  } catch (const MonodromyError& e) {
    std::cerr << "monodromy failure: " << e.what() << "\n";
    return kExitMonodromy;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
