#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hourglass/hourglass.hpp"
#include "hourglass/io.hpp"
#include "hourglass/matching.hpp"
#include "hourglass/pht.hpp"

namespace py = pybind11;
using namespace hourglass;

namespace {

Flavor flavor_from(const std::string& s) {
  if (s == "heap") return Flavor::Heap;
  if (s == "hanger") return Flavor::Hanger;
  throw py::value_error("flavor must be 'heap' or 'hanger'");
}

BipartiteGraph graph_from(int n_left, int n_right,
                          const std::vector<std::tuple<int, int, double>>& edges) {
  BipartiteGraph g{n_left, n_right, {}};
  for (const auto& [u, v, w] : edges) g.edges.push_back({u, v, w});
  g.validate();
  return g;
}

EmbeddedGraph embedded_from(const std::vector<std::array<double, 2>>& vertices,
                            const std::vector<std::pair<int, int>>& edges,
                            std::optional<std::array<double, 2>> center) {
  EmbeddedGraph g{vertices, edges, center};
  g.validate();
  return g;
}

}  // namespace

PYBIND11_MODULE(_hourglass, m) {
  m.doc() = "kinetic hourglass: time-varying bottleneck matching and "
            "integrated persistence distances";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<NoPerfectMatching>(m, "NoPerfectMatchingError");
  py::register_exception<GenericityError>(m, "GenericityError");
  py::register_exception<MonodromyError>(m, "MonodromyError");

  m.def(
      "static_bottleneck",
      [](int n_left, int n_right,
         const std::vector<std::tuple<int, int, double>>& edges) {
        BottleneckResult r = static_bottleneck(graph_from(n_left, n_right, edges));
        return py::make_tuple(r.value, r.matching.right_of, r.bottleneck_edge);
      },
      py::arg("n_left"), py::arg("n_right"), py::arg("edges"),
      "Minimum bottleneck cost of a perfect matching; returns "
      "(value, right_of, bottleneck_edge).");

  m.def(
      "brute_force_bottleneck",
      [](int n_left, int n_right,
         const std::vector<std::tuple<int, int, double>>& edges) {
        return brute_force_bottleneck(graph_from(n_left, n_right, edges));
      },
      py::arg("n_left"), py::arg("n_right"), py::arg("edges"),
      "Exhaustive bottleneck oracle (n <= 8).");

  m.def(
      "diagram_bottleneck",
      [](const std::vector<std::pair<double, double>>& xs,
         const std::vector<std::pair<double, double>>& ys) {
        std::vector<DiagramPoint> dx, dy;
        for (auto [b, d] : xs) dx.push_back({b, d});
        for (auto [b, d] : ys) dy.push_back({b, d});
        return static_bottleneck(diagram_reduction(dx, dy)).value;
      },
      py::arg("diagram_x"), py::arg("diagram_y"),
      "Bottleneck distance between two finite persistence diagrams.");

  m.def(
      "run_kinetic",
      [](const std::string& graph_json, double until, const std::string& flavor,
         std::uint64_t seed) {
        KineticGraph g =
            parse_kinetic_graph(nlohmann::json::parse(graph_json));
        double t0 = g.edges.empty() ? 0.0 : g.edges.front().plan.domain().start;
        Hourglass hg(std::move(g), t0, {flavor_from(flavor), seed});
        BottleneckTrajectory traj = hg.run(until);
        std::vector<std::tuple<double, std::string, int, int>> events;
        for (const auto& rec : hg.event_log())
          events.emplace_back(rec.time, event_kind_name(rec.kind), rec.edge_a,
                              rec.root_after);
        py::dict out;
        out["integral"] = traj.integral();
        out["events"] = events;
        out["trajectory_json"] = trajectory_to_json(traj).dump();
        return out;
      },
      py::arg("graph_json"), py::arg("until"), py::arg("flavor") = "heap",
      py::arg("seed") = 0,
      "Run the kinetic hourglass over a kinetic-graph JSON string.");

  m.def(
      "lower_star_diagram",
      [](const std::vector<std::array<double, 2>>& vertices,
         const std::vector<std::pair<int, int>>& edges, double theta) {
        DirectionDiagram d =
            lower_star_diagram(embedded_from(vertices, edges, std::nullopt), theta);
        std::vector<std::pair<double, double>> finite;
        for (const auto& p : d.finite) finite.emplace_back(p.birth, p.death);
        return py::make_tuple(d.essential_birth, finite);
      },
      py::arg("vertices"), py::arg("edges"), py::arg("theta"),
      "0-dim lower-star persistence in direction theta; returns "
      "(essential_birth, [(birth, death), ...]).");

  m.def(
      "integrated_distance",
      [](const std::vector<std::array<double, 2>>& v1,
         const std::vector<std::pair<int, int>>& e1,
         const std::vector<std::array<double, 2>>& v2,
         const std::vector<std::pair<int, int>>& e2, const std::string& flavor,
         std::uint64_t seed) {
        IntegratedDistance r = integrated_distance(
            embedded_from(v1, e1, std::nullopt), embedded_from(v2, e2, std::nullopt),
            flavor_from(flavor), seed);
        py::dict out;
        out["value"] = r.value;
        out["events"] = r.events;
        out["distance_json"] = flight_plan_to_json(r.distance).dump();
        return out;
      },
      py::arg("vertices1"), py::arg("edges1"), py::arg("vertices2"),
      py::arg("edges2"), py::arg("flavor") = "heap", py::arg("seed") = 0,
      "Exact integrated bottleneck distance between the persistent homology "
      "transforms of two star-shaped embedded graphs.");

  m.def(
      "sampled_distance",
      [](const std::vector<std::array<double, 2>>& v1,
         const std::vector<std::pair<int, int>>& e1,
         const std::vector<std::array<double, 2>>& v2,
         const std::vector<std::pair<int, int>>& e2, int samples) {
        return sampled_oracle(embedded_from(v1, e1, std::nullopt),
                              embedded_from(v2, e2, std::nullopt), samples);
      },
      py::arg("vertices1"), py::arg("edges1"), py::arg("vertices2"),
      py::arg("edges2"), py::arg("samples") = 10000,
      "Riemann-sum baseline over uniformly sampled directions.");
}
