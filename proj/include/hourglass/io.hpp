#ifndef HOURGLASS_IO_HPP
#define HOURGLASS_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hourglass/curves.hpp"
#include "hourglass/hourglass.hpp"
#include "hourglass/matching.hpp"
#include "hourglass/pht.hpp"

namespace hourglass {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"domain": {"kind":"interval","end":T} | {"kind":"circle"},
///  "pieces": [{"t0":..,"t1":..,"form": {"linear":{"a":..,"b":..}}
///                                    | {"maxabs":[{"A":..,"B":..},...]}
///                                    | "zero"}]}
/// A,B are the cos/sin coefficients of each sinusoid term.
FlightPlan parse_flight_plan(const nlohmann::json& j);
nlohmann::json flight_plan_to_json(const FlightPlan& plan);

/// {"n_left":..,"n_right":..,"edges":[{"u":..,"v":..,"w":..},...]}
BipartiteGraph parse_bipartite_graph(const nlohmann::json& j);

/// Same shape with "plan" in place of "w".
KineticGraph parse_kinetic_graph(const nlohmann::json& j);

/// {"points":[[b,d],...]}
std::vector<DiagramPoint> parse_diagram(const nlohmann::json& j);

/// {"vertices":[[x,y],...], "edges":[[i,j],...], "center":[x,y]?}
EmbeddedGraph parse_embedded_graph(const nlohmann::json& j);

nlohmann::json vineyard_to_json(const PHTVineyard& vy);

/// Reads and json-parses a file; wraps failures in ParseError.
nlohmann::json load_json(const std::string& path);

/// CSV "time,event_kind,edge,root_after,bottleneck_after", one row per event.
void write_trace_csv(std::ostream& out, const std::vector<EventRecord>& log);

/// CSV "t_start,t_end,root_edge,value_at_midpoint", one row per segment.
void write_trajectory_csv(std::ostream& out, const BottleneckTrajectory& traj);

/// Exact per-segment piece parameters, mirroring the flight-plan form JSON.
nlohmann::json trajectory_to_json(const BottleneckTrajectory& traj);

/// Shortest round-trippable decimal form of x (used by every CSV writer so
/// outputs are byte-stable across runs).
std::string format_number(double x);

}  // namespace hourglass

#endif
