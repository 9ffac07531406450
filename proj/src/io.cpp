#include "hourglass/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hourglass {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

const json& require_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

PieceForm parse_form(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "zero") return Zero{};
    throw ParseError("unknown piece form \"" + j.get<std::string>() + "\"");
  }
  if (!j.is_object()) throw ParseError("piece form must be an object or \"zero\"");
  if (auto it = j.find("linear"); it != j.end()) {
    return Linear{require_number(require_field(*it, "a"), "linear a"),
                  require_number(require_field(*it, "b"), "linear b")};
  }
  if (auto it = j.find("maxabs"); it != j.end()) {
    if (!it->is_array() || it->empty() || it->size() > 2)
      throw ParseError("maxabs expects 1 or 2 sinusoid terms");
    MaxAbsSinusoids m;
    for (const auto& term : *it)
      m.terms.push_back(Sinusoid::from_ab(
          require_number(require_field(term, "A"), "sinusoid A"),
          require_number(require_field(term, "B"), "sinusoid B")));
    return m;
  }
  throw ParseError("piece form must be linear, maxabs, or \"zero\"");
}

json form_to_json(const PieceForm& f) {
  if (std::holds_alternative<Zero>(f)) return json("zero");
  if (const auto* lin = std::get_if<Linear>(&f))
    return json{{"linear", {{"a", lin->a}, {"b", lin->b}}}};
  const auto& m = std::get<MaxAbsSinusoids>(f);
  json terms = json::array();
  for (const auto& s : m.terms)
    terms.push_back({{"A", s.coeff_a()}, {"B", s.coeff_b()}});
  return json{{"maxabs", std::move(terms)}};
}

}  // namespace

FlightPlan parse_flight_plan(const json& j) {
  const json& jd = require_field(j, "domain");
  std::string kind = require_field(jd, "kind").get<std::string>();
  Domain d;
  if (kind == "circle") {
    d = Domain::circle();
  } else if (kind == "interval") {
    double start = jd.contains("start") ? require_number(jd["start"], "domain start") : 0.0;
    d = Domain::interval(start, require_number(require_field(jd, "end"), "domain end"));
  } else {
    throw ParseError("domain kind must be \"interval\" or \"circle\"");
  }
  const json& jp = require_field(j, "pieces");
  if (!jp.is_array() || jp.empty()) throw ParseError("pieces must be a non-empty array");
  std::vector<CostPiece> pieces;
  for (const auto& piece : jp)
    pieces.push_back({require_number(require_field(piece, "t0"), "piece t0"),
                      require_number(require_field(piece, "t1"), "piece t1"),
                      parse_form(require_field(piece, "form"))});
  try {
    return FlightPlan(d, std::move(pieces));
  } catch (const PlanError& e) {
    throw ParseError(std::string("invalid flight plan: ") + e.what());
  }
}

json flight_plan_to_json(const FlightPlan& plan) {
  json jd;
  if (plan.domain().is_circle()) {
    jd = {{"kind", "circle"}};
  } else {
    jd = {{"kind", "interval"}, {"start", plan.domain().start}, {"end", plan.domain().end}};
  }
  json jp = json::array();
  for (const auto& p : plan.pieces())
    jp.push_back({{"t0", p.t0}, {"t1", p.t1}, {"form", form_to_json(p.form)}});
  return json{{"domain", std::move(jd)}, {"pieces", std::move(jp)}};
}

BipartiteGraph parse_bipartite_graph(const json& j) {
  BipartiteGraph g;
  g.n_left = require_field(j, "n_left").get<int>();
  g.n_right = require_field(j, "n_right").get<int>();
  for (const auto& e : require_field(j, "edges"))
    g.edges.push_back({require_field(e, "u").get<int>(),
                       require_field(e, "v").get<int>(),
                       require_number(require_field(e, "w"), "edge weight")});
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
  return g;
}

KineticGraph parse_kinetic_graph(const json& j) {
  KineticGraph g;
  g.n_left = require_field(j, "n_left").get<int>();
  g.n_right = require_field(j, "n_right").get<int>();
  for (const auto& e : require_field(j, "edges"))
    g.edges.push_back({require_field(e, "u").get<int>(),
                       require_field(e, "v").get<int>(),
                       parse_flight_plan(require_field(e, "plan"))});
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid kinetic graph: ") + e.what());
  }
  return g;
}

std::vector<DiagramPoint> parse_diagram(const json& j) {
  std::vector<DiagramPoint> pts;
  for (const auto& p : require_field(j, "points")) {
    if (!p.is_array() || p.size() != 2) throw ParseError("diagram point must be [birth, death]");
    pts.push_back({require_number(p[0], "birth"), require_number(p[1], "death")});
  }
  return pts;
}

EmbeddedGraph parse_embedded_graph(const json& j) {
  EmbeddedGraph g;
  for (const auto& v : require_field(j, "vertices")) {
    if (!v.is_array() || v.size() != 2) throw ParseError("vertex must be [x, y]");
    g.vertices.push_back({require_number(v[0], "x"), require_number(v[1], "y")});
  }
  for (const auto& e : require_field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw ParseError("edge must be [i, j]");
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  if (auto it = j.find("center"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw ParseError("center must be [x, y]");
    g.center = {{require_number((*it)[0], "center x"), require_number((*it)[1], "center y")}};
  }
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid embedded graph: ") + e.what());
  }
  return g;
}

json vineyard_to_json(const PHTVineyard& vy) {
  json jess = json::array();
  for (const auto& p : vy.essential_birth.pieces)
    jess.push_back({{"a0", p.a0}, {"a1", p.a1},
                    {"A", p.s.coeff_a()}, {"B", p.s.coeff_b()}});
  json jvines = json::array();
  for (const auto& vine : vy.vines) {
    json jarcs = json::array();
    for (const auto& arc : vine.arcs)
      jarcs.push_back({{"a0", arc.a0}, {"a1", arc.a1},
                       {"birth_vertex", arc.birth_vertex},
                       {"death_vertex", arc.death_vertex}});
    jvines.push_back({{"closed", vine.closed}, {"arcs", std::move(jarcs)}});
  }
  return json{{"essential_birth", std::move(jess)}, {"vines", std::move(jvines)}};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_number(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

void write_trace_csv(std::ostream& out, const std::vector<EventRecord>& log) {
  out << "time,event_kind,edge,root_after,bottleneck_after\n";
  for (const auto& rec : log)
    out << format_number(rec.time) << ',' << event_kind_name(rec.kind) << ','
        << rec.edge_a << ',' << rec.root_after << ','
        << format_number(rec.value_after) << '\n';
}

void write_trajectory_csv(std::ostream& out, const BottleneckTrajectory& traj) {
  out << "t_start,t_end,root_edge,value_at_midpoint\n";
  for (const auto& seg : traj.segments) {
    double mid = 0.5 * (seg.t0 + seg.t1);
    double v = 0.0;
    for (const auto& p : seg.pieces)
      if (mid >= p.t0 && mid <= p.t1) { v = p.value(mid); break; }
    out << format_number(seg.t0) << ',' << format_number(seg.t1) << ','
        << seg.root_edge << ',' << format_number(v) << '\n';
  }
}

json trajectory_to_json(const BottleneckTrajectory& traj) {
  json jsegs = json::array();
  for (const auto& seg : traj.segments) {
    json jp = json::array();
    for (const auto& p : seg.pieces)
      jp.push_back({{"t0", p.t0}, {"t1", p.t1}, {"form", form_to_json(p.form)}});
    jsegs.push_back({{"t0", seg.t0}, {"t1", seg.t1},
                     {"root_edge", seg.root_edge}, {"pieces", std::move(jp)}});
  }
  return json{{"segments", std::move(jsegs)}};
}

}  // namespace hourglass
