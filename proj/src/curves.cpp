#include "hourglass/curves.hpp"

#include <algorithm>
#include <cassert>

namespace hourglass {

namespace {

double wrap_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

}  // namespace

Sinusoid Sinusoid::from_ab(double a, double b) {
  Sinusoid s;
  s.amplitude = std::hypot(a, b);
  s.phase = s.amplitude > 0 ? wrap_angle(std::atan2(b, a)) : 0.0;
  return s;
}

Sinusoid operator-(const Sinusoid& x, const Sinusoid& y) {
  return Sinusoid::from_ab(x.coeff_a() - y.coeff_a(), x.coeff_b() - y.coeff_b());
}

double form_value(const PieceForm& f, double t) {
  if (const auto* lin = std::get_if<Linear>(&f)) return lin->a + lin->b * t;
  if (const auto* ms = std::get_if<MaxAbsSinusoids>(&f)) {
    double v = 0.0;
    for (const auto& s : ms->terms) v = std::max(v, std::abs(s.value(t)));
    return v;
  }
  return 0.0;
}

FlightPlan::FlightPlan(Domain domain, std::vector<CostPiece> pieces)
    : domain_(domain), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw PlanError("flight plan has no pieces");
  if (domain_.is_circle()) {
    domain_.start = 0.0;
    domain_.end = kTwoPi;
  }
  if (!(domain_.start < domain_.end)) throw PlanError("empty domain");
  double cursor = domain_.start;
  for (const auto& p : pieces_) {
    if (!(p.t0 < p.t1)) throw PlanError("empty piece");
    if (std::abs(p.t0 - cursor) > 1e-12)
      throw PlanError("pieces do not tile the domain");
    if (const auto* ms = std::get_if<MaxAbsSinusoids>(&p.form)) {
      if (ms->terms.empty() || ms->terms.size() > 2)
        throw PlanError("maxabs piece needs 1 or 2 sinusoids");
    }
    cursor = p.t1;
  }
  if (std::abs(cursor - domain_.end) > 1e-12)
    throw PlanError("pieces do not cover the domain");
  // Continuity across junctions (incl. the wrap junction on circles).
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    double t = pieces_[i].t1;
    if (std::abs(pieces_[i].value(t) - pieces_[i + 1].value(t)) > kContinuityTol)
      throw PlanError("flight plan is discontinuous at a junction");
  }
  if (domain_.is_circle()) {
    double v0 = pieces_.front().value(0.0);
    double v1 = pieces_.back().value(kTwoPi);
    if (std::abs(v0 - v1) > kContinuityTol)
      throw PlanError("flight plan is discontinuous at the wrap junction");
  }
  // Nonnegativity: linear pieces are monotone, sinusoid pieces are |.|.
  for (const auto& p : pieces_) {
    if (const auto* lin = std::get_if<Linear>(&p.form)) {
      double lo = std::min(lin->a + lin->b * p.t0, lin->a + lin->b * p.t1);
      if (lo < -1e-9) throw PlanError("flight plan takes negative values");
    }
  }
}

FlightPlan FlightPlan::constant(double v, Domain d) {
  return FlightPlan(d, {CostPiece{d.start, d.is_circle() ? kTwoPi : d.end,
                                  Linear{v, 0.0}}});
}

FlightPlan FlightPlan::linear(double a, double b, Domain d) {
  return FlightPlan(d, {CostPiece{d.start, d.is_circle() ? kTwoPi : d.end,
                                  Linear{a, b}}});
}

double FlightPlan::reduce(double t) const {
  return domain_.is_circle() ? wrap_angle(t) : t;
}

const CostPiece& FlightPlan::piece_at(double t) const {
  // Binary search for the piece with t0 <= t < t1.
  size_t lo = 0, hi = pieces_.size();
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    if (pieces_[mid].t0 <= t)
      lo = mid;
    else
      hi = mid;
  }
  return pieces_[lo];
}

double FlightPlan::eval(double t) const {
  double r = reduce(t);
  if (!domain_.is_circle()) {
    if (r < domain_.start - 1e-12 || r > domain_.end + 1e-12)
      throw PlanError("eval outside interval domain");
    r = std::clamp(r, domain_.start, domain_.end);
  }
  return piece_at(r).value(r);
}

namespace {

// Unwrapped breakpoint positions of `plan` strictly inside (from, to).
void collect_breakpoints(const FlightPlan& plan, double from, double to,
                         std::vector<double>& out) {
  if (!plan.domain().is_circle()) {
    for (const auto& p : plan.pieces())
      if (p.t0 > from && p.t0 < to) out.push_back(p.t0);
    return;
  }
  for (const auto& p : plan.pieces()) {
    double k = std::floor((from - p.t0) / kTwoPi);
    for (double t = p.t0 + k * kTwoPi; t < to; t += kTwoPi)
      if (t > from && t < to) out.push_back(t);
  }
}

// Roots in wrapped coordinates of the difference of two sinusoid families
// (all sign combinations), i.e. candidate equality angles of two |.| maxima.
void sinusoid_equality_roots(const std::vector<Sinusoid>& xs,
                             const std::vector<Sinusoid>& ys,
                             std::vector<double>& out) {
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      for (int sign : {+1, -1}) {
        double a = x.coeff_a() - sign * y.coeff_a();
        double b = x.coeff_b() - sign * y.coeff_b();
        double amp = std::hypot(a, b);
        if (amp < 1e-14) continue;  // identical up to sign: no isolated root
        double base = std::atan2(b, a);
        out.push_back(wrap_angle(base + kTwoPi / 4));
        out.push_back(wrap_angle(base + 3 * kTwoPi / 4));
      }
    }
  }
}

// Zeros of each |sinusoid| term (used when splitting for integration).
void sinusoid_zero_roots(const std::vector<Sinusoid>& xs,
                         std::vector<double>& out) {
  for (const auto& x : xs) {
    if (x.amplitude < 1e-14) continue;
    out.push_back(wrap_angle(x.phase + kTwoPi / 4));
    out.push_back(wrap_angle(x.phase + 3 * kTwoPi / 4));
  }
}

void unwrap_into(const std::vector<double>& wrapped, double u, double v,
                 std::vector<double>& out) {
  for (double w : wrapped) {
    double k = std::floor((u - w) / kTwoPi);
    for (double t = w + k * kTwoPi; t < v; t += kTwoPi)
      if (t > u && t < v) out.push_back(t);
  }
}

// Candidate equality points of two single pieces over [u, v] (absolute,
// possibly unwrapped, coordinates). `wrapped` marks circle-domain plans
// whose sinusoid roots live in [0, 2pi).
void piece_equality_candidates(const PieceForm& fa, const PieceForm& fb,
                               double u, double v, bool circle,
                               std::vector<double>& out) {
  const auto* la = std::get_if<Linear>(&fa);
  const auto* lb = std::get_if<Linear>(&fb);
  const auto* ma = std::get_if<MaxAbsSinusoids>(&fa);
  const auto* mb = std::get_if<MaxAbsSinusoids>(&fb);
  bool za = std::holds_alternative<Zero>(fa);
  bool zb = std::holds_alternative<Zero>(fb);

  auto add_linear_root = [&](double a, double b) {
    if (std::abs(b) < 1e-15) return;
    double t = -a / b;
    // Linear pieces on circle domains are evaluated at wrapped t.
    if (circle) {
      std::vector<double> w{wrap_angle(t)};
      unwrap_into(w, u, v, out);
    } else if (t > u && t < v) {
      out.push_back(t);
    }
  };

  if ((la || za) && (lb || zb)) {
    double a0 = la ? la->a : 0.0, b0 = la ? la->b : 0.0;
    double a1 = lb ? lb->a : 0.0, b1 = lb ? lb->b : 0.0;
    add_linear_root(a0 - a1, b0 - b1);
    return;
  }
  if (ma && mb) {
    std::vector<double> roots;
    sinusoid_equality_roots(ma->terms, mb->terms, roots);
    // Where the inner max switches terms, |f - g| can also vanish.
    sinusoid_equality_roots(ma->terms, ma->terms, roots);
    sinusoid_equality_roots(mb->terms, mb->terms, roots);
    unwrap_into(roots, u, v, out);
    return;
  }
  if ((ma && zb) || (mb && za)) {
    std::vector<double> roots;
    sinusoid_zero_roots(ma ? ma->terms : mb->terms, roots);
    unwrap_into(roots, u, v, out);
    return;
  }
  // Mixed linear / sinusoid: no closed form. Sample the segment.
  const int kSamples = 128;
  for (int i = 0; i < kSamples; ++i) {
    double t = u + (v - u) * (i + 0.5) / kSamples;
    out.push_back(t);
  }
}

struct DiffFn {
  const FlightPlan* a;
  const FlightPlan* b;
  double operator()(double t) const { return a->eval(t) - b->eval(t); }
};

double bisect_root(const DiffFn& d, double lo, double hi) {
  double flo = d(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = d(mid);
    if ((flo > 0) == (fm > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Shared scan: sorted grid of breakpoints + equality candidates over
// (after, scan_end), sign probes at the midpoints between grid points.
std::vector<double> equality_grid(const FlightPlan& a, const FlightPlan& b,
                                  double from, double to) {
  std::vector<double> grid;
  collect_breakpoints(a, from, to, grid);
  collect_breakpoints(b, from, to, grid);
  std::vector<double> cuts = grid;
  cuts.push_back(from);
  cuts.push_back(to);
  std::sort(cuts.begin(), cuts.end());
  bool circle = a.domain().is_circle();
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double u = cuts[i], v = cuts[i + 1];
    if (v - u < 1e-13) continue;
    double mid = 0.5 * (u + v);
    const CostPiece& pa = a.piece_at(a.reduce(mid));
    const CostPiece& pb = b.piece_at(b.reduce(mid));
    piece_equality_candidates(pa.form, pb.form, u, v, circle, grid);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double x, double y) { return y - x < 1e-13; }),
             grid.end());
  return grid;
}

}  // namespace

std::optional<double> next_crossing(const FlightPlan& a, const FlightPlan& b,
                                    double after) {
  if (a.domain().is_circle() != b.domain().is_circle())
    throw PlanError("next_crossing: mismatched domains");
  double scan_end =
      a.domain().is_circle() ? after + kTwoPi : std::min(a.domain().end, b.domain().end);
  if (after >= scan_end) return std::nullopt;

  std::vector<double> grid = equality_grid(a, b, after, scan_end);
  DiffFn d{&a, &b};

  // Between consecutive grid entries the difference follows one analytic
  // branch, so each cell is either identically zero or keeps one sign. The
  // order of the two plans can change at a transversal root, but also at the
  // boundary of an identically-zero stretch (plans that agree on an interval
  // and then split apart), so both kinds of transition are reported.
  std::vector<double> cuts;
  cuts.push_back(after);
  for (double g : grid)
    if (g > after + 1e-13 && g < scan_end - 1e-13) cuts.push_back(g);
  cuts.push_back(scan_end);
  std::sort(cuts.begin(), cuts.end());

  int prev_sign = 0;     // sign of the last non-zero cell
  bool in_zero = false;  // inside an identically-zero stretch
  double prev_probe = after;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 1e-13) continue;
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    double v = d(mid);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) {
      if (prev_sign != 0 && cuts[i] > after + 1e-13) return cuts[i];
      in_zero = true;
      continue;
    }
    if (in_zero) {
      if (cuts[i] > after + 1e-13) return cuts[i];
      in_zero = false;
    } else if (prev_sign != 0 && s != prev_sign) {
      double root = bisect_root(d, prev_probe, mid);
      // A root essentially at `after` is the event being processed; keep
      // scanning for the next strict one.
      if (root > after + 1e-13) return root;
    }
    prev_sign = s;
    prev_probe = mid;
  }
  return std::nullopt;
}

namespace {

double integrate_linear(const Linear& l, double u, double v) {
  return (l.a + 0.5 * l.b * (u + v)) * (v - u);
}

// Integral of max over |terms| on [u, v], where [u, v] contains no term
// zeros or term equalities: the dominant term and its sign are constant.
double integrate_maxabs_atomic(const std::vector<Sinusoid>& terms, double u,
                               double v) {
  double mid = 0.5 * (u + v);
  const Sinusoid* dom = &terms[0];
  double best = std::abs(terms[0].value(mid));
  for (const auto& s : terms)
    if (std::abs(s.value(mid)) > best) {
      best = std::abs(s.value(mid));
      dom = &s;
    }
  double sign = dom->value(mid) >= 0 ? 1.0 : -1.0;
  return sign * dom->amplitude *
         (std::sin(v - dom->phase) - std::sin(u - dom->phase));
}

double integrate_piece(const PieceForm& f, double u, double v) {
  if (const auto* lin = std::get_if<Linear>(&f)) return integrate_linear(*lin, u, v);
  const auto* ms = std::get_if<MaxAbsSinusoids>(&f);
  if (!ms) return 0.0;
  std::vector<double> roots;
  sinusoid_zero_roots(ms->terms, roots);
  if (ms->terms.size() == 2)
    sinusoid_equality_roots({ms->terms[0]}, {ms->terms[1]}, roots);
  std::vector<double> cuts;
  unwrap_into(roots, u, v, cuts);
  cuts.push_back(u);
  cuts.push_back(v);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] - cuts[i] > 1e-14)
      total += integrate_maxabs_atomic(ms->terms, cuts[i], cuts[i + 1]);
  return total;
}

}  // namespace

double integrate(const FlightPlan& plan, double from, double to) {
  if (to <= from) return 0.0;
  std::vector<double> cuts;
  collect_breakpoints(plan, from, to, cuts);
  cuts.push_back(from);
  cuts.push_back(to);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double u = cuts[i], v = cuts[i + 1];
    if (v - u < 1e-14) continue;
    const CostPiece& p = plan.piece_at(plan.reduce(0.5 * (u + v)));
    if (plan.domain().is_circle() && std::holds_alternative<Linear>(p.form)) {
      // Linear pieces on a circle are evaluated at wrapped t.
      double k = std::floor((0.5 * (u + v)) / kTwoPi);
      total += integrate_piece(p.form, u - k * kTwoPi, v - k * kTwoPi);
    } else {
      total += integrate_piece(p.form, u, v);
    }
  }
  return total;
}

double integrate_pieces(const std::vector<CostPiece>& pieces) {
  double total = 0.0;
  for (const auto& p : pieces) total += integrate_piece(p.form, p.t0, p.t1);
  return total;
}

std::vector<CostPiece> slice(const FlightPlan& plan, double from, double to) {
  std::vector<CostPiece> out;
  if (to <= from) return out;
  std::vector<double> cuts;
  collect_breakpoints(plan, from, to, cuts);
  cuts.push_back(from);
  cuts.push_back(to);
  std::sort(cuts.begin(), cuts.end());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double u = cuts[i], v = cuts[i + 1];
    if (v - u < 1e-13) continue;
    const CostPiece& p = plan.piece_at(plan.reduce(0.5 * (u + v)));
    PieceForm form = p.form;
    if (plan.domain().is_circle()) {
      if (auto* lin = std::get_if<Linear>(&form)) {
        double k = std::floor((0.5 * (u + v)) / kTwoPi);
        lin->a -= lin->b * k * kTwoPi;  // re-anchor to unwrapped t
      }
      // Sinusoids are 2pi-periodic; no re-anchoring needed.
    }
    out.push_back(CostPiece{u, v, form});
  }
  return out;
}

FlightPlan max_plans(const FlightPlan& a, const FlightPlan& b) {
  double from = a.domain().start, to = a.domain().end;
  std::vector<double> grid = equality_grid(a, b, from, to);
  std::vector<double> cuts;
  cuts.push_back(from);
  for (double g : grid)
    if (g > from + 1e-12 && g < to - 1e-12) cuts.push_back(g);
  cuts.push_back(to);

  DiffFn d{&a, &b};
  std::vector<CostPiece> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double u = cuts[i], v = cuts[i + 1];
    if (v - u < 1e-12) continue;
    double mid = 0.5 * (u + v);
    const FlightPlan& dom = d(mid) >= 0 ? a : b;
    for (auto& p : slice(dom, u, v)) out.push_back(std::move(p));
  }
  return FlightPlan(a.domain(), std::move(out));
}

}  // namespace hourglass
