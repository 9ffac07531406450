#ifndef HOURGLASS_CURVES_HPP
#define HOURGLASS_CURVES_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace hourglass {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Tolerance for continuity of a flight plan across piece junctions.
inline constexpr double kContinuityTol = 1e-9;

/// A cosine wave R*cos(t - phase), stored canonically with R >= 0.
struct Sinusoid {
  double amplitude = 0.0;
  double phase = 0.0;  // radians in [0, 2pi)

  // Canonicalize A*cos(t) + B*sin(t).
  static Sinusoid from_ab(double a, double b);

  double value(double t) const { return amplitude * std::cos(t - phase); }
  double coeff_a() const { return amplitude * std::cos(phase); }
  double coeff_b() const { return amplitude * std::sin(phase); }
};

Sinusoid operator-(const Sinusoid& x, const Sinusoid& y);

struct Linear {
  double a = 0.0, b = 0.0;  // a + b*t
};

struct MaxAbsSinusoids {
  std::vector<Sinusoid> terms;  // 1 or 2 entries
};

struct Zero {};

using PieceForm = std::variant<Linear, MaxAbsSinusoids, Zero>;

double form_value(const PieceForm& f, double t);

/// One piece of a flight plan on the half-open interval [t0, t1).
struct CostPiece {
  double t0 = 0.0, t1 = 0.0;
  PieceForm form = Zero{};

  double value(double t) const { return form_value(form, t); }
};

struct Domain {
  enum class Kind { Interval, Circle };
  Kind kind = Kind::Interval;
  double start = 0.0;
  double end = 0.0;  // circle: always [0, 2pi)

  static Domain interval(double t0, double t1) { return {Kind::Interval, t0, t1}; }
  static Domain circle() { return {Kind::Circle, 0.0, kTwoPi}; }

  double length() const { return end - start; }
  bool is_circle() const { return kind == Kind::Circle; }
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Piecewise cost curve of one edge. Immutable after construction; the
/// constructor rejects plans whose pieces do not tile the domain, are
/// discontinuous beyond kContinuityTol, or go negative.
class FlightPlan {
 public:
  FlightPlan() = default;
  FlightPlan(Domain domain, std::vector<CostPiece> pieces);

  static FlightPlan constant(double v, Domain d);
  static FlightPlan linear(double a, double b, Domain d);

  double eval(double t) const;
  const Domain& domain() const { return domain_; }
  const std::vector<CostPiece>& pieces() const { return pieces_; }

  // Index of the piece containing t (t already reduced for circles).
  const CostPiece& piece_at(double t) const;

  // Wrap t into [0, 2pi) for circle domains; identity otherwise.
  double reduce(double t) const;

 private:
  Domain domain_;
  std::vector<CostPiece> pieces_;
};

/// Smallest t > after where a and b are equal with a strict sign change of
/// a-b across t. Tangential contacts are not reported. For circle domains
/// the search covers one full revolution past `after`; the returned value
/// may exceed 2pi (it is `after`-relative, not wrapped).
std::optional<double> next_crossing(const FlightPlan& a, const FlightPlan& b,
                                    double after);

/// Closed-form integral of the plan over [from, to] (from <= to; for circle
/// domains the range may span more than one revolution).
double integrate(const FlightPlan& plan, double from, double to);

/// Integral over a list of (interval, piece) records, per trajectory output.
double integrate_pieces(const std::vector<CostPiece>& pieces);

/// Pointwise max of two plans over the same domain, expressed in the same
/// piece algebra (the result copies the dominant input's pieces, split at the
/// crossing points).
FlightPlan max_plans(const FlightPlan& a, const FlightPlan& b);

/// Pieces of `plan` restricted to [from, to) in absolute coordinates
/// (circle values are unwrapped so consecutive calls can tile > 2pi spans).
std::vector<CostPiece> slice(const FlightPlan& plan, double from, double to);

}  // namespace hourglass

#endif
