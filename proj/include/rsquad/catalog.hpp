#pragma once

// Closed catalog of integrands and integrators.
//
// Every map carries the analytic facts the bound evaluators rely on
// (Hoelder/Lipschitz constants, monotonicity, turning points, jump
// structure). Because the set of kinds is fixed, those facts are derived in
// closed form rather than estimated.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rsquad {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double t) const noexcept { return lo <= t && t <= hi; }
  /// Throws InvalidArgument unless lo < hi and both are finite.
  void validate() const;
};

/// scale * t^exponent. Non-integer exponents require a domain in [0, inf).
struct PowerMap {
  double exponent = 1.0;
  double scale = 1.0;
};

/// Ascending coefficients: c[0] + c[1] t + c[2] t^2 + ...
struct PolynomialMap {
  std::vector<double> coefficients;
};

/// scale * sin(freq * t + phase), freq > 0.
struct SineMap {
  double scale = 1.0;
  double freq = 1.0;
  double phase = 0.0;
};

/// scale * exp(rate * t).
struct ExponentialMap {
  double scale = 1.0;
  double rate = 1.0;
};

/// Piecewise-constant map with explicit one-sided values at every jump.
///
/// For a jump at the left end of the domain, `left` is the value at the
/// point itself; for a jump at the right end, `right` is. Interior jumps
/// take `at` when supplied, otherwise the right value.
struct StepMap {
  std::vector<double> points;
  std::vector<double> left;
  std::vector<double> right;
  std::vector<double> at;  // empty, or one entry per point
};

struct PiecewiseLinearMap {
  std::vector<double> knots;
  std::vector<double> values;
};

using MapParams = std::variant<PowerMap, PolynomialMap, SineMap, ExponentialMap,
                               StepMap, PiecewiseLinearMap>;

enum class MapKind { power, polynomial, sine, exponential, step, piecewise_linear };

std::string_view to_string(MapKind kind);

/// An evaluable real function on a closed interval. Immutable.
class RealMap {
 public:
  RealMap(Interval domain, MapParams params);

  const Interval& domain() const noexcept { return domain_; }
  const MapParams& params() const noexcept { return params_; }
  MapKind kind() const noexcept;

  /// Number of closed-form derivatives exposed (0 for step maps).
  int derivative_order_available() const noexcept;

  double operator()(double t) const;
  double evaluate(double t) const { return (*this)(t); }
  /// k-th derivative; k = 0 is evaluation. For piecewise-linear maps the
  /// right slope is returned at a knot (left slope at the right end).
  double derivative(int k, double t) const;

  /// One-sided limits; they coincide with the value except at step jumps.
  double left_limit(double t) const;
  double right_limit(double t) const;

  bool is_continuous() const noexcept { return kind() != MapKind::step; }
  /// Points where the map is discontinuous (step jumps with a real change).
  std::vector<double> discontinuities() const;
  /// True if the map jumps on the left (f(t-) != f(t)) at t.
  bool jumps_from_left(double t) const;
  /// True if the map jumps on the right (f(t+) != f(t)) at t.
  bool jumps_from_right(double t) const;

  /// Sorted points in the open interval (c, d) where monotonicity may
  /// change. Between consecutive turning points the map is monotone.
  std::vector<double> turning_points(double c, double d) const;
  /// Sorted points in (c, d) where the map or its first derivative is not
  /// smooth (knots, jumps, and singular points of the derivative).
  std::vector<double> breakpoints(double c, double d) const;

  /// Canonical catalog id, e.g. "power:r=0.5".
  std::string id() const;

 private:
  void check_domain(double t) const;

  Interval domain_;
  MapParams params_;
};

struct HoelderPair {
  double constant = 0.0;  // H >= 0 (0 only for constant maps)
  double order = 1.0;     // r in (0, 1]
};

enum class Monotonicity { increasing, decreasing };

/// Which exact p-variation procedure applies to the map.
enum class VariationRule { monotone_increment, step_sequence, extremal_sequence };

/// Marks membership in the class of maps whose n-th derivative is positive
/// on the interior and vanishes at both endpoints.
struct UpClassMarker {
  int order = 1;
};

struct RegularityProfile {
  std::optional<HoelderPair> hoelder;
  std::optional<double> lipschitz;
  std::optional<Monotonicity> monotone;
  std::optional<VariationRule> variation_rule;
  std::optional<UpClassMarker> up_class;

  /// Declared Hoelder pair, or (L, 1) when only a Lipschitz constant is known.
  std::optional<HoelderPair> hoelder_pair() const;
  /// Hoelder pair of order `order` on an interval of the given length:
  /// (L, 1) for order 1 when Lipschitz, otherwise H * length^(r - order)
  /// for order <= r. Empty when no valid pair can be derived.
  std::optional<HoelderPair> hoelder_at_order(double order, double length) const;
};

struct CatalogEntry {
  std::string id;
  RealMap map;
  RegularityProfile profile;
};

/// Builds a map and its strongest closed-form regularity profile.
CatalogEntry make_catalog_entry(Interval domain, MapParams params);

/// Parses a catalog id such as "power:r=0.5", "step:points=0;left=-1;right=0",
/// "poly:1+2x^2", "poly:coeffs=0,1", "sine:scale=1;freq=2", "exp:rate=-1",
/// "pwl:knots=0,0.5,1;values=0,1,0", "const:c=2" or "ubump:n=1".
CatalogEntry parse_catalog_entry(std::string_view id, Interval domain);

/// Result of sampling the declared metadata against the map itself.
struct ProfileAudit {
  bool hoelder_ok = true;
  bool up_class_ok = true;
  bool derivatives_ok = true;
  double worst_hoelder_ratio = 0.0;  // max |f(s)-f(t)| / (H |s-t|^r)
  double worst_derivative_error = 0.0;
  std::vector<std::string> problems;

  bool ok() const { return hoelder_ok && up_class_ok && derivatives_ok; }
};

/// Checks Hoelder pairs on random pairs, the class marker on interior
/// samples, and each available derivative against central differences.
ProfileAudit audit_profile(const CatalogEntry& entry, std::size_t hoelder_pairs = 10000,
                           std::uint64_t seed = 20240601);

/// Real roots of a polynomial in [c, d] at which it changes sign.
std::vector<double> polynomial_sign_changes(const std::vector<double>& coefficients, double c,
                                            double d);

}  // namespace rsquad
