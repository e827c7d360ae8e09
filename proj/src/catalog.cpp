#include "rsquad/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "rsquad/error.hpp"
#include "rsquad/numeric.hpp"

namespace rsquad {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

std::vector<double> trimmed(std::vector<double> c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
  return c;
}

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
  return trimmed(std::move(d));
}

std::vector<double> differentiate(std::vector<double> c, int times) {
  for (int i = 0; i < times; ++i) c = differentiate(c);
  return c;
}

/// Antiderivative vanishing at `from`.
std::vector<double> integrate_from(const std::vector<double>& c, double from) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) out[k + 1] = c[k] / static_cast<double>(k + 1);
  out[0] = -horner(out, from);
  return trimmed(std::move(out));
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<double> in_open(const std::vector<double>& pts, double c, double d) {
  std::vector<double> out;
  for (double p : pts) {
    if (p > c && p < d) out.push_back(p);
  }
  return out;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

std::string fmt_list(const std::vector<double>& v) {
  std::vector<std::string> parts;
  parts.reserve(v.size());
  for (double x : v) parts.push_back(fmt_num(x));
  return fmt::format("{}", fmt::join(parts, ","));
}

void validate_step(const StepMap& s, const Interval& dom) {
  const auto n = s.points.size();
  if (n == 0) throw InvalidArgument("step map needs at least one jump point");
  if (s.left.size() != n || s.right.size() != n)
    throw InvalidArgument("step map: points, left and right must have equal length");
  if (!s.at.empty() && s.at.size() != n)
    throw InvalidArgument("step map: at-values must match the number of points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!dom.contains(s.points[i]))
      throw InvalidArgument(fmt::format("step map: jump point {} outside domain", s.points[i]));
    if (i > 0 && !(s.points[i] > s.points[i - 1]))
      throw InvalidArgument("step map: jump points must be strictly increasing");
    if (i > 0 && s.left[i] != s.right[i - 1])
      throw InvalidArgument(
          fmt::format("step map: right value {} of jump {} disagrees with left value {} of the next",
                      s.right[i - 1], i - 1, s.left[i]));
  }
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(s.left) || !finite(s.right) || !finite(s.at) || !finite(s.points))
    throw InvalidArgument("step map: non-finite parameter");
}

double step_at_point(const StepMap& s, const Interval& dom, std::size_t j) {
  if (!s.at.empty()) return s.at[j];
  if (s.points[j] == dom.lo) return s.left[j];
  return s.right[j];
}

std::optional<std::size_t> step_jump_index(const StepMap& s, double t) {
  auto it = std::lower_bound(s.points.begin(), s.points.end(), t);
  if (it != s.points.end() && *it == t) return static_cast<std::size_t>(it - s.points.begin());
  return std::nullopt;
}

double step_piece_value(const StepMap& s, double t) {
  const auto idx = static_cast<std::size_t>(std::lower_bound(s.points.begin(), s.points.end(), t) -
                                            s.points.begin());
  if (idx == 0) return s.left[0];
  return s.right[idx - 1];
}

void validate_pwl(const PiecewiseLinearMap& m, const Interval& dom) {
  if (m.knots.size() < 2 || m.knots.size() != m.values.size())
    throw InvalidArgument("piecewise-linear map needs >= 2 knots and matching values");
  for (std::size_t i = 1; i < m.knots.size(); ++i) {
    if (!(m.knots[i] > m.knots[i - 1]))
      throw InvalidArgument("piecewise-linear map: knots must be strictly increasing");
  }
  if (m.knots.front() != dom.lo || m.knots.back() != dom.hi)
    throw InvalidArgument("piecewise-linear map: first and last knot must be the domain ends");
}

std::size_t pwl_segment(const PiecewiseLinearMap& m, double t) {
  auto it = std::upper_bound(m.knots.begin(), m.knots.end(), t);
  auto idx = static_cast<std::size_t>(it - m.knots.begin());
  if (idx == 0) idx = 1;
  if (idx >= m.knots.size()) idx = m.knots.size() - 1;
  return idx - 1;
}

double pwl_slope(const PiecewiseLinearMap& m, std::size_t seg) {
  return (m.values[seg + 1] - m.values[seg]) / (m.knots[seg + 1] - m.knots[seg]);
}

}  // namespace

void Interval::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw InvalidArgument(fmt::format("invalid interval [{}, {}]", lo, hi));
}

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::power: return "power";
    case MapKind::polynomial: return "polynomial";
    case MapKind::sine: return "sine";
    case MapKind::exponential: return "exponential";
    case MapKind::step: return "step";
    case MapKind::piecewise_linear: return "piecewise-linear";
  }
  return "unknown";
}

std::vector<double> polynomial_sign_changes(const std::vector<double>& coefficients, double c,
                                            double d) {
  const auto q = trimmed(coefficients);
  if (q.size() <= 1) return {};
  std::vector<double> cuts{c};
  for (double e : polynomial_sign_changes(differentiate(q), c, d)) {
    if (e > c && e < d) cuts.push_back(e);
  }
  cuts.push_back(d);

  std::vector<double> roots;
  auto qf = [&q](double t) { return horner(q, t); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double flo = qf(lo);
    const double fhi = qf(hi);
    if (flo == 0.0) {
      roots.push_back(lo);
    } else if (fhi != 0.0 && std::signbit(flo) != std::signbit(fhi)) {
      std::uintmax_t iters = 200;
      auto bracket = boost::math::tools::toms748_solve(
          qf, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
      roots.push_back(0.5 * (bracket.first + bracket.second));
    }
  }
  if (qf(d) == 0.0) roots.push_back(d);
  sort_unique(roots);
  return roots;
}

// ---------------------------------------------------------------------------
// RealMap
// ---------------------------------------------------------------------------

RealMap::RealMap(Interval domain, MapParams params) : domain_(domain), params_(std::move(params)) {
  domain_.validate();
  std::visit(Overloaded{
                 [&](PowerMap& m) {
                   if (!(m.exponent > 0.0) || !std::isfinite(m.exponent) || !std::isfinite(m.scale))
                     throw InvalidArgument("power map: exponent must be positive and finite");
                   if (!is_integer(m.exponent) && domain_.lo < 0.0)
                     throw InvalidArgument("power map: non-integer exponent needs a domain in [0, inf)");
                 },
                 [&](PolynomialMap& m) {
                   if (m.coefficients.empty())
                     throw InvalidArgument("polynomial map: no coefficients");
                   for (double c : m.coefficients) {
                     if (!std::isfinite(c)) throw InvalidArgument("polynomial map: non-finite coefficient");
                   }
                   m.coefficients = trimmed(m.coefficients);
                 },
                 [&](SineMap& m) {
                   if (!(m.freq > 0.0) || !std::isfinite(m.freq) || !std::isfinite(m.scale) ||
                       !std::isfinite(m.phase))
                     throw InvalidArgument("sine map: frequency must be positive and finite");
                 },
                 [&](ExponentialMap& m) {
                   if (!std::isfinite(m.scale) || !std::isfinite(m.rate))
                     throw InvalidArgument("exponential map: non-finite parameter");
                   if (!std::isfinite(m.scale * std::exp(m.rate * domain_.lo)) ||
                       !std::isfinite(m.scale * std::exp(m.rate * domain_.hi)))
                     throw InvalidArgument("exponential map: overflows on its domain");
                 },
                 [&](StepMap& m) { validate_step(m, domain_); },
                 [&](PiecewiseLinearMap& m) { validate_pwl(m, domain_); },
             },
             params_);
}

MapKind RealMap::kind() const noexcept { return static_cast<MapKind>(params_.index()); }

int RealMap::derivative_order_available() const noexcept {
  switch (kind()) {
    case MapKind::step: return 0;
    case MapKind::piecewise_linear: return 1;
    default: return 8;
  }
}

void RealMap::check_domain(double t) const {
  if (!domain_.contains(t))
    throw InvalidArgument(fmt::format("point {} outside domain [{}, {}]", t, domain_.lo, domain_.hi));
}

double RealMap::operator()(double t) const {
  check_domain(t);
  return std::visit(
      Overloaded{
          [&](const PowerMap& m) { return m.scale * std::pow(t, m.exponent); },
          [&](const PolynomialMap& m) { return horner(m.coefficients, t); },
          [&](const SineMap& m) { return m.scale * std::sin(m.freq * t + m.phase); },
          [&](const ExponentialMap& m) { return m.scale * std::exp(m.rate * t); },
          [&](const StepMap& m) {
            if (auto j = step_jump_index(m, t)) return step_at_point(m, domain_, *j);
            return step_piece_value(m, t);
          },
          [&](const PiecewiseLinearMap& m) {
            const auto s = pwl_segment(m, t);
            if (t == m.knots[s + 1]) return m.values[s + 1];
            return m.values[s] + pwl_slope(m, s) * (t - m.knots[s]);
          },
      },
      params_);
}

double RealMap::derivative(int k, double t) const {
  if (k < 0) throw InvalidArgument("negative derivative order");
  if (k == 0) return (*this)(t);
  if (k > derivative_order_available())
    throw InvalidArgument(fmt::format("{} map exposes no closed-form derivative of order {}",
                                      to_string(kind()), k));
  check_domain(t);
  return std::visit(
      Overloaded{
          [&](const PowerMap& m) {
            double coef = m.scale;
            for (int i = 0; i < k; ++i) coef *= (m.exponent - i);
            if (coef == 0.0) return 0.0;
            return coef * std::pow(t, m.exponent - k);
          },
          [&](const PolynomialMap& m) { return horner(differentiate(m.coefficients, k), t); },
          [&](const SineMap& m) {
            return m.scale * std::pow(m.freq, k) *
                   std::sin(m.freq * t + m.phase + k * std::numbers::pi / 2.0);
          },
          [&](const ExponentialMap& m) { return m.scale * std::pow(m.rate, k) * std::exp(m.rate * t); },
          [&](const StepMap&) -> double { throw InvalidArgument("step map has no derivative"); },
          [&](const PiecewiseLinearMap& m) { return pwl_slope(m, pwl_segment(m, t)); },
      },
      params_);
}

double RealMap::left_limit(double t) const {
  check_domain(t);
  if (const auto* s = std::get_if<StepMap>(&params_)) {
    if (auto j = step_jump_index(*s, t); j && t > domain_.lo) return s->left[*j];
  }
  return (*this)(t);
}

double RealMap::right_limit(double t) const {
  check_domain(t);
  if (const auto* s = std::get_if<StepMap>(&params_)) {
    if (auto j = step_jump_index(*s, t); j && t < domain_.hi) return s->right[*j];
  }
  return (*this)(t);
}

bool RealMap::jumps_from_left(double t) const {
  if (t <= domain_.lo || t > domain_.hi) return false;
  return left_limit(t) != (*this)(t);
}

bool RealMap::jumps_from_right(double t) const {
  if (t < domain_.lo || t >= domain_.hi) return false;
  return right_limit(t) != (*this)(t);
}

std::vector<double> RealMap::discontinuities() const {
  std::vector<double> out;
  if (const auto* s = std::get_if<StepMap>(&params_)) {
    for (double p : s->points) {
      if (jumps_from_left(p) || jumps_from_right(p)) out.push_back(p);
    }
  }
  return out;
}

std::vector<double> RealMap::turning_points(double c, double d) const {
  return std::visit(
      Overloaded{
          [&](const PowerMap& m) -> std::vector<double> {
            const bool even = is_integer(m.exponent) && std::fmod(m.exponent, 2.0) == 0.0;
            if (even && c < 0.0 && 0.0 < d) return {0.0};
            return {};
          },
          [&](const PolynomialMap& m) {
            return in_open(polynomial_sign_changes(differentiate(m.coefficients), c, d), c, d);
          },
          [&](const SineMap& m) {
            // freq * t + phase = pi/2 + k pi
            std::vector<double> out;
            const double pi = std::numbers::pi;
            const double kmin = std::ceil((m.freq * c + m.phase - pi / 2.0) / pi);
            for (double kk = kmin;; kk += 1.0) {
              const double t = (pi / 2.0 + kk * pi - m.phase) / m.freq;
              if (t >= d) break;
              if (t > c) out.push_back(t);
            }
            return out;
          },
          [&](const ExponentialMap&) -> std::vector<double> { return {}; },
          [&](const StepMap& m) { return in_open(m.points, c, d); },
          [&](const PiecewiseLinearMap& m) { return in_open(m.knots, c, d); },
      },
      params_);
}

std::vector<double> RealMap::breakpoints(double c, double d) const {
  switch (kind()) {
    case MapKind::step:
    case MapKind::piecewise_linear: return turning_points(c, d);
    case MapKind::power:
      if (c < 0.0 && 0.0 < d) return {0.0};
      return {};
    default: return {};
  }
}

std::string RealMap::id() const {
  return std::visit(
      Overloaded{
          [&](const PowerMap& m) {
            if (m.scale == 1.0) return fmt::format("power:r={}", fmt_num(m.exponent));
            return fmt::format("power:r={};scale={}", fmt_num(m.exponent), fmt_num(m.scale));
          },
          [&](const PolynomialMap& m) { return fmt::format("poly:coeffs={}", fmt_list(m.coefficients)); },
          [&](const SineMap& m) {
            return fmt::format("sine:scale={};freq={};phase={}", fmt_num(m.scale), fmt_num(m.freq),
                               fmt_num(m.phase));
          },
          [&](const ExponentialMap& m) {
            return fmt::format("exp:scale={};rate={}", fmt_num(m.scale), fmt_num(m.rate));
          },
          [&](const StepMap& m) {
            auto s = fmt::format("step:points={};left={};right={}", fmt_list(m.points), fmt_list(m.left),
                                 fmt_list(m.right));
            if (!m.at.empty()) s += ";at=" + fmt_list(m.at);
            return s;
          },
          [&](const PiecewiseLinearMap& m) {
            return fmt::format("pwl:knots={};values={}", fmt_list(m.knots), fmt_list(m.values));
          },
      },
      params_);
}

// ---------------------------------------------------------------------------
// Regularity
// ---------------------------------------------------------------------------

std::optional<HoelderPair> RegularityProfile::hoelder_pair() const {
  if (hoelder) return hoelder;
  if (lipschitz) return HoelderPair{*lipschitz, 1.0};
  return std::nullopt;
}

std::optional<HoelderPair> RegularityProfile::hoelder_at_order(double order, double length) const {
  if (!(order > 0.0 && order <= 1.0)) return std::nullopt;
  if (order == 1.0 && lipschitz) return HoelderPair{*lipschitz, 1.0};
  std::optional<HoelderPair> best;
  auto consider = [&](const HoelderPair& h) {
    if (order > h.order) return;
    const HoelderPair derived{h.constant * std::pow(length, h.order - order), order};
    if (!best || derived.constant < best->constant) best = derived;
  };
  if (hoelder) consider(*hoelder);
  if (lipschitz) consider(HoelderPair{*lipschitz, 1.0});
  return best;
}

namespace {

std::optional<Monotonicity> monotone_from_sign(double sign) {
  if (sign > 0.0) return Monotonicity::increasing;
  if (sign < 0.0) return Monotonicity::decreasing;
  return Monotonicity::increasing;  // constant
}

double polynomial_max_abs(const std::vector<double>& q, double c, double d) {
  double best = std::max(std::abs(horner(q, c)), std::abs(horner(q, d)));
  for (double t : polynomial_sign_changes(differentiate(q), c, d)) best = std::max(best, std::abs(horner(q, t)));
  return best;
}

std::optional<UpClassMarker> detect_up_class(const RealMap& map) {
  if (map.derivative_order_available() < 2) return std::nullopt;
  const auto& dom = map.domain();
  for (int n = 1; n <= 2; ++n) {
    if (std::abs(map.derivative(n, dom.lo)) > 1e-12 || std::abs(map.derivative(n, dom.hi)) > 1e-12)
      continue;
    bool positive = true;
    for (int i = 0; i < 100 && positive; ++i) {
      const double t = dom.lo + (i + 0.5) / 100.0 * dom.length();
      positive = map.derivative(n, t) > 0.0;
    }
    if (positive) return UpClassMarker{n};
  }
  return std::nullopt;
}

RegularityProfile derive_profile(const RealMap& map) {
  RegularityProfile prof;
  const auto& dom = map.domain();
  std::visit(
      Overloaded{
          [&](const PowerMap& m) {
            const double s = std::abs(m.scale);
            const double r = m.exponent;
            if (m.scale == 0.0) {
              prof.lipschitz = 0.0;
              prof.monotone = Monotonicity::increasing;
              return;
            }
            if (dom.lo >= 0.0) {
              prof.monotone = monotone_from_sign(m.scale);
            } else {
              const bool odd = std::fmod(std::abs(r), 2.0) == 1.0;
              if (odd) {
                prof.monotone = monotone_from_sign(m.scale);
              } else if (dom.hi <= 0.0) {
                prof.monotone = monotone_from_sign(-m.scale);
              }
            }
            if (r <= 1.0) {
              // lo >= 0 here: t^r is subadditive.
              prof.hoelder = HoelderPair{s, r};
              if (r == 1.0) {
                prof.lipschitz = s;
              } else if (dom.lo > 0.0) {
                prof.lipschitz = s * r * std::pow(dom.lo, r - 1.0);
              }
            } else {
              const double big = std::max(std::abs(dom.lo), std::abs(dom.hi));
              prof.lipschitz = s * r * std::pow(big, r - 1.0);
            }
          },
          [&](const PolynomialMap& m) {
            const auto dq = differentiate(m.coefficients);
            prof.lipschitz = polynomial_max_abs(dq, dom.lo, dom.hi);
            if (map.turning_points(dom.lo, dom.hi).empty())
              prof.monotone = monotone_from_sign(horner(m.coefficients, dom.hi) - horner(m.coefficients, dom.lo));
            prof.up_class = detect_up_class(map);
          },
          [&](const SineMap& m) {
            prof.lipschitz = std::abs(m.scale) * m.freq;
            if (map.turning_points(dom.lo, dom.hi).empty())
              prof.monotone = monotone_from_sign(map(dom.hi) - map(dom.lo));
          },
          [&](const ExponentialMap& m) {
            prof.lipschitz = std::abs(m.scale * m.rate) * std::max(std::exp(m.rate * dom.lo), std::exp(m.rate * dom.hi));
            prof.monotone = monotone_from_sign(m.scale * m.rate);
          },
          [&](const StepMap& m) {
            std::vector<double> seq{map(dom.lo)};
            for (std::size_t j = 0; j < m.points.size(); ++j) {
              if (m.points[j] > dom.lo) seq.push_back(m.left[j]);
              seq.push_back(step_at_point(m, dom, j));
              if (m.points[j] < dom.hi) seq.push_back(m.right[j]);
            }
            seq.push_back(map(dom.hi));
            const bool up = std::is_sorted(seq.begin(), seq.end());
            const bool down = std::is_sorted(seq.rbegin(), seq.rend());
            if (up) prof.monotone = Monotonicity::increasing;
            else if (down) prof.monotone = Monotonicity::decreasing;
          },
          [&](const PiecewiseLinearMap& m) {
            double lip = 0.0;
            bool nonneg = true;
            bool nonpos = true;
            for (std::size_t s = 0; s + 1 < m.knots.size(); ++s) {
              const double slope = pwl_slope(m, s);
              lip = std::max(lip, std::abs(slope));
              nonneg = nonneg && slope >= 0.0;
              nonpos = nonpos && slope <= 0.0;
            }
            prof.lipschitz = lip;
            if (nonneg) prof.monotone = Monotonicity::increasing;
            else if (nonpos) prof.monotone = Monotonicity::decreasing;
          },
      },
      map.params());

  if (prof.lipschitz && !prof.hoelder) prof.hoelder = HoelderPair{*prof.lipschitz, 1.0};
  if (map.kind() == MapKind::step) {
    prof.variation_rule = VariationRule::step_sequence;
  } else if (prof.monotone) {
    prof.variation_rule = VariationRule::monotone_increment;
  } else {
    prof.variation_rule = VariationRule::extremal_sequence;
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Id parsing
// ---------------------------------------------------------------------------

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string strip(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(std::string_view text, std::string_view what) {
  const auto s = strip(text);
  if (s.empty()) throw InvalidArgument(fmt::format("missing number for '{}'", what));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument(fmt::format("cannot parse '{}' as a number for '{}'", s, what));
  }
  if (used != s.size() || !std::isfinite(v))
    throw InvalidArgument(fmt::format("cannot parse '{}' as a number for '{}'", s, what));
  return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_number(piece, what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::string_view body) {
  KeyValues kv;
  std::size_t start = 0;
  while (start < body.size()) {
    auto semi = body.find(';', start);
    if (semi == std::string_view::npos) semi = body.size();
    const auto item = strip(body.substr(start, semi - start));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument(fmt::format("expected key=value, got '{}'", item));
      kv[lower(strip(item.substr(0, eq)))] = strip(item.substr(eq + 1));
    }
    start = semi + 1;
  }
  return kv;
}

class ParamReader {
 public:
  ParamReader(std::string kind, KeyValues kv) : kind_(std::move(kind)), kv_(std::move(kv)) {}

  double number(std::initializer_list<std::string_view> keys, std::optional<double> fallback) {
    for (auto k : keys) {
      if (auto it = kv_.find(k); it != kv_.end()) {
        used_.push_back(it->first);
        return parse_number(it->second, k);
      }
    }
    if (fallback) return *fallback;
    throw InvalidArgument(fmt::format("{}: missing parameter '{}'", kind_, *keys.begin()));
  }

  std::vector<double> list(std::string_view key, bool required) {
    if (auto it = kv_.find(key); it != kv_.end()) {
      used_.push_back(it->first);
      return parse_list(it->second, key);
    }
    if (required) throw InvalidArgument(fmt::format("{}: missing parameter '{}'", kind_, key));
    return {};
  }

  void finish() const {
    for (const auto& [k, v] : kv_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end())
        throw InvalidArgument(fmt::format("{}: unknown parameter '{}'", kind_, k));
    }
  }

 private:
  std::string kind_;
  KeyValues kv_;
  std::vector<std::string> used_;
};

/// Polynomial shorthand such as "1x", "1+2x^2", "-x^3+0.5x".
std::vector<double> parse_poly_terms(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(static_cast<char>(std::tolower(ch)));
  }
  if (s.empty()) throw InvalidArgument("poly: empty term list");
  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != '^') {
      terms.push_back(s.substr(start, i - start));
      start = i;
    }
  }
  terms.push_back(s.substr(start));

  std::vector<double> coeffs;
  for (const auto& term : terms) {
    const auto xpos = term.find('x');
    std::string coef_text = term.substr(0, xpos);
    std::size_t degree = 0;
    if (xpos != std::string::npos) {
      degree = 1;
      const auto rest = term.substr(xpos + 1);
      if (!rest.empty()) {
        if (rest[0] != '^') throw InvalidArgument(fmt::format("poly: bad term '{}'", term));
        const double deg = parse_number(rest.substr(1), "degree");
        if (!is_integer(deg) || deg < 0 || deg > 64) throw InvalidArgument(fmt::format("poly: bad degree in '{}'", term));
        degree = static_cast<std::size_t>(deg);
      }
    }
    double coef = 1.0;
    if (coef_text == "+" || coef_text.empty()) coef = 1.0;
    else if (coef_text == "-") coef = -1.0;
    else coef = parse_number(coef_text, "coefficient");
    if (xpos == std::string::npos && (coef_text.empty())) throw InvalidArgument(fmt::format("poly: bad term '{}'", term));
    if (coeffs.size() <= degree) coeffs.resize(degree + 1, 0.0);
    coeffs[degree] += coef;
  }
  return coeffs;
}

/// Polynomial with n-th derivative (t - a)(b - t), the lower derivatives
/// vanishing at a, shifted by +1 so that the map itself is positive.
std::vector<double> up_class_bump(int n, const Interval& dom) {
  std::vector<double> q{-dom.lo * dom.hi, dom.lo + dom.hi, -1.0};
  for (int i = 0; i < n; ++i) q = integrate_from(q, dom.lo);
  q[0] += 1.0;
  return q;
}

}  // namespace

CatalogEntry make_catalog_entry(Interval domain, MapParams params) {
  RealMap map(domain, std::move(params));
  auto profile = derive_profile(map);
  auto id = map.id();
  return CatalogEntry{std::move(id), std::move(map), std::move(profile)};
}

CatalogEntry parse_catalog_entry(std::string_view id_text, Interval domain) {
  domain.validate();
  const auto text = strip(id_text);
  const auto colon = text.find(':');
  const auto kind = lower(strip(text.substr(0, colon)));
  const std::string body = colon == std::string::npos ? std::string() : text.substr(colon + 1);

  auto reader = [&] { return ParamReader(kind, parse_key_values(body)); };

  MapParams params;
  std::optional<UpClassMarker> forced_marker;
  if (kind == "power" || kind == "pow") {
    auto r = reader();
    PowerMap m{r.number({"r", "exponent"}, std::nullopt), r.number({"scale"}, 1.0)};
    r.finish();
    params = m;
  } else if (kind == "poly" || kind == "polynomial") {
    if (body.find('=') == std::string::npos) {
      params = PolynomialMap{parse_poly_terms(body)};
    } else {
      auto r = reader();
      PolynomialMap m{r.list("coeffs", true)};
      r.finish();
      params = m;
    }
  } else if (kind == "identity") {
    params = PolynomialMap{{0.0, 1.0}};
  } else if (kind == "const" || kind == "constant") {
    auto r = reader();
    PolynomialMap m{{r.number({"c", "value"}, 1.0)}};
    r.finish();
    params = m;
  } else if (kind == "sine" || kind == "sin") {
    auto r = reader();
    SineMap m{r.number({"scale"}, 1.0), r.number({"freq"}, 1.0), r.number({"phase"}, 0.0)};
    r.finish();
    params = m;
  } else if (kind == "exp" || kind == "exponential") {
    auto r = reader();
    ExponentialMap m{r.number({"scale"}, 1.0), r.number({"rate"}, 1.0)};
    r.finish();
    params = m;
  } else if (kind == "step") {
    auto r = reader();
    StepMap m{r.list("points", true), r.list("left", true), r.list("right", true), r.list("at", false)};
    r.finish();
    params = m;
  } else if (kind == "pwl" || kind == "piecewise-linear") {
    auto r = reader();
    PiecewiseLinearMap m{r.list("knots", true), r.list("values", true)};
    r.finish();
    params = m;
  } else if (kind == "ubump") {
    auto r = reader();
    const double n = r.number({"n"}, 1.0);
    r.finish();
    if (!is_integer(n) || n < 1 || n > 4) throw InvalidArgument("ubump: n must be an integer in [1, 4]");
    params = PolynomialMap{up_class_bump(static_cast<int>(n), domain)};
    forced_marker = UpClassMarker{static_cast<int>(n)};
  } else {
    throw InvalidArgument(fmt::format("unsupported catalog kind '{}'", kind));
  }

  auto entry = make_catalog_entry(domain, std::move(params));
  if (forced_marker) entry.profile.up_class = forced_marker;
  entry.id = text;
  return entry;
}

// ---------------------------------------------------------------------------
// Audit
// ---------------------------------------------------------------------------

ProfileAudit audit_profile(const CatalogEntry& entry, std::size_t hoelder_pairs, std::uint64_t seed) {
  ProfileAudit audit;
  const auto& map = entry.map;
  const auto& dom = map.domain();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<HoelderPair> pairs;
  if (entry.profile.hoelder) pairs.push_back(*entry.profile.hoelder);
  if (entry.profile.lipschitz) pairs.push_back(HoelderPair{*entry.profile.lipschitz, 1.0});
  for (const auto& h : pairs) {
    for (std::size_t i = 0; i < hoelder_pairs; ++i) {
      const double t = dom.lo + unit(rng) * dom.length();
      double s = 0.0;
      if (i % 2 == 0) {
        s = dom.lo + unit(rng) * dom.length();
      } else {
        // close pairs probe the local behaviour
        const double delta = dom.length() * std::pow(10.0, -8.0 * unit(rng));
        s = std::clamp(t + (unit(rng) < 0.5 ? -delta : delta), dom.lo, dom.hi);
      }
      if (s == t) continue;
      const double lhs = std::abs(map(s) - map(t));
      const double rhs = h.constant * std::pow(std::abs(s - t), h.order);
      const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 1e-14 ? kInfinity : 0.0);
      audit.worst_hoelder_ratio = std::max(audit.worst_hoelder_ratio, ratio);
      if (lhs > rhs * (1.0 + 1e-9) + 1e-14) {
        if (audit.hoelder_ok)
          audit.problems.push_back(fmt::format("Hoelder pair ({}, {}) fails at s={}, t={}", h.constant, h.order, s, t));
        audit.hoelder_ok = false;
      }
    }
  }

  if (const auto& marker = entry.profile.up_class) {
    const int n = marker->order;
    if (map.derivative_order_available() < n) {
      audit.up_class_ok = false;
      audit.problems.push_back("class marker without the derivative it refers to");
    } else {
      if (std::abs(map.derivative(n, dom.lo)) > 1e-12 || std::abs(map.derivative(n, dom.hi)) > 1e-12) {
        audit.up_class_ok = false;
        audit.problems.push_back("n-th derivative does not vanish at the endpoints");
      }
      for (int i = 0; i < 100; ++i) {
        const double t = dom.lo + (i + 0.5) / 100.0 * dom.length();
        if (!(map.derivative(n, t) > 0.0)) {
          audit.up_class_ok = false;
          audit.problems.push_back(fmt::format("n-th derivative not positive at {}", t));
          break;
        }
      }
    }
  }

  const int orders = std::min(map.derivative_order_available(), 3);
  const double h = 1e-6 * dom.length();
  const auto knots = map.breakpoints(dom.lo, dom.hi);
  for (int k = 1; k <= orders; ++k) {
    for (int i = 0; i < 100; ++i) {
      const double t = dom.lo + (i + 0.5) / 100.0 * dom.length();
      const bool near_knot =
          std::any_of(knots.begin(), knots.end(), [&](double kn) { return std::abs(kn - t) <= 2.0 * h; });
      if (near_knot) continue;
      const double fd = (map.derivative(k - 1, t + h) - map.derivative(k - 1, t - h)) / (2.0 * h);
      const double exact = map.derivative(k, t);
      const double err = std::abs(exact - fd) / std::max(1.0, std::abs(exact));
      audit.worst_derivative_error = std::max(audit.worst_derivative_error, err);
      if (err > 1e-6) {
        if (audit.derivatives_ok)
          audit.problems.push_back(fmt::format("derivative {} disagrees with finite difference at {}", k, t));
        audit.derivatives_ok = false;
      }
    }
  }
  return audit;
}

}  // namespace rsquad
