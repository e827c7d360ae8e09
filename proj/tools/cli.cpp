#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rsquad/bounds.hpp"
#include "rsquad/catalog.hpp"
#include "rsquad/certify.hpp"
#include "rsquad/error.hpp"
#include "rsquad/numeric.hpp"
#include "rsquad/oracle.hpp"
#include "rsquad/rules.hpp"
#include "rsquad/variation.hpp"

namespace rsquad::cli {

namespace {

using nlohmann::json;

/// Flat experiment description shared by the config file and the flags.
struct ExperimentConfig {
  std::optional<std::string> f;
  std::optional<std::string> u;
  double a = 0.0;
  double b = 1.0;
  std::optional<std::string> nodes;
  std::optional<std::string> preset;
  std::string thm = "thm1";
  std::string p = "1";
  std::optional<double> r;
  std::optional<int> n;
  double tol = 1e-9;
  std::optional<std::string> grid;
  std::optional<int> cells;
  std::optional<std::string> format;
  bool sampled = false;
  bool allow_lower_bound = false;
};

/// Flags as given on the command line; unset flags leave the config alone.
struct Flags {
  std::optional<std::string> f, u, nodes, preset, thm, p, grid, out, format, config, dump_config;
  std::optional<double> a, b, r, tol;
  std::optional<int> n, cells;
  bool sampled = false;
  bool allow_lower_bound = false;
};

json to_json(const ExperimentConfig& c) {
  json j{{"a", c.a}, {"b", c.b}, {"thm", c.thm}, {"p", c.p}, {"tol", c.tol}};
  auto put = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("f", c.f);
  put("u", c.u);
  put("nodes", c.nodes);
  put("preset", c.preset);
  put("r", c.r);
  put("n", c.n);
  put("grid", c.grid);
  put("cells", c.cells);
  put("format", c.format);
  if (c.sampled) j["sampled"] = true;
  if (c.allow_lower_bound) j["allow_lower_bound"] = true;
  return j;
}

void merge(ExperimentConfig& c, const json& j) {
  if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "f") c.f = v.get<std::string>();
    else if (key == "u") c.u = v.get<std::string>();
    else if (key == "a") c.a = v.get<double>();
    else if (key == "b") c.b = v.get<double>();
    else if (key == "nodes") c.nodes = v.get<std::string>();
    else if (key == "preset") c.preset = v.get<std::string>();
    else if (key == "thm") c.thm = v.get<std::string>();
    else if (key == "p") c.p = v.is_string() ? v.get<std::string>() : fmt::format("{}", v.get<double>());
    else if (key == "r") c.r = v.get<double>();
    else if (key == "n") c.n = v.get<int>();
    else if (key == "tol") c.tol = v.get<double>();
    else if (key == "grid") c.grid = v.get<std::string>();
    else if (key == "cells") c.cells = v.get<int>();
    else if (key == "format") c.format = v.get<std::string>();
    else if (key == "sampled") c.sampled = v.get<bool>();
    else if (key == "allow_lower_bound") c.allow_lower_bound = v.get<bool>();
    else if (key == "command") continue;
    else throw InvalidArgument(fmt::format("unknown config key '{}'", key));
  }
}

void merge(ExperimentConfig& c, const Flags& fl) {
  if (fl.f) c.f = fl.f;
  if (fl.u) c.u = fl.u;
  if (fl.a) c.a = *fl.a;
  if (fl.b) c.b = *fl.b;
  if (fl.nodes) c.nodes = fl.nodes;
  if (fl.preset) c.preset = fl.preset;
  if (fl.thm) c.thm = *fl.thm;
  if (fl.p) c.p = *fl.p;
  if (fl.r) c.r = fl.r;
  if (fl.n) c.n = fl.n;
  if (fl.tol) c.tol = *fl.tol;
  if (fl.grid) c.grid = fl.grid;
  if (fl.cells) c.cells = fl.cells;
  if (fl.format) c.format = fl.format;
  if (fl.sampled) c.sampled = true;
  if (fl.allow_lower_bound) c.allow_lower_bound = true;
}

double parse_double(const std::string& text, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw InvalidArgument(fmt::format("{}: '{}' is not a number", what, text));
  }
}

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfinity;
  const double p = parse_double(text, "--p");
  if (std::isnan(p) || p < 1.0) throw InvalidArgument(fmt::format("--p must be >= 1 or inf, got {}", text));
  return p;
}

Interval interval_of(const ExperimentConfig& c) {
  Interval iv{c.a, c.b};
  iv.validate();
  return iv;
}

CatalogEntry entry(const std::optional<std::string>& id, std::string_view flag, const Interval& iv) {
  if (!id) throw InvalidArgument(fmt::format("missing --{}", flag));
  return parse_catalog_entry(*id, iv);
}

NodeTriple nodes_of(const ExperimentConfig& c, const Interval& iv) {
  if (c.nodes && c.preset) throw InvalidArgument("give either --nodes or --preset, not both");
  if (c.preset) return preset_nodes(parse_preset(*c.preset), iv);
  if (!c.nodes) throw InvalidArgument("missing --nodes or --preset");
  std::vector<double> v;
  std::stringstream ss(*c.nodes);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_double(item, "--nodes"));
  if (v.size() != 3) throw InvalidArgument("--nodes takes exactly three values t0,x,t1");
  return make_nodes(v[0], v[1], v[2], iv);
}

CertifyOptions certify_options(const ExperimentConfig& c) {
  CertifyOptions o;
  o.p = parse_p(c.p);
  o.r = c.r;
  o.n = c.n;
  o.tol = c.tol;
  o.allow_lower_bound = c.allow_lower_bound;
  return o;
}

json integral_json(const IntegralResult& r) {
  return {{"value", r.value},
          {"error_estimate", r.error_estimate},
          {"method", to_string(r.method)},
          {"evaluations", r.evaluations}};
}

json nodes_json(const NodeTriple& n) {
  return {{"t0", n.t0}, {"x", n.x}, {"t1", n.t1}, {"order", to_string(n.order())}};
}

std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

struct Payload {
  std::string text;
  int code = kOk;
};

Payload cmd_integrate(const ExperimentConfig& c) {
  const auto iv = interval_of(c);
  const auto f = entry(c.f, "f", iv);
  const auto u = entry(c.u, "u", iv);
  OracleOptions o;
  o.tol = c.tol;
  const auto r = rs_integral(f.map, u.map, iv.lo, iv.hi, o);
  json j{{"f", f.id}, {"u", u.id}, {"a", iv.lo}, {"b", iv.hi}};
  j.update(integral_json(r));
  return {j.dump(2) + "\n"};
}

Payload cmd_variation(const ExperimentConfig& c) {
  const auto iv = interval_of(c);
  const auto f = entry(c.f, "f", iv);
  const double p = parse_p(c.p);
  VariationOptions vo;
  vo.force_sampled = c.sampled;
  const auto v = p_variation(f.map, p, iv.lo, iv.hi, vo);
  if (c.format.value_or("json") == "csv") {
    std::string s = "point,value,increment\n";
    for (std::size_t i = 0; i < v.witness_points.size(); ++i) {
      const double inc = i == 0 ? 0.0 : v.witness_values[i] - v.witness_values[i - 1];
      s += fmt::format("{},{},{}\n", csv_number(v.witness_points[i]), csv_number(v.witness_values[i]),
                       csv_number(inc));
    }
    return {s};
  }
  json witness = json::array();
  for (std::size_t i = 0; i < v.witness_points.size(); ++i)
    witness.push_back({{"point", v.witness_points[i]}, {"value", v.witness_values[i]}});
  json j{{"map", f.id},
         {"p", std::isinf(p) ? json("inf") : json(p)},
         {"value", v.value},
         {"method", to_string(v.method)},
         {"exact", v.is_exact()},
         {"lo", v.lo},
         {"hi", v.hi},
         {"oscillation", oscillation(f.map, iv.lo, iv.hi).value},
         {"witness", witness}};
  if (f.map.derivative_order_available() >= 1 && f.map.kind() != MapKind::step)
    j["derivative_norm"] = derivative_norm(f.map, 1, p, iv.lo, iv.hi).value;
  return {j.dump(2) + "\n"};
}

Payload cmd_rule(const ExperimentConfig& c) {
  const auto iv = interval_of(c);
  const auto f = entry(c.f, "f", iv);
  const auto u = entry(c.u, "u", iv);
  if (c.cells) {
    const auto spec = parse_preset(c.preset.value_or("half-nodes"));
    const auto res = composite_rule(f.map, u.map, iv, *c.cells, spec, c.tol);
    json cells = json::array();
    for (std::size_t i = 0; i < res.cells.size(); ++i) {
      auto n = nodes_json(res.cells[i]);
      n["a"] = res.cells[i].interval.lo;
      n["b"] = res.cells[i].interval.hi;
      n["q"] = res.cell_q[i];
      cells.push_back(n);
    }
    json j{{"f", f.id},
           {"u", u.id},
           {"preset", format_preset(spec)},
           {"cells", *c.cells},
           {"q_total", res.q_total},
           {"integral", integral_json(res.oracle)},
           {"remainder_total", res.remainder_total},
           {"per_cell", cells}};
    return {j.dump(2) + "\n"};
  }
  const auto nodes = nodes_of(c, iv);
  const auto res = remainder(f.map, u.map, nodes, c.tol);
  json j{{"f", f.id},
         {"u", u.id},
         {"nodes", nodes_json(nodes)},
         {"q", res.q_value},
         {"integral", integral_json(res.oracle)},
         {"remainder", res.remainder}};
  return {j.dump(2) + "\n"};
}

Payload cmd_certify(const ExperimentConfig& c) {
  const auto iv = interval_of(c);
  const auto f = entry(c.f, "f", iv);
  const auto u = entry(c.u, "u", iv);
  const auto cert = certify_one(f, u, nodes_of(c, iv), parse_theorem_id(c.thm), certify_options(c));
  return {to_json(cert).dump(2) + "\n", cert.verdict == Verdict::violated ? kViolation : kOk};
}

Payload cmd_sweep(const ExperimentConfig& c, std::ostream& err) {
  const auto iv = interval_of(c);
  const auto f = entry(c.f, "f", iv);
  const auto u = entry(c.u, "u", iv);
  const auto grid = c.grid ? parse_grid(*c.grid, iv) : default_grid(iv);
  const auto report = sweep(f, u, parse_theorem_id(c.thm), grid, certify_options(c));
  const auto& s = report.summary;
  err << fmt::format("{} points, {} holds, {} equality, {} violated, {} errors, min slack {}\n", s.points, s.holds,
                     s.equalities, s.violations, s.errors, s.min_slack);
  Payload out;
  out.code = s.violations > 0 ? kViolation : kOk;
  if (c.format.value_or("csv") == "json") {
    out.text = to_json(report, true).dump(2) + "\n";
  } else {
    std::ostringstream os;
    write_sweep_csv(report, os);
    out.text = os.str();
  }
  return out;
}

Payload cmd_sharpness(const ExperimentConfig& c) {
  const auto certs = sharpness_suite({c.r.value_or(0.5)}, c.tol);
  json arr = json::array();
  int code = kOk;
  for (const auto& cert : certs) {
    arr.push_back(to_json(cert));
    if (cert.verdict == Verdict::violated) code = kViolation;
  }
  return {arr.dump(2) + "\n", code};
}

void add_common(CLI::App* app, Flags& fl) {
  app->add_option("--f", fl.f, "integrand catalog id, e.g. power:r=0.5");
  app->add_option("--u", fl.u, "integrator catalog id, e.g. step:points=0;left=-1;right=0");
  app->add_option("--a", fl.a, "left end of the interval (default 0)");
  app->add_option("--b", fl.b, "right end of the interval (default 1)");
  app->add_option("--nodes", fl.nodes, "t0,x,t1");
  app->add_option("--preset", fl.preset, "trapezoid[:x] | midpoint[:t0,t1] | symmetric[:y] | half-nodes[:x] | quartile");
  app->add_option("--thm", fl.thm, "thm1 thm1-safe thm2 thm3 thm4 thm4-safe thm5 lemma1 lemma2 cor4 eq3.6 eq3.7");
  app->add_option("--p", fl.p, "variation / norm exponent (>= 1 or inf)");
  app->add_option("--r", fl.r, "Hoelder order to use (sharpness: the exponent r)");
  app->add_option("--n", fl.n, "derivative order for thm3");
  app->add_option("--tol", fl.tol, "oracle tolerance");
  app->add_option("--grid", fl.grid, "t0:lo:hi:steps,x:lo:hi:steps,t1:lo:hi:steps");
  app->add_option("--cells", fl.cells, "composite rule with this many uniform cells");
  app->add_option("--out", fl.out, "write the payload to this file");
  app->add_option("--format", fl.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--config", fl.config, "flat JSON config; flags override it");
  app->add_option("--dump-config", fl.dump_config, "write the resolved config to this file");
  app->add_flag("--sampled", fl.sampled, "variation from a uniform sample (partition lower bound)");
  app->add_flag("--allow-lower-bound", fl.allow_lower_bound, "let bounds use partition lower bounds");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-point Riemann-Stieltjes quadrature: rules, error bounds and certification", "rsquad"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"integrate", "reference value of the integral of f du"},
      {"variation", "p-variation of --f over [a, b]"},
      {"rule", "two-point rule and remainder (composite with --cells)"},
      {"certify", "check one bound at one node triple"},
      {"sweep", "certify a bound over a node grid"},
      {"sharpness", "run the extremal configurations"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  try {
    ExperimentConfig cfg;
    if (const char* env = std::getenv("RSQUAD_TOL"); env && *env) cfg.tol = parse_double(env, "RSQUAD_TOL");
    if (flags.config) {
      std::ifstream in(*flags.config);
      if (!in) throw InvalidArgument(fmt::format("cannot read config file {}", *flags.config));
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw InvalidArgument(fmt::format("config file {}: {}", *flags.config, e.what()));
      }
      merge(cfg, j);
    }
    merge(cfg, flags);
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw InvalidArgument("tolerance must be positive and finite");

    if (flags.dump_config) {
      std::ofstream dump(*flags.dump_config);
      if (!dump) throw InvalidArgument(fmt::format("cannot write {}", *flags.dump_config));
      auto j = to_json(cfg);
      j["command"] = command;
      dump << j.dump(2) << "\n";
    }

    Payload payload;
    if (command == "integrate") payload = cmd_integrate(cfg);
    else if (command == "variation") payload = cmd_variation(cfg);
    else if (command == "rule") payload = cmd_rule(cfg);
    else if (command == "certify") payload = cmd_certify(cfg);
    else if (command == "sweep") payload = cmd_sweep(cfg, err);
    else payload = cmd_sharpness(cfg);

    if (flags.out) {
      std::ofstream file(*flags.out);
      if (!file) throw InvalidArgument(fmt::format("cannot write {}", *flags.out));
      file << payload.text;
    } else {
      out << payload.text;
    }
    return payload.code;
  } catch (const OracleNonConvergence& e) {
    err << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace rsquad::cli
