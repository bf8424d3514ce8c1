#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "ttt/coxeter.hpp"
#include "ttt/errors.hpp"
#include "ttt/minimal.hpp"
#include "ttt/qring.hpp"
#include "ttt/stokesdata.hpp"
#include "ttt/toda.hpp"

namespace ttt::cli {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Output formatting

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_json(const Json& v, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (const auto& [key, val] : v.items()) {
        if (!first) out += indent > 0 ? ",\n" : ", ";
        first = false;
        out += pad + Json(key).dump() + ": ";
        emit_json(val, out, indent, depth + 1);
      }
      out += nl + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : v) flat = flat && !e.is_structured();
      out += "[";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat || indent == 0 ? ", " : ",";
        if (!flat && indent > 0) out += "\n" + pad;
        first = false;
        emit_json(e, out, indent, depth + 1);
      }
      if (!flat && indent > 0) out += "\n" + close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? fmt17(x) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

std::string to_json_text(const Json& v) {
  std::string s;
  emit_json(v, s, 2, 0);
  s += "\n";
  return s;
}

std::string to_text(const Json& outputs) {
  std::string s;
  for (const auto& [key, val] : outputs.items()) {
    std::string body;
    emit_json(val, body, 0, 0);
    s += key + ": " + body + "\n";
  }
  return s;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open output file '" + path + "'");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw ValidationError("failed writing output file '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

// ---------------------------------------------------------------------------
// Value conversions

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  return {v.at(0).get<double>(), v.at(1).get<double>()};
}

// "x", "x,y" or "x+yi" / "x-yi" / "yi".
Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '(' && c != ')') s += c;
  if (s.empty()) throw ValidationError("empty complex number");
  try {
    if (const auto comma = s.find(','); comma != std::string::npos)
      return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    if (s.back() == 'i' || s.back() == 'j') {
      s.pop_back();
      std::size_t split = std::string::npos;
      for (std::size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
          split = i;
          break;
        }
      auto coef = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
      };
      if (split == std::string::npos) return {0.0, coef(s)};
      return {std::stod(s.substr(0, split)), coef(s.substr(split))};
    }
    std::size_t used = 0;
    const double re = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return {re, 0.0};
  } catch (const std::logic_error&) {
    throw ValidationError("cannot parse complex number '" + text + "'");
  }
}

Json rational_strings(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Json doubles(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

template <class T>
std::vector<T> vec(const Json& in, const char* key) {
  return in.at(key).get<std::vector<T>>();
}

// ---------------------------------------------------------------------------
// Commands. Each one reads its parameters from the `inputs` object only, so
// an emitted JSON document can be replayed.

struct Artifact {
  Json outputs = Json::object();
  Json diagnostics = Json::object();
  std::string csv;
  std::string svg;
};

using Runner = std::function<Artifact(const Json&)>;

struct Command {
  std::vector<std::string> formats;
  Runner run;
};

qring::JFunction jfunction_from(const Json& in) {
  qring::JFunction jf;
  jf.n = in.at("n").get<int>();
  jf.hbar = complex_from(in.at("hbar"));
  jf.K = in.at("K").get<int>();
  jf.branch = in.at("branch").get<int>();
  if (jf.n < 1) throw ConstraintViolation(0, ConstraintKind::Range, "n must be at least 1");
  if (jf.K < 0) throw ConstraintViolation(0, ConstraintKind::Range, "K must be nonnegative");
  return jf;
}

Artifact qde_verify(const Json& in) {
  const auto jf = jfunction_from(in);
  const Complex q = complex_from(in.at("q"));
  const double tol = in.at("tol").get<double>();
  Artifact a;
  const double residual = qring::qde_residual(jf, q);
  const double bound = qring::qde_tail_bound(jf, q);
  a.outputs["residual"] = residual;
  a.outputs["tail_bound"] = bound;
  a.outputs["verified"] = residual < tol;
  Json symbol = Json::array();
  for (const auto& [key, c] : qring::semiclassical_symbol(qring::cpn_operator(jf.n)))
    symbol.push_back(Json{{"b_power", key.first}, {"q_power", key.second}, {"coefficient", to_string(c)}});
  a.diagnostics["operator_symbol"] = symbol;
  return a;
}

Artifact jfun_eval(const Json& in) {
  const auto jf = jfunction_from(in);
  const Complex q = complex_from(in.at("q"));
  Artifact a;
  Json coeffs = Json::array();
  const auto j = qring::j_evaluate(jf, q);
  for (const auto& c : j.coefficients()) coeffs.push_back(complex_json(c));
  a.outputs["coefficients"] = coeffs;
  a.diagnostics["tail_bound"] = qring::qde_tail_bound(jf, q);
  return a;
}

Artifact gamma_class_cmd(const Json& in) {
  const int n = in.at("n").get<int>();
  if (n < 1) throw ConstraintViolation(0, ConstraintKind::Range, "n must be at least 1");
  Artifact a;
  Json coeffs = Json::array();
  const auto g = qring::gamma_class(n);
  for (const auto& c : g.coefficients()) coeffs.push_back(c.real());
  a.outputs["coefficients"] = coeffs;
  return a;
}

stokes::AsymptoticData asymptotic_from(const Json& in) {
  const int n = in.at("n").get<int>();
  if (in.contains("gamma")) return stokes::validate_gamma(n, vec<double>(in, "gamma"));
  return stokes::m_to_gamma(n, vec<double>(in, "m"));
}

Artifact stokes_from_gamma_cmd(const Json& in) {
  const auto data = asymptotic_from(in);
  Artifact a;
  a.outputs["s"] = doubles(stokes::stokes_from_gamma(data).s);
  Json x = Json::array();
  for (const auto& z : stokes::stokes_exponentials(data)) x.push_back(complex_json(z));
  a.outputs["exponentials"] = x;
  a.diagnostics["m"] = doubles(data.m());
  a.diagnostics["strictly_admissible"] = stokes::is_strictly_admissible(data);
  a.diagnostics["alcove_point"] = doubles(stokes::alcove_point(data.m()));
  return a;
}

Artifact stokes_steinberg_cmd(const Json& in) {
  stokes::StokesParameters s;
  if (in.contains("s")) {
    s.n = in.at("n").get<int>();
    s.s = vec<double>(in, "s");
    if (s.n < 1 || s.s.size() != static_cast<std::size_t>(s.n))
      throw ConstraintViolation(s.s.size(), ConstraintKind::Length, "expected n Stokes parameters");
  } else {
    s = stokes::stokes_from_gamma(asymptotic_from(in));
  }
  const auto M = stokes::steinberg_matrix(s);
  Artifact a;
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.entries.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.entries.cols(); ++j) row.push_back(M.entries(i, j).real());
    rows.push_back(row);
  }
  a.outputs["matrix"] = rows;
  Json eig = Json::array();
  for (Eigen::Index i = 0; i < M.eigenvalues().size(); ++i) eig.push_back(complex_json(M.eigenvalues()(i)));
  a.outputs["eigenvalues"] = eig;
  a.outputs["s"] = doubles(s.s);
  Json back = Json::array();
  for (const auto& z : M.stokes_from_characteristic_polynomial()) back.push_back(z.real());
  a.diagnostics["s_from_characteristic_polynomial"] = back;
  return a;
}

Artifact convert_k_to_m(const Json& in) {
  const int n = in.at("n").get<int>();
  const int N = in.at("N").get<int>();
  const auto k = vec<int>(in, "k");
  const std::string conv = in.at("convention").get<std::string>();
  stokes::HiggsConvention c = stokes::HiggsConvention::MandK;
  if (conv == "inline-gamma")
    c = stokes::HiggsConvention::InlineGamma;
  else if (conv != "mandk")
    throw ValidationError("unknown convention '" + conv + "' (expected mandk or inline-gamma)");
  const auto h = stokes::validate_higgs(n, N, k);
  const auto m = stokes::higgs_to_m(h, c);
  const auto md = to_double(std::span<const Rational>(m));
  Artifact a;
  a.outputs["m"] = rational_strings(m);
  a.outputs["m_float"] = doubles(md);
  std::vector<Rational> gamma;
  for (const auto& x : m) gamma.push_back(-2 * x);
  a.outputs["gamma"] = rational_strings(gamma);
  const auto p = stokes::alcove_point(md);
  a.diagnostics["alcove_point"] = doubles(p);
  a.diagnostics["in_fundamental_alcove"] = stokes::in_fundamental_alcove(p);
  return a;
}

toda::SolverOptions solver_options_from(const Json& in) {
  toda::SolverOptions o;
  o.epsilon = in.at("eps").get<double>();
  o.outer_radius = in.at("R").get<double>();
  o.nodes = in.at("nodes").get<std::size_t>();
  o.tol = in.at("tol").get<double>();
  o.max_iterations = in.at("max_iterations").get<int>();
  o.richardson_check = in.at("richardson").get<bool>();
  o.richardson_tol = in.at("richardson_tol").get<double>();
  o.continuation_steps = in.at("continuation_steps").get<int>();
  o.boundary_epsilon = in.at("boundary_eps").get<double>();
  return o;
}

std::string field_csv(const toda::RadialGrid& grid, const toda::Field& w) {
  std::string s = "r";
  for (Eigen::Index i = 0; i < w.rows(); ++i) s += ",w" + std::to_string(i);
  s += "\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    s += fmt17(grid[j]);
    for (Eigen::Index i = 0; i < w.rows(); ++i) s += "," + fmt17(w(i, static_cast<Eigen::Index>(j)));
    s += "\n";
  }
  return s;
}

Artifact toda_solve(const Json& in) {
  const auto data = asymptotic_from(in);
  const auto sol = toda::solve_global(data, solver_options_from(in));
  Artifact a;
  Json s = Json::array();
  Json spread = Json::array();
  for (int k = 1; k <= sol.n; ++k) {
    try {
      const auto fit = toda::extract_stokes(sol, k);
      s.push_back(fit.s);
      spread.push_back(fit.relative_spread);
    } catch (const SignalBelowNoise& e) {
      s.push_back(nullptr);
      spread.push_back(e.what());
    }
  }
  a.outputs["s"] = s;
  a.outputs["s_exact"] = doubles(stokes::stokes_from_gamma(data).s);
  a.outputs["r"] = doubles(sol.grid.nodes());
  Json w = Json::array();
  for (Eigen::Index i = 0; i < sol.w.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < sol.w.cols(); ++j) row.push_back(sol.w(i, j));
    w.push_back(row);
  }
  a.outputs["w"] = w;
  a.diagnostics["iterations"] = sol.iterations;
  a.diagnostics["residual"] = sol.residual;
  a.diagnostics["boundary_case"] = sol.boundary_case;
  a.diagnostics["used_continuation"] = sol.used_continuation;
  a.diagnostics["richardson_discrepancy"] =
      sol.richardson_discrepancy ? Json(*sol.richardson_discrepancy) : Json(nullptr);
  a.diagnostics["fit_relative_spread"] = spread;
  a.csv = field_csv(sol.grid, sol.w);
  return a;
}

toda::RadialSolution read_field_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open input file '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw ValidationError("empty CSV file '" + path + "'");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 3 || header[0] != "r") throw ValidationError("CSV header must be r,w0,...,wn");
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] != "w" + std::to_string(i - 1)) throw ValidationError("CSV header must be r,w0,...,wn");
  const int n = static_cast<int>(header.size()) - 2;
  std::vector<double> r;
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(n) + 1);
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    try {
      while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    } catch (const std::logic_error&) {
      throw ValidationError("bad number on CSV line " + std::to_string(lineno));
    }
    if (vals.size() != header.size()) throw ValidationError("wrong column count on CSV line " + std::to_string(lineno));
    r.push_back(vals[0]);
    for (int i = 0; i <= n; ++i) cols[static_cast<std::size_t>(i)].push_back(vals[static_cast<std::size_t>(i) + 1]);
  }
  toda::RadialSolution sol;
  sol.n = n;
  sol.grid = toda::RadialGrid(r);
  sol.w.resize(n + 1, static_cast<Eigen::Index>(r.size()));
  for (int i = 0; i <= n; ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      sol.w(i, static_cast<Eigen::Index>(j)) = cols[static_cast<std::size_t>(i)][j];
  return sol;
}

Artifact toda_extract(const Json& in) {
  const auto sol = read_field_csv(in.at("in").get<std::string>());
  const std::string model_name = in.at("model").get<std::string>();
  toda::TailModel model = toda::TailModel::Bessel;
  if (model_name == "leading")
    model = toda::TailModel::Leading;
  else if (model_name != "bessel")
    throw ValidationError("unknown tail model '" + model_name + "' (expected bessel or leading)");
  std::vector<int> ks;
  if (in.at("k").is_null())
    for (int k = 1; k <= sol.n; ++k) ks.push_back(k);
  else
    ks.push_back(in.at("k").get<int>());
  std::optional<toda::FitWindow> window;
  if (!in.at("r_min").is_null() || !in.at("r_max").is_null()) {
    toda::FitWindow wdef = toda::default_window(sol, ks.front());
    window = toda::FitWindow{in.at("r_min").is_null() ? wdef.r_min : in.at("r_min").get<double>(),
                             in.at("r_max").is_null() ? wdef.r_max : in.at("r_max").get<double>()};
  }
  Artifact a;
  Json s = Json::array();
  Json fits = Json::array();
  for (int k : ks) {
    const auto fit = toda::extract_stokes(sol, k, window, model);
    s.push_back(fit.s);
    fits.push_back(Json{{"k", k},
                        {"relative_spread", fit.relative_spread},
                        {"r_min", fit.window.r_min},
                        {"r_max", fit.window.r_max},
                        {"samples", fit.samples}});
  }
  a.outputs["k"] = ks;
  a.outputs["s"] = s;
  a.diagnostics["fits"] = fits;
  return a;
}

std::string root_label(const coxeter::Root& r) { return "x" + std::to_string(r.i) + "-x" + std::to_string(r.j); }

std::string coxeter_svg(const coxeter::CoxeterProjection& p) {
  const double size = 400.0;
  const double c = size / 2.0;
  double radius = 0.0;
  for (const auto& r : p.roots) radius = std::max(radius, std::hypot(r.point[0], r.point[1]));
  const double scale = radius > 0.0 ? 0.42 * size / radius : 1.0;
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  s += "<title>A" + std::to_string(p.n) + " roots in the Coxeter plane</title>\n";
  s += "<line x1=\"0\" y1=\"200\" x2=\"400\" y2=\"200\" stroke=\"#ccc\"/>\n";
  s += "<line x1=\"200\" y1=\"0\" x2=\"200\" y2=\"400\" stroke=\"#ccc\"/>\n";
  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"};
  for (const auto& r : p.roots) {
    const double x = c + scale * r.point[0];
    const double y = c - scale * r.point[1];
    s += "<circle class=\"orbit-" + std::to_string(r.orbit) + "\" data-orbit=\"" + std::to_string(r.orbit) +
         "\" cx=\"" + fmt17(x) + "\" cy=\"" + fmt17(y) + "\" r=\"5\" fill=\"" + palette[r.orbit % 8] +
         "\"><title>" + root_label(r.label) + "</title></circle>\n";
  }
  s += "</svg>\n";
  return s;
}

Artifact coxeter_plane_cmd(const Json& in) {
  const auto p = coxeter::coxeter_plane(in.at("n").get<int>());
  Artifact a;
  a.outputs["u"] = doubles(std::span<const double>(p.u.data(), static_cast<std::size_t>(p.u.size())));
  a.outputs["v"] = doubles(std::span<const double>(p.v.data(), static_cast<std::size_t>(p.v.size())));
  Json roots = Json::array();
  for (const auto& r : p.roots)
    roots.push_back(Json{{"root", root_label(r.label)},
                         {"point", Json::array({r.point[0], r.point[1]})},
                         {"orbit", r.orbit},
                         {"angle", r.angle}});
  a.outputs["roots"] = roots;
  a.outputs["orbit_count"] = p.orbit_count;
  a.svg = coxeter_svg(p);
  return a;
}

Artifact solitons_cmd(const Json& in) {
  const int n = in.at("n").get<int>();
  const auto spec = coxeter::soliton_spectrum(n, in.at("rep").get<int>());
  Artifact a;
  Json pairs = Json::array();
  for (const auto& p : spec.pairs)
    pairs.push_back(Json{{"from", spec.weights[static_cast<std::size_t>(p.from)]},
                         {"to", spec.weights[static_cast<std::size_t>(p.to)]},
                         {"root", root_label(p.root)},
                         {"mass", p.mass},
                         {"orbit", p.orbit},
                         {"particle", p.particle}});
  Json counts = Json::array();
  for (int d = 1; d <= (n + 1) / 2; ++d)
    counts.push_back(Json{{"particle", d}, {"mass", coxeter::soliton_mass(n, d)}, {"count", spec.count(d)}});
  a.outputs["counts"] = counts;
  a.outputs["pairs"] = pairs;
  a.diagnostics["vacua"] = spec.weights.size();
  return a;
}

Artifact minimal_enumerate(const Json& in) {
  const auto list = minimal::enumerate_fixed_points(in.at("n").get<int>(), in.at("N").get<int>());
  Artifact a;
  Json tuples = Json::array();
  for (const auto& f : list) tuples.push_back(f.k);
  a.outputs["count"] = list.size();
  a.outputs["k"] = tuples;
  return a;
}

Artifact minimal_ceff(const Json& in) {
  const auto f = minimal::validate_fixed_point(in.at("n").get<int>(), in.at("N").get<int>(), vec<int>(in, "k"));
  const auto c = minimal::ceff(f);
  const auto w = minimal::dominant_weight(f);
  Artifact a;
  a.outputs["c_eff"] = c.value();
  a.outputs["c_eff_exact"] = to_string(c.via_m);
  a.outputs["m"] = rational_strings(stokes::solve_mandk(f.n, f.N, f.k));
  a.outputs["weight"] = w.coefficients;
  a.outputs["level"] = w.level();
  a.diagnostics["via_weight"] = to_string(c.via_weight);
  a.diagnostics["via_m"] = to_string(c.via_m);
  a.diagnostics["level_bound"] = w.level_bound;
  a.diagnostics["weight_identity"] = minimal::weight_identity_holds(f);
  return a;
}

Artifact minimal_alcove_check(const Json& in) {
  const auto r = minimal::alcove_identity_check(in.at("n").get<int>(), in.at("l").get<int>());
  Artifact a;
  a.outputs["equal"] = r.equal();
  a.outputs["shifted_level_weights"] = r.shifted_level_weights.size();
  a.outputs["interior_points"] = r.interior_points.size();
  a.diagnostics["only_shifted"] = r.only_shifted;
  a.diagnostics["only_interior"] = r.only_interior;
  return a;
}

const std::map<std::string, Command>& registry() {
  static const std::map<std::string, Command> table{
      {"qde verify", {{"json", "text"}, qde_verify}},
      {"jfun eval", {{"json", "text"}, jfun_eval}},
      {"gamma-class", {{"json", "text"}, gamma_class_cmd}},
      {"stokes from-gamma", {{"json", "text"}, stokes_from_gamma_cmd}},
      {"stokes steinberg", {{"json", "text"}, stokes_steinberg_cmd}},
      {"convert k-to-m", {{"json", "text"}, convert_k_to_m}},
      {"toda solve", {{"json", "csv", "text"}, toda_solve}},
      {"toda extract", {{"json", "text"}, toda_extract}},
      {"coxeter plane", {{"json", "svg", "text"}, coxeter_plane_cmd}},
      {"solitons", {{"json", "text"}, solitons_cmd}},
      {"minimal enumerate", {{"json", "text"}, minimal_enumerate}},
      {"minimal ceff", {{"json", "text"}, minimal_ceff}},
      {"minimal alcove-check", {{"json", "text"}, minimal_alcove_check}},
  };
  return table;
}

class UsageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

std::string render(const std::string& name, const Json& inputs, const Artifact& a, const std::string& format) {
  const auto& cmd = registry().at(name);
  if (std::find(cmd.formats.begin(), cmd.formats.end(), format) == cmd.formats.end())
    throw UsageError("--out: format '" + format + "' is not available for '" + name + "'");
  if (format == "csv") return a.csv;
  if (format == "svg") return a.svg;
  if (format == "text") return to_text(a.outputs);
  Json doc = Json::object();
  doc["inputs"] = inputs;
  doc["outputs"] = a.outputs;
  doc["diagnostics"] = a.diagnostics;
  return to_json_text(doc);
}

// ---------------------------------------------------------------------------
// Argument parsing

struct Leaf {
  std::string name;
  CLI::App* app = nullptr;
  std::function<Json()> collect;
};

struct Parsed {
  std::string format = "json";
  std::string output;
};

void add_output_flags(CLI::App* app, Parsed& p) {
  app->add_option("--out", p.format, "Output format")->check(CLI::IsMember({"json", "csv", "svg", "text"}));
  app->add_option("-o,--output", p.output, "Write to this path instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ttt: quantum cohomology, Stokes data and tt*-Toda numerics", "ttt"};
  app.require_subcommand(1);
  Parsed parsed;
  std::vector<Leaf> leaves;

  // Storage for every flag; unused fields stay at their defaults.
  struct Vars {
    int n = 1;
    int N = 0;
    int K = 25;
    int branch = 0;
    int l = 0;
    int rep = 1;
    std::string hbar = "1";
    std::string q = "1";
    double tol = 1e-10;
    std::vector<double> gamma, m, s;
    std::vector<int> k;
    std::string convention = "mandk";
    toda::SolverOptions solver;
    bool no_richardson = false;
    std::string in, model = "bessel";
    std::optional<int> extract_k;
    std::optional<double> r_min, r_max;
    std::string replay;
  } v;
  v.solver.tol = 1e-9;

  auto leaf = [&](CLI::App* parent, const std::string& sub, const std::string& name, const std::string& help,
                  std::function<Json()> collect) {
    CLI::App* a = parent->add_subcommand(sub, help);
    add_output_flags(a, parsed);
    leaves.push_back({name, a, std::move(collect)});
    return a;
  };
  auto with_command = [](const std::string& name, Json j) {
    Json out = Json::object();
    out["command"] = name;
    for (auto& [key, val] : j.items()) out[key] = val;
    return out;
  };

  auto jf_inputs = [&](const std::string& name, bool with_tol) {
    Json j{{"n", v.n},
           {"hbar", complex_json(parse_complex(v.hbar))},
           {"q", complex_json(parse_complex(v.q))},
           {"K", v.K},
           {"branch", v.branch}};
    if (with_tol) j["tol"] = v.tol;
    return with_command(name, j);
  };
  auto jf_flags = [&](CLI::App* a) {
    a->add_option("--n", v.n, "Dimension of CP^n")->required();
    a->add_option("--hbar", v.hbar, "hbar as x, x,y or x+yi");
    a->add_option("--q", v.q, "q as x, x,y or x+yi");
    a->add_option("--K", v.K, "Series truncation order");
    a->add_option("--branch", v.branch, "Branch of log q");
  };

  CLI::App* qde = app.add_subcommand("qde", "Quantum differential equation");
  qde->require_subcommand(1);
  {
    auto* a = leaf(qde, "verify", "qde verify", "Residual of the J-function in the QDE",
                   [&] { return jf_inputs("qde verify", true); });
    jf_flags(a);
    a->add_option("--tol", v.tol, "Residual threshold");
  }

  CLI::App* jfun = app.add_subcommand("jfun", "J-function");
  jfun->require_subcommand(1);
  jf_flags(leaf(jfun, "eval", "jfun eval", "Evaluate the J-function", [&] { return jf_inputs("jfun eval", false); }));

  leaf(&app, "gamma-class", "gamma-class", "Gamma class of CP^n", [&] {
    return with_command("gamma-class", Json{{"n", v.n}});
  })->add_option("--n", v.n)->required();

  auto gamma_or_m = [&](CLI::App* a) {
    a->add_option("--n", v.n)->required();
    auto* g = a->add_option("--gamma", v.gamma, "Asymptotic data gamma_0..gamma_n")->delimiter(',');
    auto* m = a->add_option("--m", v.m, "Asymptotic data m_0..m_n")->delimiter(',');
    g->excludes(m);
    return std::pair{g, m};
  };
  auto gamma_or_m_inputs = [&](const std::string& name, const std::pair<CLI::Option*, CLI::Option*>& opts) {
    Json j{{"n", v.n}};
    if (opts.second->count() > 0)
      j["m"] = v.m;
    else if (opts.first->count() > 0)
      j["gamma"] = v.gamma;
    else
      throw UsageError("one of --gamma or --m is required");
    return with_command(name, j);
  };

  CLI::App* stokes_app = app.add_subcommand("stokes", "Stokes data");
  stokes_app->require_subcommand(1);
  {
    auto* a = leaf(stokes_app, "from-gamma", "stokes from-gamma", "Stokes parameters from asymptotic data", nullptr);
    auto opts = gamma_or_m(a);
    leaves.back().collect = [&, opts] { return gamma_or_m_inputs("stokes from-gamma", opts); };
  }
  {
    auto* a = leaf(stokes_app, "steinberg", "stokes steinberg", "Steinberg cross-section matrix", nullptr);
    auto opts = gamma_or_m(a);
    auto* s = a->add_option("--s", v.s, "Stokes parameters s_1..s_n")->delimiter(',');
    s->excludes(opts.first)->excludes(opts.second);
    leaves.back().collect = [&, opts, s] {
      if (s->count() > 0) return with_command("stokes steinberg", Json{{"n", v.n}, {"s", v.s}});
      return gamma_or_m_inputs("stokes steinberg", opts);
    };
  }

  CLI::App* convert = app.add_subcommand("convert", "Conversions between parametrizations");
  convert->require_subcommand(1);
  {
    auto* a = leaf(convert, "k-to-m", "convert k-to-m", "Higgs exponents to asymptotic data", [&] {
      return with_command("convert k-to-m", Json{{"n", v.n}, {"N", v.N}, {"k", v.k}, {"convention", v.convention}});
    });
    a->add_option("--n", v.n)->required();
    a->add_option("--N", v.N)->required();
    a->add_option("--k", v.k, "Exponents k_0..k_n")->delimiter(',')->required();
    a->add_option("--convention", v.convention, "mandk or inline-gamma");
  }

  CLI::App* toda_app = app.add_subcommand("toda", "Radial tt*-Toda solver");
  toda_app->require_subcommand(1);
  {
    auto* a = leaf(toda_app, "solve", "toda solve", "Solve the boundary-value problem", nullptr);
    auto opts = gamma_or_m(a);
    a->add_option("--eps", v.solver.epsilon, "Inner radius");
    a->add_option("--R", v.solver.outer_radius, "Outer radius (0 selects 12/L_1)");
    a->add_option("--nodes", v.solver.nodes, "Grid nodes");
    a->add_option("--tol", v.solver.tol, "Newton tolerance");
    a->add_option("--max-iter", v.solver.max_iterations, "Newton iteration limit");
    a->add_flag("--no-richardson", v.no_richardson, "Skip the coarse-grid comparison");
    a->add_option("--richardson-tol", v.solver.richardson_tol, "Allowed coarse/fine discrepancy");
    a->add_option("--continuation-steps", v.solver.continuation_steps, "Initial continuation steps");
    a->add_option("--boundary-eps", v.solver.boundary_epsilon, "Inner radius for boundary data");
    leaves.back().collect = [&, opts] {
      Json j = gamma_or_m_inputs("toda solve", opts);
      j["eps"] = v.solver.epsilon;
      j["R"] = v.solver.outer_radius;
      j["nodes"] = v.solver.nodes;
      j["tol"] = v.solver.tol;
      j["max_iterations"] = v.solver.max_iterations;
      j["richardson"] = !v.no_richardson;
      j["richardson_tol"] = v.solver.richardson_tol;
      j["continuation_steps"] = v.solver.continuation_steps;
      j["boundary_eps"] = v.solver.boundary_epsilon;
      return j;
    };
  }
  {
    auto* a = leaf(toda_app, "extract", "toda extract", "Fit Stokes parameters to a solution CSV", [&] {
      Json j{{"in", v.in}, {"k", v.extract_k ? Json(*v.extract_k) : Json(nullptr)}, {"model", v.model}};
      j["r_min"] = v.r_min ? Json(*v.r_min) : Json(nullptr);
      j["r_max"] = v.r_max ? Json(*v.r_max) : Json(nullptr);
      return with_command("toda extract", j);
    });
    a->add_option("--in", v.in, "CSV written by 'toda solve --out csv'")->required();
    a->add_option("--k", v.extract_k, "Stokes index (all when omitted)");
    a->add_option("--model", v.model, "Tail model: bessel or leading");
    a->add_option("--r-min", v.r_min, "Fit window start");
    a->add_option("--r-max", v.r_max, "Fit window end");
  }

  CLI::App* cox = app.add_subcommand("coxeter", "Coxeter element");
  cox->require_subcommand(1);
  leaf(cox, "plane", "coxeter plane", "Project the roots onto the Coxeter plane", [&] {
    return with_command("coxeter plane", Json{{"n", v.n}});
  })->add_option("--n", v.n)->required();

  {
    auto* a = leaf(&app, "solitons", "solitons", "Soliton spectrum of a fundamental representation", [&] {
      return with_command("solitons", Json{{"n", v.n}, {"rep", v.rep}});
    });
    a->add_option("--n", v.n)->required();
    a->add_option("--rep", v.rep, "Exterior power k")->required();
  }

  CLI::App* minimal_app = app.add_subcommand("minimal", "Fixed points and central charges");
  minimal_app->require_subcommand(1);
  {
    auto* a = leaf(minimal_app, "enumerate", "minimal enumerate", "List fixed points", [&] {
      return with_command("minimal enumerate", Json{{"n", v.n}, {"N", v.N}});
    });
    a->add_option("--n", v.n)->required();
    a->add_option("--N", v.N)->required();
  }
  {
    auto* a = leaf(minimal_app, "ceff", "minimal ceff", "Effective central charge", [&] {
      return with_command("minimal ceff", Json{{"n", v.n}, {"N", v.N}, {"k", v.k}});
    });
    a->add_option("--n", v.n)->required();
    a->add_option("--N", v.N)->required();
    a->add_option("--k", v.k, "Exponents k_0..k_n")->delimiter(',')->required();
  }
  {
    auto* a = leaf(minimal_app, "alcove-check", "minimal alcove-check", "Check the alcove identity", [&] {
      return with_command("minimal alcove-check", Json{{"n", v.n}, {"l", v.l}});
    });
    a->add_option("--n", v.n)->required();
    a->add_option("--l", v.l, "Level")->required();
  }

  CLI::App* replay = app.add_subcommand("replay", "Re-run from the inputs of an emitted JSON document");
  replay->add_option("file", v.replay, "JSON document")->required();
  add_output_flags(replay, parsed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  try {
    std::string name;
    Json inputs;
    if (replay->parsed()) {
      std::ifstream f(v.replay);
      if (!f) throw UsageError("cannot open '" + v.replay + "'");
      Json doc;
      try {
        doc = Json::parse(f);
      } catch (const Json::exception& e) {
        throw UsageError(std::string("invalid JSON: ") + e.what());
      }
      if (!doc.contains("inputs") || !doc["inputs"].contains("command"))
        throw UsageError("document has no inputs.command");
      inputs = doc["inputs"];
      name = inputs["command"].get<std::string>();
      if (!registry().contains(name)) throw UsageError("unknown command '" + name + "' in document");
    } else {
      for (const auto& l : leaves)
        if (l.app->parsed()) {
          name = l.name;
          inputs = l.collect();
        }
    }
    const Artifact result = [&] {
      try {
        return registry().at(name).run(inputs);
      } catch (const Json::exception& e) {
        throw UsageError(std::string("malformed inputs: ") + e.what());
      }
    }();
    const std::string text = render(name, inputs, result, parsed.format);
    if (parsed.output.empty())
      out << text;
    else
      write_atomic(parsed.output, text);
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace ttt::cli
