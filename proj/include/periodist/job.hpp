#pragma once

// Job specifications and reports for the periodist command-line tool.
//
// A job file is a JSON object
//   {"dimension": 1, "window": 50, "inputs": {...}, "params": {...}}
// whose inputs/params depend on the command. run() produces a report with
// an echo of the job, the command's results and a verdict. Exit codes:
// 0 success, 1 input error, 2 mathematical failure.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "periodist/corona.hpp"
#include "periodist/errors.hpp"
#include "periodist/exp_type.hpp"
#include "periodist/fourier.hpp"
#include "periodist/sequence.hpp"
#include "periodist/serialize.hpp"
#include "periodist/stable_rank.hpp"

namespace periodist::cli {

inline constexpr std::int64_t kDefaultWindow = 50;
inline constexpr std::size_t kDefaultDimension = 1;
inline constexpr std::int64_t kMaxWindow = 100000;

enum class ExitCode : int { success = 0, input_error = 1, math_failure = 2 };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Report {
  Json body;
  ExitCode exit_code = ExitCode::success;
  std::optional<Table> table;
};

/// Command-line overrides applied on top of the job file.
struct Overrides {
  std::optional<std::int64_t> window;
  std::optional<double> epsilon;
};

struct JobSpec {
  std::string command;
  std::size_t dimension = kDefaultDimension;
  std::int64_t window = kDefaultWindow;
  Json inputs = Json::object();
  Json params = Json::object();
  std::optional<double> epsilon_override;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {
      "check-growth", "corona-check", "bezout-solve", "bezout-verify", "reduce",        "approx",
      "gap",          "qdemo",        "fourier-coeffs", "fourier-synth", "pair",        "exp-demo"};
  return names;
}

inline JobSpec parse_job(const std::string& command, const Json& j, const Overrides& o = {}) {
  using namespace json_detail;
  if (std::find(commands().begin(), commands().end(), command) == commands().end())
    throw InvalidInput("unknown command '" + command + "'");
  if (!j.is_object()) throw SpecError("", "job must be a JSON object");
  JobSpec s;
  s.command = command;
  if (j.contains("dimension")) {
    const auto d = integer(j["dimension"], "/dimension");
    if (d < 1 || d > 16) throw SpecError("/dimension", "must lie in [1, 16]");
    s.dimension = static_cast<std::size_t>(d);
  }
  if (j.contains("window")) s.window = integer(j["window"], "/window");
  if (o.window) s.window = *o.window;
  if (s.window < 0 || s.window > kMaxWindow)
    throw SpecError("/window", "must lie in [0, " + std::to_string(kMaxWindow) + "]");
  if (j.contains("inputs")) {
    if (!j["inputs"].is_object()) throw SpecError("/inputs", "expected an object");
    s.inputs = j["inputs"];
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw SpecError("/params", "expected an object");
    s.params = j["params"];
  }
  s.epsilon_override = o.epsilon;
  return s;
}

namespace detail {

class JobContext {
 public:
  explicit JobContext(const JobSpec& s) : spec_(s) {}

  std::size_t d() const { return spec_.dimension; }
  std::int64_t R() const { return spec_.window; }

  const Json& input(const char* key) const {
    if (!spec_.inputs.contains(key)) throw SpecError("/inputs", std::string("missing input '") + key + "'");
    return spec_.inputs[key];
  }
  bool has_input(const char* key) const { return spec_.inputs.contains(key); }
  bool has_param(const char* key) const { return spec_.params.contains(key); }

  SlowSequence slow(const Json& j, const std::string& path) const {
    const Expr e = expr_from_json(j, path);
    try {
      SlowSequence s(e, d());
      verify_declared_certificates(e, d(), R());
      return s;
    } catch (const SpecError&) {
      throw;
    } catch (const InvalidInput& err) {
      throw SpecError(path, err.what());
    }
  }
  SlowSequence slow_input(const char* key) const { return slow(input(key), std::string("/inputs/") + key); }

  FastSequence fast_input(const char* key) const {
    const std::string path = std::string("/inputs/") + key;
    const Expr e = expr_from_json(input(key), path);
    try {
      return FastSequence(e, d());
    } catch (const InvalidInput& err) {
      throw SpecError(path, err.what());
    }
  }

  std::vector<SlowSequence> family(const char* key) const {
    const auto& arr = input(key);
    const std::string path = std::string("/inputs/") + key;
    if (!arr.is_array() || arr.empty()) throw SpecError(path, "expected a nonempty array of expressions");
    std::vector<SlowSequence> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(slow(arr[i], path + "/" + std::to_string(i)));
    return out;
  }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!spec_.params.contains(key)) {
      if (fallback) return *fallback;
      throw SpecError("/params", std::string("missing parameter '") + key + "'");
    }
    const double v = json_detail::number(spec_.params[key], std::string("/params/") + key);
    if (!std::isfinite(v)) throw SpecError(std::string("/params/") + key, "must be finite");
    return v;
  }

  double positive(const char* key, std::optional<double> fallback = std::nullopt) const {
    const double v = number(key, fallback);
    if (!(v > 0.0)) throw SpecError(std::string("/params/") + key, "must be > 0");
    return v;
  }

  std::int64_t integer(const char* key, std::optional<std::int64_t> fallback, std::int64_t lo,
                       std::int64_t hi) const {
    std::int64_t v;
    if (!spec_.params.contains(key)) {
      if (!fallback) throw SpecError("/params", std::string("missing parameter '") + key + "'");
      v = *fallback;
    } else {
      v = json_detail::integer(spec_.params[key], std::string("/params/") + key);
    }
    if (v < lo || v > hi)
      throw SpecError(std::string("/params/") + key,
                      "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  std::optional<double> epsilon_override() const { return spec_.epsilon_override; }

 private:
  const JobSpec& spec_;
};

inline Json cert_json(const GrowthCertificate& c) { return {{"M", c.M}, {"k", c.k}}; }

inline Json witness_json(const CoronaWitness& w) {
  Json j = {{"delta", w.delta}, {"K", w.K}};
  j["status"] = w.certified() ? "certified" : "window-verified";
  if (!w.certified()) j["radius"] = w.radius;
  return j;
}

inline Json bound_json(const LowerBound& b) { return {{"delta", b.delta}, {"K", b.K}}; }

inline Json index_json(const std::optional<LatticeIndex>& n) {
  return n ? Json(n->coords()) : Json(nullptr);
}

inline Json sequence_json(const SlowSequence& s) {
  return {{"expr", expr_to_json(s.expr())}, {"cert", cert_json(s.certificate())}};
}

inline Table residual_table(const std::vector<double>& shells) {
  Table t{{"radius", "max_residual"}, {}};
  for (std::size_t r = 0; r < shells.size(); ++r) t.rows.push_back({Json(r), Json(shells[r])});
  return t;
}

inline double tolerance(const JobContext& c) {
  return c.positive("tolerance", kBezoutTolerance);
}

inline Report check_growth(const JobContext& c) {
  const auto seqs = c.family("sequences");
  Json rows = Json::array();
  bool ok = true;
  Table t{{"index", "M", "k", "first_violation"}, {}};
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const auto bad = certificate_violation(seqs[i], seqs[i].certificate(), c.R());
    ok = ok && !bad;
    rows.push_back({{"cert", cert_json(seqs[i].certificate())}, {"first_violation", index_json(bad)}});
    t.rows.push_back({Json(i), Json(seqs[i].certificate().M), Json(seqs[i].certificate().k), index_json(bad)});
  }
  return {{{"result", {{"sequences", rows}}}, {"verdict", ok ? "pass" : "fail"}},
          ok ? ExitCode::success : ExitCode::math_failure,
          t};
}

inline Report corona_check(const JobContext& c) {
  const auto fam = c.family("family");
  const double delta = c.positive("delta");
  const int K = static_cast<int>(c.integer("K", std::nullopt, 0, 1000));
  const auto check = check_corona_window(fam, delta, K, c.R());
  Json result = {{"holds", check.holds}, {"first_violation", index_json(check.first_violation)}};
  if (check.holds)
    result["witness"] = witness_json(*make_witness(fam, delta, K, c.R()));
  return {{{"result", result}, {"verdict", check.holds ? "pass" : "fail"}},
          check.holds ? ExitCode::success : ExitCode::math_failure,
          std::nullopt};
}

inline Report bezout_solve(const JobContext& c) {
  const auto fam = c.family("family");
  const double delta = c.positive("delta");
  const int K = static_cast<int>(c.integer("K", std::nullopt, 0, 1000));
  const auto w = make_witness(fam, delta, K, c.R());
  if (!w) {
    const auto check = check_corona_window(fam, delta, K, c.R());
    return {{{"result", {{"holds", false}, {"first_violation", index_json(check.first_violation)}}},
             {"verdict", "fail"}},
            ExitCode::math_failure,
            std::nullopt};
  }
  const auto sol = solve_bezout(fam, *w);
  const auto shells = bezout_residual_by_shell(fam, sol.cofactors, c.R());
  const double residual = shells.empty() ? 0.0 : *std::max_element(shells.begin(), shells.end());
  Json cof = Json::array();
  for (const auto& b : sol.cofactors) cof.push_back(sequence_json(b));
  const bool ok = residual <= tolerance(c);
  return {{{"result", {{"witness", witness_json(*w)}, {"cofactors", cof}, {"max_residual", residual},
                       {"tolerance", tolerance(c)}}},
           {"verdict", ok ? "pass" : "fail"}},
          ok ? ExitCode::success : ExitCode::math_failure,
          residual_table(shells)};
}

inline Report bezout_verify(const JobContext& c) {
  const auto fam = c.family("family");
  const auto cof = c.family("cofactors");
  if (fam.size() != cof.size()) throw SpecError("/inputs/cofactors", "length differs from /inputs/family");
  const auto shells = bezout_residual_by_shell(fam, cof, c.R());
  const double residual = shells.empty() ? 0.0 : *std::max_element(shells.begin(), shells.end());
  const bool ok = residual <= tolerance(c);
  return {{{"result", {{"max_residual", residual}, {"tolerance", tolerance(c)}}}, {"verdict", ok ? "pass" : "fail"}},
          ok ? ExitCode::success : ExitCode::math_failure,
          residual_table(shells)};
}

inline Report reduce(const JobContext& c) {
  const auto fam = c.family("family");
  const auto cof = c.family("cofactors");
  if (fam.size() != cof.size()) throw SpecError("/inputs/cofactors", "length differs from /inputs/family");
  if (fam.size() < 2) throw SpecError("/inputs/family", "needs at least two entries");
  double eps = c.number("epsilon", kDefaultClipEpsilon);
  if (auto o = c.epsilon_override()) eps = *o;
  if (!(eps > 0.0 && eps < 0.5)) throw SpecError("/params/epsilon", "must lie in (0, 1/2)");
  const double tol = tolerance(c);

  if (fam.size() > 2) {
    const auto red = reduce_tuple(fam, cof, eps, c.R(), tol);
    Json h = Json::array(), reduced = Json::array(), cofs = Json::array();
    for (const auto& x : red.h) h.push_back(sequence_json(x));
    for (const auto& x : red.reduced) reduced.push_back(sequence_json(x));
    for (const auto& x : red.cofactors) cofs.push_back(sequence_json(x));
    const double residual = verify_bezout(red.reduced, red.cofactors, c.R());
    const bool ok = residual <= 1e-10;
    return {{{"result", {{"h", h}, {"reduced", reduced}, {"cofactors", cofs}, {"reduced_residual", residual}}},
             {"verdict", ok ? "pass" : "fail"}},
            ok ? ExitCode::success : ExitCode::math_failure,
            std::nullopt};
  }

  const auto t = reduce_pair(fam[0], fam[1], cof[0], cof[1], eps, c.R(), tol);
  double min_corr = kInf, factor_residual = 0.0;
  const auto d = c.d();
  for_each_in_window(d, c.R(), [&](const LatticeIndex& n) {
    min_corr = std::min(min_corr, std::abs(t.correction(n)));
    const Complex lhs = t.result(n);
    const Complex rhs = t.u1(n) / t.B1tilde(n) * t.correction(n);
    factor_residual = std::max(factor_residual, std::abs(lhs - rhs));
  });
  const auto unit = is_unit(t.result, t.result_witness, c.R());
  const bool ok = unit.invertible && min_corr >= t.correction_floor;
  Json trace = {{"u1", sequence_json(t.u1)},
                {"A1", sequence_json(t.A1)},
                {"B1", sequence_json(t.B1)},
                {"B1tilde", sequence_json(t.B1tilde)},
                {"h", sequence_json(t.h)},
                {"epsilon", t.epsilon},
                {"result", sequence_json(t.result)},
                {"correction_floor", t.correction_floor},
                {"factor_witnesses",
                 {{"inv_B1tilde", bound_json(t.inv_B1tilde_bound)},
                  {"u1", bound_json(t.u1_bound)},
                  {"correction", bound_json(t.correction_bound)}}},
                {"result_witness", witness_json(t.result_witness)}};
  return {{{"result",
            {{"trace", trace},
             {"input_residual", t.input_residual},
             {"min_correction_on_window", min_corr},
             {"factorization_residual", factor_residual},
             {"result_is_unit", unit.invertible},
             {"unit_violation", index_json(unit.violation)}}},
           {"verdict", ok ? "pass" : "fail"}},
          ok ? ExitCode::success : ExitCode::math_failure,
          std::nullopt};
}

inline std::vector<double> epsilon_array(const JobContext& c, const Json& params) {
  if (auto o = c.epsilon_override()) return {*o};
  if (!params.contains("epsilons")) return {kDefaultClipEpsilon};
  const auto& arr = params["epsilons"];
  if (!arr.is_array() || arr.empty()) throw SpecError("/params/epsilons", "expected a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = "/params/epsilons/" + std::to_string(i);
    const double v = json_detail::number(arr[i], p);
    if (!(v > 0.0) || !std::isfinite(v)) throw SpecError(p, "must be finite and > 0");
    out.push_back(v);
  }
  return out;
}

inline Report approx(const JobContext& c, const Json& params) {
  const auto a = c.slow_input("sequence");
  const auto eps = epsilon_array(c, params);
  const auto net = approx_by_invertibles(a, eps);
  Json items = Json::array();
  Table t{{"epsilon", "max_abs_difference", "is_unit"}, {}};
  bool ok = true;
  for (std::size_t i = 0; i < net.size(); ++i) {
    double max_diff = 0.0;
    for_each_in_window(c.d(), c.R(), [&](const LatticeIndex& n) {
      max_diff = std::max(max_diff, std::abs(net[i].value(n) - a(n)));
    });
    const auto unit = is_unit(net[i].value, net[i].witness, c.R());
    ok = ok && unit.invertible && max_diff <= 2.0 * eps[i];
    items.push_back({{"epsilon", eps[i]},
                     {"sequence", sequence_json(net[i].value)},
                     {"witness", witness_json(net[i].witness)},
                     {"max_abs_difference", max_diff},
                     {"is_unit", unit.invertible}});
    t.rows.push_back({Json(eps[i]), Json(max_diff), Json(unit.invertible)});
  }
  return {{{"result", {{"net", items}}}, {"verdict", ok ? "pass" : "fail"}},
          ok ? ExitCode::success : ExitCode::math_failure,
          t};
}

inline Json gap_json(const GapReport& g) {
  return {{"gap", g.gap},
          {"bound", g.bound},
          {"sup_difference", g.sup_difference},
          {"abs_sum_b", g.abs_sum_b},
          {"tail_bound", g.tail_bound}};
}

inline Report gap(const JobContext& c) {
  const auto x = c.slow_input("x");
  const auto y = c.slow_input("y");
  const auto b = c.fast_input("b");
  const auto g = weak_star_gap(x, y, b, c.R());
  const bool ok = g.gap <= g.bound;
  return {{{"result", gap_json(g)}, {"verdict", ok ? "pass" : "fail"}},
          ok ? ExitCode::success : ExitCode::math_failure,
          std::nullopt};
}

inline Report qdemo(const JobContext& c, const Json& params) {
  const double rate = c.positive("rate", 1.0);
  const double delta = c.positive("delta", 1.0);
  const int K = static_cast<int>(c.integer("K", 2, 0, 1000));
  const auto n_max = c.integer("nMax", 40, 0, kMaxWindow);
  const auto v = q_algebra_violation(rate, delta, K, n_max, c.d());
  Json result = {{"violation", index_json(v)}};
  bool ok = v.has_value();
  if (c.has_input("b")) {
    const auto b = c.fast_input("b");
    const double Kp = exp_net_constant(b, c.R());
    Json net = Json::array();
    for (double eps : epsilon_array(c, params)) {
      const auto g = weak_star_gap(SlowSequence::exp_decay(c.d(), eps), SlowSequence::one(c.d()), b, c.R());
      const bool within = g.gap <= Kp * eps;
      ok = ok && within;
      net.push_back({{"epsilon", eps}, {"gap", g.gap}, {"bound", Kp * eps}, {"within", within}});
    }
    result["net_constant"] = Kp;
    result["net"] = net;
  }
  return {{{"result", result}, {"verdict", ok ? "pass" : "fail"}},
          ok ? ExitCode::success : ExitCode::math_failure,
          std::nullopt};
}

inline PeriodBasis basis_param(const JobContext& c, const Json& params) {
  const std::size_t d = c.d();
  if (!params.contains("basis")) return PeriodBasis::identity(d);
  const auto& rows = params["basis"];
  if (!rows.is_array() || rows.size() != d) throw SpecError("/params/basis", "expected " + std::to_string(d) + " rows");
  std::vector<double> flat;
  for (std::size_t i = 0; i < d; ++i) {
    const std::string rp = "/params/basis/" + std::to_string(i);
    if (!rows[i].is_array() || rows[i].size() != d) throw SpecError(rp, "expected " + std::to_string(d) + " numbers");
    for (std::size_t k = 0; k < d; ++k) flat.push_back(json_detail::number(rows[i][k], rp + "/" + std::to_string(k)));
  }
  try {
    return PeriodBasis(d, flat);
  } catch (const InvalidInput& e) {
    throw SpecError("/params/basis", e.what());
  }
}

inline Report fourier_coeffs(const JobContext& c, const Json& params) {
  const auto P = basis_param(c, params);
  const auto N = static_cast<std::size_t>(c.integer("N", std::nullopt, 1, 4096));
  std::vector<Complex> samples;
  if (c.has_input("samples_file")) {
    const auto& f = c.input("samples_file");
    if (!f.is_string()) throw SpecError("/inputs/samples_file", "expected a path");
    samples = read_binary_samples(f.get<std::string>());
  } else {
    samples = samples_from_json(c.input("samples"), "/inputs/samples");
  }
  try {
    const auto coeffs = coeffs_from_samples(P, N, samples);
    return {{{"result", coefficients_to_json(coeffs)}, {"verdict", nullptr}}, ExitCode::success, std::nullopt};
  } catch (const InvalidInput& e) {
    throw SpecError("/inputs/samples", e.what());
  }
}

inline Report fourier_synth(const JobContext& c, const Json& params) {
  const auto P = basis_param(c, params);
  const auto coeffs = coefficients_from_json(c.input("coefficients"), "/inputs/coefficients");
  if (coeffs.dimension() != c.d()) throw SpecError("/inputs/coefficients/dimension", "does not match /dimension");
  if (!coeffs.is_finite()) throw SpecError("/inputs/coefficients", "synthesis needs finitely many coefficients");
  const auto& pts = c.input("points");
  if (!pts.is_array()) throw SpecError("/inputs/points", "expected an array of points");
  Json values = Json::array();
  Table t{{"point", "re", "im"}, {}};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string pp = "/inputs/points/" + std::to_string(i);
    if (!pts[i].is_array() || pts[i].size() != c.d()) throw SpecError(pp, "expected " + std::to_string(c.d()) + " numbers");
    Eigen::VectorXd x(static_cast<Eigen::Index>(c.d()));
    for (std::size_t k = 0; k < c.d(); ++k)
      x[static_cast<Eigen::Index>(k)] = json_detail::number(pts[i][k], pp + "/" + std::to_string(k));
    const Complex v = synthesize(P, coeffs, x);
    values.push_back(complex_to_json(v));
    t.rows.push_back({pts[i], Json(v.real()), Json(v.imag())});
  }
  return {{{"result", {{"values", values}}}, {"verdict", nullptr}}, ExitCode::success, t};
}

inline Report pair(const JobContext& c) {
  const auto b = c.fast_input("b");
  PairingResult p;
  if (c.has_input("coefficients")) {
    const auto coeffs = coefficients_from_json(c.input("coefficients"), "/inputs/coefficients");
    if (coeffs.dimension() != c.d()) throw SpecError("/inputs/coefficients/dimension", "does not match /dimension");
    p = distribution_action(coeffs, b, c.R());
  } else {
    p = pairing(c.slow_input("a"), b, c.R());
  }
  return {{{"result",
            {{"value", complex_to_json(p.value)},
             {"truncation_radius", p.truncation_radius},
             {"tail_bound", std::isfinite(p.tail_bound) ? Json(p.tail_bound) : Json("inf")}}},
           {"verdict", nullptr}},
          ExitCode::success,
          std::nullopt};
}

inline Json poly_json(const Poly<double>& p) { return p.coefficients(); }

inline Report exp_demo(const JobContext& c) {
  const int max_degree = static_cast<int>(c.integer("maxDegree", 3, 0, 8));
  const Poly<Rational> p{Rational(-1), Rational(-1), Rational(-1)};
  const Poly<Rational> q{Rational(1)};
  const Poly<Rational> f{Rational(-1), Rational(1)};
  const Poly<Rational> g = Poly<Rational>::monomial(3);
  const bool exact = bezout_defect(p, q, f, g).is_zero();
  const auto search = polynomial_reducer_search(max_degree);
  Json samples = Json::array();
  for (const auto& s : search.samples)
    samples.push_back({{"h", poly_json(s.h)}, {"root", complex_to_json(s.root)}, {"residual", s.residual}});
  const bool ok = exact && search.units_found == 0 && search.structural_nonconstant && search.max_root_residual <= 1e-9;
  return {{{"result",
            {{"bezout",
              {{"p", "-(1+z+z^2)"}, {"q", "1"}, {"f", "z-1"}, {"g", "z^3"}, {"exact_identity", exact},
               {"max_residual", poly_bezout_check(p, q, f, g)}}},
             {"reducer_search",
              {{"max_degree", search.max_degree},
               {"structural_nonconstant", search.structural_nonconstant},
               {"units_found", search.units_found},
               {"max_root_residual", search.max_root_residual},
               {"samples", samples}}}}},
           {"verdict", ok ? "pass" : "fail"}},
          ok ? ExitCode::success : ExitCode::math_failure,
          std::nullopt};
}

}  // namespace detail

/// Executes a parsed job. Input errors propagate as InvalidInput (callers
/// map them to exit code 1); mathematical failures are reported in the body
/// with exit code 2.
inline Report run(const JobSpec& spec) {
  detail::JobContext c(spec);
  Report r;
  try {
    const auto& cmd = spec.command;
    if (cmd == "check-growth") r = detail::check_growth(c);
    else if (cmd == "corona-check") r = detail::corona_check(c);
    else if (cmd == "bezout-solve") r = detail::bezout_solve(c);
    else if (cmd == "bezout-verify") r = detail::bezout_verify(c);
    else if (cmd == "reduce") r = detail::reduce(c);
    else if (cmd == "approx") r = detail::approx(c, spec.params);
    else if (cmd == "gap") r = detail::gap(c);
    else if (cmd == "qdemo") r = detail::qdemo(c, spec.params);
    else if (cmd == "fourier-coeffs") r = detail::fourier_coeffs(c, spec.params);
    else if (cmd == "fourier-synth") r = detail::fourier_synth(c, spec.params);
    else if (cmd == "pair") r = detail::pair(c);
    else if (cmd == "exp-demo") r = detail::exp_demo(c);
    else throw InvalidInput("unknown command '" + cmd + "'");
  } catch (const CertificateRejected& e) {
    r = {{{"result", {{"failure", e.what()}, {"at", e.at().coords()}}}, {"verdict", "fail"}},
         ExitCode::math_failure,
         std::nullopt};
  } catch (const PointFailure& e) {
    r = {{{"result", {{"failure", e.what()}, {"at", e.at().coords()}}}, {"verdict", "fail"}},
         ExitCode::math_failure,
         std::nullopt};
  } catch (const BezoutRejected& e) {
    r = {{{"result", {{"failure", e.what()}, {"residual", e.residual()}}}, {"verdict", "fail"}},
         ExitCode::math_failure,
         std::nullopt};
  }
  r.body["command"] = spec.command;
  r.body["dimension"] = spec.dimension;
  r.body["window"] = spec.window;
  r.body["defaults"] = {{"dimension", kDefaultDimension}, {"window", kDefaultWindow}};
  r.body["inputs"] = spec.inputs;
  r.body["params"] = spec.params;
  if (spec.epsilon_override) r.body["epsilon_override"] = *spec.epsilon_override;
  r.body["exit_code"] = static_cast<int>(r.exit_code);
  return r;
}

inline std::string csv_cell(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  std::string s = j.dump();
  if (s.find(',') != std::string::npos) return "\"" + s + "\"";
  return s;
}

/// CSV rendering of the report's table; throws if the command has none.
inline std::string to_csv(const Report& r) {
  if (!r.table) throw InvalidInput("--format csv is not available for this command");
  std::ostringstream out;
  for (std::size_t i = 0; i < r.table->columns.size(); ++i) out << (i ? "," : "") << r.table->columns[i];
  out << "\n";
  for (const auto& row : r.table->rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
  return out.str();
}

inline std::string to_json_text(const Report& r) { return r.body.dump(2) + "\n"; }

}  // namespace periodist::cli
