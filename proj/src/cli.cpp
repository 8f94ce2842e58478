#include "bjapprox/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "bjapprox/error.hpp"
#include "bjapprox/functional_approx.hpp"
#include "bjapprox/operator_approx.hpp"
#include "bjapprox/oracle.hpp"
#include "bjapprox/orthogonality.hpp"

namespace bjapprox::cli {

using nlohmann::json;

namespace {

/// Malformed or inconsistent input; field is a JSON pointer into the problem.
struct InputError : std::runtime_error {
  InputError(const std::string& field, const std::string& what)
      : std::runtime_error(what), field(field) {}
  std::string field;
};

/// A route or command that does not apply to the problem kind.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- parsing

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw InputError(path + "/" + key, "missing field");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw InputError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(path, "expected a finite number");
  return v;
}

Vector vector_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw InputError(path, "expected a non-empty array of numbers");
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], path + "/" + std::to_string(i)));
  return v;
}

std::vector<Vector> vectors_of(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array()) throw InputError(path, "expected an array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "/" + std::to_string(i);
    out.push_back(vector_of(j[i], p));
    if (out.back().size() != n) {
      throw InputError(p, "expected length " + std::to_string(n) + ", got " + std::to_string(out.back().size()));
    }
  }
  return out;
}

Matrix matrix_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw InputError(path, "expected a non-empty array of rows");
  const std::size_t cols = vector_of(j[0], path + "/0").size();
  return Matrix::from_rows(vectors_of(j, path, cols), cols);
}

double exponent_of(const json& problem) {
  const double p = number(field(problem, "p", ""), "/p");
  if (!(p > 1.0) || !std::isfinite(p)) throw InputError("/p", "exponent must satisfy 1 < p < infinity");
  return p;
}

DomainNorm domain_of(const json& problem) {
  if (!problem.contains("domain")) return DomainNorm::euclidean;
  const json& d = problem.at("domain");
  if (d == "euclidean") return DomainNorm::euclidean;
  if (d == "sup") return DomainNorm::sup;
  throw InputError("/domain", "expected \"euclidean\" or \"sup\"");
}

struct Settings {
  double tolerance;
  std::uint64_t seed;
  int restarts;
  std::vector<std::string> routes;
};

Settings settings_of(const json& problem, const GlobalOptions& g) {
  Settings s{g.tolerance, g.seed, g.restarts, g.routes};
  if (!problem.contains("options")) return s;
  const json& o = problem.at("options");
  if (!o.is_object()) throw InputError("/options", "expected an object");
  if (o.contains("tolerance") && !g.tolerance_set) {
    s.tolerance = number(o.at("tolerance"), "/options/tolerance");
    if (!(s.tolerance > 0.0)) throw InputError("/options/tolerance", "tolerance must be positive");
  }
  if (o.contains("seed") && !g.seed_set) {
    if (!o.at("seed").is_number_unsigned()) throw InputError("/options/seed", "expected a non-negative integer");
    s.seed = o.at("seed").get<std::uint64_t>();
  }
  if (o.contains("restarts")) {
    if (!o.at("restarts").is_number_unsigned()) throw InputError("/options/restarts", "expected a non-negative integer");
    s.restarts = o.at("restarts").get<int>();
  }
  if (o.contains("routes") && g.routes.empty()) {
    if (!o.at("routes").is_array()) throw InputError("/options/routes", "expected an array of route names");
    for (std::size_t i = 0; i < o.at("routes").size(); ++i) {
      const json& r = o.at("routes")[i];
      if (!r.is_string()) throw InputError("/options/routes/" + std::to_string(i), "expected a route name");
      s.routes.push_back(r.get<std::string>());
    }
  }
  return s;
}

json settings_json(const Settings& s, const std::vector<std::string>& routes_run) {
  return {{"tolerance", s.tolerance}, {"seed", s.seed}, {"restarts", s.restarts}, {"routes", routes_run}};
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return rows;
}

/// Requested routes filtered against the applicable ones. Requesting an
/// inapplicable route is a usage error.
std::vector<std::string> select_routes(const Settings& s, const std::vector<std::string>& known,
                                       const std::vector<std::string>& applicable, const std::string& kind) {
  if (s.routes.empty()) return applicable;
  for (const auto& r : s.routes) {
    if (std::find(known.begin(), known.end(), r) == known.end()) {
      throw UsageError("unknown route '" + r + "' for kind " + kind);
    }
    if (std::find(applicable.begin(), applicable.end(), r) == applicable.end()) {
      throw UsageError("route '" + r + "' does not apply to this " + kind + " problem");
    }
  }
  return s.routes;
}

/// Largest pairwise |d_i - d_j| / max(|d_i|, |d_j|, floor).
double max_disagreement(const std::vector<double>& d, double floor) {
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      worst = std::max(worst, std::abs(d[i] - d[j]) / std::max({std::abs(d[i]), std::abs(d[j]), floor}));
  return worst;
}

// ---------------------------------------------------------------- dist

struct LpProblem {
  double p;
  Vector x;
  std::vector<Vector> basis;
};

LpProblem lp_problem(const json& problem) {
  LpProblem out;
  out.p = exponent_of(problem);
  out.x = vector_of(field(problem, "x", ""), "/x");
  out.basis = problem.contains("basis") ? vectors_of(problem.at("basis"), "/basis", out.x.size()) : std::vector<Vector>{};
  if (out.basis.size() > out.x.size()) throw InputError("/basis", "more basis vectors than the dimension");
  return out;
}

json dist_lp(const json& problem, const Settings& s, bool functional, std::vector<std::string>& routes_run,
             double& disagreement) {
  const LpProblem lp = lp_problem(problem);
  const std::size_t n = lp.x.size();
  const Exponent e = conjugate_exponent(lp.p);
  const Subspace y(n, Matrix::from_columns(lp.basis, n));
  const SphereMaxOptions opts{s.seed, s.restarts, 10000};

  const std::vector<std::string> known{"duality-3step", "classical-duality", "primal-oracle", "closed-form"};
  std::vector<std::string> applicable{"duality-3step", "classical-duality", "primal-oracle"};
  if (n == 2 && lp.basis.size() == 1) applicable.push_back("closed-form");
  routes_run = select_routes(s, known, applicable, functional ? "functional-subspace" : "point-subspace");

  json results = json::array();
  std::vector<double> distances;
  for (const auto& route : routes_run) {
    const auto start = Clock::now();
    json r{{"route", route}};
    if (route == "duality-3step") {
      ApproxResult res;
      if (functional) {
        std::vector<Functional> gs;
        for (const auto& g : lp.basis) gs.emplace_back(g, e);
        res = best_approx_functional(Functional(lp.x, e), gs, opts);
      } else {
        res = dist_point_subspace_lp(LpVector(lp.x, e), y, opts);
      }
      r["distance"] = res.distance;
      r["coefficients"] = res.coefficients;
      r["witness"] = res.attainment_point ? json(res.attainment_point->values()) : json(nullptr);
    } else if (route == "classical-duality") {
      r["distance"] = classical_duality_eval(LpVector(lp.x, e), y, opts);
    } else if (route == "primal-oracle") {
      const auto rep = oracle::primal_min_lp(lp.x, y, lp.p);
      r["distance"] = rep.value;
      r["coefficients"] = rep.minimizer;
      r["converged"] = rep.converged;
      r["iterations"] = rep.iterations;
    } else {
      r["distance"] = codim1_closed_form_2d(lp.x[0], lp.x[1], lp.basis[0][0], lp.basis[0][1], lp.p);
    }
    r["time_ms"] = elapsed_ms(start);
    distances.push_back(r["distance"].get<double>());
    results.push_back(std::move(r));
  }
  disagreement = max_disagreement(distances, 1e-12 * lp_norm(lp.x, lp.p));
  return results;
}

struct OperatorProblem {
  DomainNorm domain;
  MatrixOperator t;
  std::vector<MatrixOperator> as;
};

OperatorProblem operator_problem(const json& problem, bool many) {
  const DomainNorm domain = domain_of(problem);
  OperatorProblem out{domain, MatrixOperator(matrix_of(field(problem, "T", ""), "/T"), domain), {}};
  auto check_shape = [&](const Matrix& m, const std::string& path) {
    if (m.rows() != out.t.rows() || m.cols() != out.t.cols()) throw InputError(path, "shape differs from T");
  };
  const json& a = field(problem, "A", "");
  if (many) {
    if (!a.is_array() || a.empty()) throw InputError("/A", "expected a non-empty array of matrices");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string path = "/A/" + std::to_string(i);
      Matrix m = matrix_of(a[i], path);
      check_shape(m, path);
      out.as.emplace_back(std::move(m), domain);
    }
  } else {
    Matrix m = matrix_of(a, "/A");
    check_shape(m, "/A");
    out.as.emplace_back(std::move(m), domain);
  }
  return out;
}

json attainment_json(const NormAttainmentSet& set) {
  json j{{"kind", to_string(set.kind)}, {"is_pm_connected", set.is_pm_connected}};
  if (set.subspace) j["subspace"] = matrix_json(*set.subspace);
  if (!set.patterns.empty()) j["patterns"] = set.patterns;
  return j;
}

json dist_operator(const json& problem, const Settings& s, bool many, std::vector<std::string>& routes_run,
                   double& disagreement) {
  const OperatorProblem op = operator_problem(problem, many);
  const std::vector<std::string> known{"one-dim-minimization", "distance-formula", "primal-oracle"};
  std::vector<std::string> applicable{"primal-oracle"};
  if (!many) {
    applicable.insert(applicable.begin(), "one-dim-minimization");
    if (op.domain == DomainNorm::euclidean || op.t.cols() <= 3) applicable.insert(applicable.begin() + 1, "distance-formula");
  }
  routes_run = select_routes(s, known, applicable, many ? "operator-nd" : "operator-1d");

  json results = json::array();
  std::vector<double> distances;
  for (const auto& route : routes_run) {
    const auto start = Clock::now();
    json r{{"route", route}};
    bool counts = true;
    if (route == "one-dim-minimization") {
      const auto one = best_approx_operator_1d(op.t, op.as[0]);
      r["distance"] = one.dist;
      r["coefficients"] = Vector{one.lambda0};
      if (!one.exact) r["attainment"] = attainment_json(norm_attainment_set(op.t.minus(one.lambda0, op.as[0])));
    } else if (route == "distance-formula") {
      if (op.domain == DomainNorm::euclidean) {
        r["distance"] = dist_formula_hilbert(op.t, op.as[0], s.seed, s.restarts);
      } else {
        const auto d = dist_formula_smooth_codomain(op.t, op.as[0]);
        r["distance"] = d.value;
        r["witness"] = d.maximizer;
        r["hypothesis_satisfied"] = d.hypothesis_satisfied;
        // Without the +-D form the constrained maximum only bounds the
        // distance from below, so it is not compared.
        counts = d.hypothesis_satisfied;
      }
    } else {
      const auto rep = oracle::primal_min_operator(op.t, op.as, s.seed);
      r["distance"] = rep.value;
      r["coefficients"] = rep.minimizer;
      r["converged"] = rep.converged;
    }
    r["time_ms"] = elapsed_ms(start);
    if (counts) distances.push_back(r["distance"].get<double>());
    results.push_back(std::move(r));
  }
  disagreement = max_disagreement(distances, 1e-12 * oracle::operator_norm_value(op.t.matrix(), op.domain));
  return results;
}

Outcome cmd_dist(const json& problem, const Settings& s, const std::string& kind) {
  std::vector<std::string> routes_run;
  double disagreement = 0.0;
  json routes;
  if (kind == "point-subspace" || kind == "functional-subspace") {
    routes = dist_lp(problem, s, kind == "functional-subspace", routes_run, disagreement);
  } else if (kind == "operator-1d" || kind == "operator-nd") {
    routes = dist_operator(problem, s, kind == "operator-nd", routes_run, disagreement);
  } else {
    throw UsageError("'dist' does not handle kind " + kind);
  }
  Outcome out;
  out.exit_code = disagreement > kDisagreementThreshold ? kDisagreement : kOk;
  out.document = {{"schema", 1},
                  {"command", "dist"},
                  {"kind", kind},
                  {"options", settings_json(s, routes_run)},
                  {"routes", routes},
                  {"max_relative_disagreement", disagreement},
                  {"status", out.exit_code == kOk ? "ok" : "disagreement"}};
  return out;
}

// ---------------------------------------------------------------- check

json check_orthogonality(const json& problem, const Settings& s) {
  const json& obj = field(problem, "object", "");
  if (!obj.is_string()) throw InputError("/object", "expected a string");
  const std::string object = obj.get<std::string>();
  json v{{"object", object}};
  if (object == "vectors" || object == "functionals") {
    const double p = exponent_of(problem);
    const Vector x = vector_of(field(problem, "x", ""), "/x");
    const Vector y = vector_of(field(problem, "y", ""), "/y");
    if (y.size() != x.size()) throw InputError("/y", "length differs from x");
    const Exponent e = conjugate_exponent(p);
    if (object == "vectors") {
      const LpVector lx(x, e), ly(y, e);
      const auto verdict = bj_orthogonal_vectors(lx, ly, s.tolerance);
      v["verdict"] = verdict.is_orthogonal;
      v["margin"] = verdict.margin;
      v["minimizer"] = *verdict.minimizer;
      const auto cone = semicone_membership(lx, ly, s.tolerance);
      v["semicones"] = {{"plus", cone.in_plus}, {"minus", cone.in_minus}, {"derivative", cone.derivative}};
      if (problem.contains("delta")) {
        const auto strong = strong_bj_orthogonal(lx, ly, number(problem.at("delta"), "/delta"), s.tolerance);
        v["classification"] = to_string(strong.classification);
      }
    } else {
      const auto verdict = bj_orthogonal_functionals(Functional(x, e), Functional(y, e), s.tolerance);
      v["verdict"] = verdict.is_orthogonal;
      v["margin"] = verdict.margin;
      v["witness"] = *verdict.witness;
    }
  } else if (object == "operators" || object == "lambda-condition") {
    const OperatorProblem op = operator_problem(problem, false);
    if (object == "operators") {
      const auto verdict = bj_orthogonal_matrices_hilbert(op.t, op.as[0], s.tolerance);
      v["verdict"] = verdict.is_orthogonal;
      v["margin"] = verdict.margin;
      v["witness"] = *verdict.witness;
    } else {
      const double lambda0 = number(field(problem, "lambda0", ""), "/lambda0");
      const auto cond = hilbert_lambda_condition(op.t, op.as[0], lambda0, s.tolerance);
      v["verdict"] = cond.valid;
      v["margin"] = cond.margin;
      v["witness"] = cond.witness;
    }
  } else {
    throw InputError("/object", "expected vectors, functionals, operators or lambda-condition");
  }
  return v;
}

json check_inequality(const json& problem) {
  auto num = [&](const char* key) { return number(field(problem, key, ""), std::string("/") + key); };
  const auto r = verify_remark_inequality(num("a"), num("b"), num("c"), num("alpha"), num("beta"), exponent_of(problem));
  return {{"verdict", r.holds}, {"lhs", r.lhs}, {"rhs", r.rhs}};
}

json check_functional_certificate(const json& problem, const Settings& s) {
  const LpProblem lp = lp_problem(problem);
  const Exponent e = conjugate_exponent(lp.p);
  const Vector alpha = problem.at("alpha").empty() ? Vector{} : vector_of(problem.at("alpha"), "/alpha");
  if (alpha.size() != lp.basis.size()) throw InputError("/alpha", "one coefficient per basis vector expected");
  std::vector<Functional> gs;
  for (const auto& g : lp.basis) gs.emplace_back(g, e);
  const auto c = check_best_approx_certificate_functional(Functional(lp.x, e), gs, alpha, s.tolerance);
  json v{{"verdict", c.valid}, {"worst_violation", c.worst_violation}};
  v["witness"] = c.witness ? json(c.witness->values()) : json(nullptr);
  return v;
}

json check_ndim_certificate(const json& problem, const Settings& s) {
  const OperatorProblem op = operator_problem(problem, true);
  const Vector alpha = vector_of(field(problem, "alpha", ""), "/alpha");
  if (alpha.size() != op.as.size()) throw InputError("/alpha", "one coefficient per operator expected");
  std::vector<Vector> betas;
  if (problem.contains("beta")) {
    betas = vectors_of(problem.at("beta"), "/beta", alpha.size());
  } else {
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      Vector b = alpha;
      for (double& x : b) x += normal(rng);
      betas.push_back(std::move(b));
    }
  }
  const auto rep = verify_ndim_certificate_hilbert(op.t, op.as, alpha, betas, s.seed);
  json samples = json::array();
  for (const auto& smp : rep.samples) {
    samples.push_back({{"beta", smp.beta},
                       {"gamma", smp.gamma ? json(*smp.gamma) : json(nullptr)},
                       {"norm_beta", smp.norm_beta},
                       {"max_beta", smp.max_beta},
                       {"max_alpha", smp.max_alpha},
                       {"ok", smp.ok}});
  }
  return {{"verdict", rep.holds},
          {"inconclusive", rep.inconclusive},
          {"degenerate", rep.degenerate},
          {"norm_alpha", rep.norm_alpha},
          {"samples", samples}};
}

Outcome cmd_check(const json& problem, const Settings& s, const std::string& kind) {
  json v;
  if (kind == "orthogonality-check") {
    v = check_orthogonality(problem, s);
  } else if (kind == "inequality-check") {
    v = check_inequality(problem);
  } else if ((kind == "point-subspace" || kind == "functional-subspace") && problem.contains("alpha")) {
    v = check_functional_certificate(problem, s);
  } else if (kind == "operator-nd" && problem.contains("alpha")) {
    v = check_ndim_certificate(problem, s);
  } else {
    throw UsageError("'check' does not handle kind " + kind + (problem.contains("alpha") ? "" : " without alpha"));
  }
  Outcome out;
  out.exit_code = v.at("verdict").get<bool>() ? kOk : kVerdictFalse;
  v["schema"] = 1;
  v["command"] = "check";
  v["kind"] = kind;
  v["options"] = settings_json(s, {});
  out.document = std::move(v);
  return out;
}

json error_document(const std::string& command, const std::string& code, const std::string& message,
                    const std::string& field_path = "") {
  json e{{"code", code}, {"message", message}};
  if (!field_path.empty()) e["field"] = field_path;
  return {{"schema", 1}, {"command", command}, {"error", e}};
}

}  // namespace

Outcome solve(const std::string& command, const json& problem, const GlobalOptions& options) {
  try {
    if (!problem.is_object()) throw InputError("", "a problem must be a JSON object");
    const json& schema = field(problem, "schema", "");
    if (schema != 1) throw InputError("/schema", "unsupported schema version (expected 1)");
    const json& kind = field(problem, "kind", "");
    if (!kind.is_string()) throw InputError("/kind", "expected a string");
    const Settings s = settings_of(problem, options);
    if (command == "dist") return cmd_dist(problem, s, kind.get<std::string>());
    if (command == "check") return cmd_check(problem, s, kind.get<std::string>());
    throw UsageError("unknown command " + command);
  } catch (const InputError& e) {
    return {error_document(command, "parse", std::string("field ") + (e.field.empty() ? "/" : e.field) + ": " + e.what(),
                           e.field.empty() ? "/" : e.field),
            kUsage};
  } catch (const UsageError& e) {
    return {error_document(command, "usage", e.what()), kUsage};
  } catch (const Error& e) {
    return {error_document(command, to_string(e.code()), e.what()), kUsage};
  }
}

Outcome solve_file(const std::string& command, const std::string& path, const GlobalOptions& options) {
  std::ifstream in(path);
  if (!in) return {error_document(command, "io", "cannot open " + path), kUsage};
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos > 0 ? pos - 1 : 0), '\n'));
    return {error_document(command, "parse", path + ":" + std::to_string(line) + ": " + e.what()), kUsage};
  }
  if (!doc.is_array()) return solve(command, doc, options);

  std::vector<std::future<Outcome>> jobs;
  for (const auto& problem : doc) {
    jobs.push_back(std::async(std::launch::async, [&command, &problem, &options] { return solve(command, problem, options); }));
  }
  Outcome out;
  out.document = json::array();
  for (auto& job : jobs) {
    Outcome one = job.get();
    out.exit_code = std::max(out.exit_code, one.exit_code);
    out.document.push_back(std::move(one.document));
  }
  return out;
}

Outcome bench(const BenchSpec& spec, const GlobalOptions& options) {
  for (int n : spec.sizes) {
    if (n < 2 || n > 8) {
      return {error_document("bench", to_string(ErrorCode::capacity), "sizes must lie in [2, 8], got " + std::to_string(n)),
              kUsage};
    }
  }
  for (double p : spec.exponents) {
    if (!(p > 1.0) || !std::isfinite(p)) {
      return {error_document("bench", to_string(ErrorCode::invalid_exponent), "exponents must satisfy 1 < p < infinity"),
              kUsage};
    }
  }
  if (spec.trials < 0) return {error_document("bench", "usage", "trials must be non-negative"), kUsage};

  const std::vector<std::string> routes{"duality-3step", "classical-duality", "primal-oracle"};
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  json rows = json::array();
  double worst = 0.0;
  if (spec.trials > 0) {
    for (int n : spec.sizes) {
      for (int k = 1; k < n; ++k) {
        for (double p : spec.exponents) {
          const Exponent e = conjugate_exponent(p);
          std::vector<double> time_ms(3, 0.0), deviation(3, 0.0);
          double row_disagreement = 0.0;
          for (int trial = 0; trial < spec.trials; ++trial) {
            Vector x(static_cast<std::size_t>(n));
            for (double& v : x) v = normal(rng);
            Matrix basis(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
            for (std::size_t i = 0; i < basis.rows(); ++i)
              for (std::size_t j = 0; j < basis.cols(); ++j) basis(i, j) = normal(rng);
            const Subspace y(x.size(), basis);
            const SphereMaxOptions opts{options.seed + static_cast<std::uint64_t>(trial), options.restarts, 10000};
            std::vector<double> d(3);
            for (std::size_t r = 0; r < 3; ++r) {
              const auto start = Clock::now();
              if (r == 0) d[r] = dist_point_subspace_lp(LpVector(x, e), y, opts).distance;
              if (r == 1) d[r] = classical_duality_eval(LpVector(x, e), y, opts);
              if (r == 2) d[r] = oracle::primal_min_lp(x, y, p).value;
              time_ms[r] += elapsed_ms(start);
            }
            std::vector<double> sorted = d;
            std::sort(sorted.begin(), sorted.end());
            const double median = sorted[1];
            for (std::size_t r = 0; r < 3; ++r) {
              deviation[r] = std::max(deviation[r], std::abs(d[r] - median) / std::max(median, 1e-300));
            }
            row_disagreement = std::max(row_disagreement, max_disagreement(d, 1e-12 * lp_norm(x, p)));
          }
          worst = std::max(worst, row_disagreement);
          json per_route = json::array();
          for (std::size_t r = 0; r < 3; ++r) {
            json entry{{"route", routes[r]}, {"max_relative_deviation", deviation[r]}};
            if (spec.timing) entry["mean_time_ms"] = time_ms[r] / spec.trials;
            per_route.push_back(std::move(entry));
          }
          rows.push_back({{"n", n}, {"k", k}, {"p", p}, {"trials", spec.trials}, {"routes", per_route},
                          {"max_relative_disagreement", row_disagreement}});
        }
      }
    }
  }
  Outcome out;
  out.exit_code = worst > kDisagreementThreshold ? kDisagreement : kOk;
  out.document = {{"schema", 1},
                  {"command", "bench"},
                  {"options", {{"tolerance", options.tolerance}, {"seed", options.seed}, {"restarts", options.restarts},
                               {"routes", routes}}},
                  {"spec", {{"sizes", spec.sizes}, {"exponents", spec.exponents}, {"trials", spec.trials}}},
                  {"rows", rows},
                  {"max_relative_disagreement", worst},
                  {"status", out.exit_code == kOk ? "ok" : "disagreement"}};
  return out;
}

std::string validate_result(const json& d) {
  if (d.is_array()) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::string why = validate_result(d[i]);
      if (!why.empty()) return "/" + std::to_string(i) + why;
    }
    return {};
  }
  if (!d.is_object()) return ": not an object";
  if (d.value("schema", 0) != 1) return "/schema: expected 1";
  if (!d.contains("command") || !d["command"].is_string()) return "/command: missing";
  const std::string command = d["command"];
  if (d.contains("error")) {
    const json& e = d["error"];
    if (!e.is_object() || !e.contains("code") || !e["code"].is_string() || !e.contains("message") ||
        !e["message"].is_string()) {
      return "/error: expected code and message strings";
    }
    return {};
  }
  if (!d.contains("options") || !d["options"].is_object()) return "/options: missing";
  for (const char* key : {"tolerance", "seed", "restarts"})
    if (!d["options"].contains(key) || !d["options"][key].is_number()) return std::string("/options/") + key + ": missing";
  if (!d["options"].contains("routes") || !d["options"]["routes"].is_array()) return "/options/routes: missing";
  if (command == "dist") {
    if (!d.contains("kind") || !d["kind"].is_string()) return "/kind: missing";
    if (!d.contains("routes") || !d["routes"].is_array()) return "/routes: missing";
    for (std::size_t i = 0; i < d["routes"].size(); ++i) {
      const json& r = d["routes"][i];
      if (!r.contains("route") || !r["route"].is_string()) return "/routes/" + std::to_string(i) + "/route: missing";
      if (!r.contains("distance") || !r["distance"].is_number()) return "/routes/" + std::to_string(i) + "/distance: missing";
      if (!r.contains("time_ms") || !r["time_ms"].is_number()) return "/routes/" + std::to_string(i) + "/time_ms: missing";
    }
    if (!d.contains("max_relative_disagreement") || !d["max_relative_disagreement"].is_number()) {
      return "/max_relative_disagreement: missing";
    }
    return {};
  }
  if (command == "check") {
    if (!d.contains("kind") || !d["kind"].is_string()) return "/kind: missing";
    if (!d.contains("verdict") || !d["verdict"].is_boolean()) return "/verdict: missing";
    return {};
  }
  if (command == "bench") {
    if (!d.contains("rows") || !d["rows"].is_array()) return "/rows: missing";
    for (std::size_t i = 0; i < d["rows"].size(); ++i) {
      const json& r = d["rows"][i];
      for (const char* key : {"n", "k", "p", "trials", "max_relative_disagreement"})
        if (!r.contains(key) || !r[key].is_number()) return "/rows/" + std::to_string(i) + "/" + key + ": missing";
      if (!r.contains("routes") || !r["routes"].is_array()) return "/rows/" + std::to_string(i) + "/routes: missing";
    }
    return {};
  }
  return "/command: unknown command " + command;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best approximation and Birkhoff-James orthogonality in l_p and operator spaces", "bjapprox"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::string routes;
  std::string json_out;
  app.add_option("--tol", g.tolerance, "decision tolerance (default 1e-9)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed (default 42)");
  app.add_option("--routes", routes, "comma-separated routes to run");
  app.add_option("--json-out", json_out, "also write the result document to this path");

  std::string file;
  auto* dist = app.add_subcommand("dist", "compute a distance by every applicable route");
  dist->add_option("file", file, "problem file (JSON)")->required();
  auto* check = app.add_subcommand("check", "run an orthogonality, certificate or inequality check");
  check->add_option("file", file, "problem file (JSON)")->required();
  BenchSpec spec;
  std::string sizes, exponents;
  bool no_timing = false;
  auto* bench_cmd = app.add_subcommand("bench", "time and compare the l_p routes on random instances");
  bench_cmd->add_option("--n", sizes, "comma-separated dimensions (<= 8)");
  bench_cmd->add_option("--p", exponents, "comma-separated exponents");
  bench_cmd->add_option("--trials", spec.trials, "instances per (n, k, p)");
  bench_cmd->add_flag("--no-timing", no_timing, "omit wall-clock fields so reports are reproducible");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "bjapprox: " << e.what() << "\n";
    return kUsage;
  }
  g.tolerance_set = app.count("--tol") > 0;
  g.seed_set = app.count("--seed") > 0;
  g.routes = split_list(routes);

  Outcome outcome;
  if (bench_cmd->parsed()) {
    try {
      if (!sizes.empty()) {
        spec.sizes.clear();
        for (const auto& s : split_list(sizes)) spec.sizes.push_back(std::stoi(s));
      }
      if (!exponents.empty()) {
        spec.exponents.clear();
        for (const auto& s : split_list(exponents)) spec.exponents.push_back(std::stod(s));
      }
    } catch (const std::exception&) {
      err << "bjapprox: --n and --p take comma-separated numbers\n";
      return kUsage;
    }
    spec.timing = !no_timing;
    outcome = bench(spec, g);
  } else {
    outcome = solve_file(dist->parsed() ? "dist" : "check", file, g);
  }

  const std::string text = outcome.document.dump(2);
  out << text << "\n";
  if (!json_out.empty()) {
    std::ofstream f(json_out);
    if (!f) {
      err << "bjapprox: cannot write " << json_out << "\n";
      return kUsage;
    }
    f << text << "\n";
  }
  if (outcome.exit_code == kUsage) {
    const json& first = outcome.document.is_array() ? outcome.document : json::array({outcome.document});
    for (const auto& d : first)
      if (d.contains("error")) err << "bjapprox: " << d["error"]["message"].get<std::string>() << "\n";
  }
  return outcome.exit_code;
}

}  // namespace bjapprox::cli
