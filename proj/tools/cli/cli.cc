#include "cli.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "copula_ot/copula_ot.h"
#include "errors.h"
#include "input.h"
#include "render.h"

#ifndef COPULA_OT_VERSION
#define COPULA_OT_VERSION "unknown"
#endif

namespace copula_ot::cli {
namespace {

constexpr const char* kSharedCopulaHypothesis =
    "distnd treats the two samples as d-dimensional measures that share one copula and differ only in\n"
    "their margins. Under that hypothesis W_p^p is the sum of the per-coordinate W_p^p. The hypothesis\n"
    "cannot be checked from the data; pass --assume-shared-copula to assert it.\n";

struct Options {
  double p = 1.0;
  double q = 1.0;
  bool q_set = false;
  std::string format = "json";
  bool assume_shared_copula = false;
  std::size_t oracle_max_atoms = kDefaultOracleMaxAtoms;
  std::size_t resolution = 0;
  std::string grid;
  double r = 1.0;
  std::vector<std::string> inputs;
  double tolerance = kDefaultTolerance;
};

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Json method_row(const DistanceReport& r) {
  Json row = Json::object();
  row["method"] = to_string(r.method);
  row["w_p"] = r.value;
  row["w_p_pow_p"] = r.value_pth_power;
  row["error_bound"] = r.error_bound;
  return row;
}

Json plan_json(const DiscreteCoupling& plan) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < plan.mass.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < plan.mass.cols(); ++j) row.push_back(plan.mass(i, j));
    rows.push_back(row);
  }
  return rows;
}

void require_order(const Options& o) {
  if (!(o.p >= 1.0) || !std::isfinite(o.p)) throw InputError("--p must be a finite number >= 1");
  if (o.q_set && (!(o.q >= 1.0) || std::isinf(o.q) || std::isnan(o.q))) {
    throw InputError("--q must be a finite number >= 1");
  }
}

int cmd_dist1d(const Options& o, Report& report, std::ostream& err) {
  require_order(o);
  const auto f = load_distribution(o.inputs.at(0));
  const auto g = load_distribution(o.inputs.at(1));

  std::vector<DistanceReport> methods{wasserstein_1d(f, g, o.p)};
  if (o.p == 1.0) methods.push_back(w1_cdf_area(f, g));
  Json notices = Json::array();
  if (!f.is_discrete() || !g.is_discrete()) {
    notices.push_back("oracle omitted: the exact solver needs discrete inputs");
  } else if (f.size() > o.oracle_max_atoms || g.size() > o.oracle_max_atoms) {
    notices.push_back("oracle omitted: " + std::to_string(f.size()) + " x " + std::to_string(g.size()) +
                      " atoms exceeds --oracle-max-atoms " + std::to_string(o.oracle_max_atoms));
  } else {
    const auto sol = solve_exact({as_measure(f), as_measure(g), o.p, {}}, o.oracle_max_atoms);
    methods.push_back(make_report(sol.value, o.p, DistanceMethod::kOracleLp));
  }

  const DistanceReport& ref = methods.front();
  double disagreement = 0.0;
  bool agree = true;
  Json rows = Json::array();
  for (const auto& m : methods) {
    rows.push_back(method_row(m));
    const double gap = relative_gap(m.value_pth_power, ref.value_pth_power);
    disagreement = std::max(disagreement, gap);
    const double slack = (m.error_bound + ref.error_bound) / std::max(1.0, std::abs(ref.value_pth_power));
    agree = agree && gap <= o.tolerance + slack;
  }

  auto& d = report.data;
  d["p"] = o.p;
  d["w_p"] = ref.value;
  d["w_p_pow_p"] = ref.value_pth_power;
  d["error_bound"] = ref.error_bound;
  d["methods"] = rows;
  d["max_method_disagreement"] = disagreement;
  d["tolerance"] = o.tolerance;
  d["within_tolerance"] = agree;
  d["notices"] = notices;
  for (const auto& n : notices) err << "notice: " << n.get<std::string>() << "\n";
  if (!agree) err << "error: methods disagree by " << format_number(disagreement) << " (relative)\n";
  return agree ? kOk : kCheckFailed;
}

int cmd_distnd(const Options& o, Report& report, std::ostream& err) {
  if (!o.assume_shared_copula) {
    err << "error: distnd requires --assume-shared-copula\n" << kSharedCopulaHypothesis;
    return kMissingHypothesis;
  }
  require_order(o);
  const auto f = load_margins(o.inputs.at(0));
  const auto g = load_margins(o.inputs.at(1));
  if (f.size() != g.size()) {
    throw InputError("column count differs: " + std::to_string(f.size()) + " vs " + std::to_string(g.size()));
  }
  const double q = o.q_set ? o.q : o.p;
  const auto coords = coordinate_distances(f, g, o.p);
  const auto total = wasserstein_shared_copula(f, g, o.p, q);
  const double s = quantile_vector_integral(f, g, o.p);

  auto& d = report.data;
  d["p"] = o.p;
  d["q"] = q;
  d["dimension"] = f.size();
  Json rows = Json::array();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    Json row = Json::object();
    row["coordinate"] = i;
    row["w_p_pow_p"] = coords[i].value_pth_power;
    row["w_p"] = coords[i].value;
    rows.push_back(row);
  }
  d["coordinates"] = rows;
  d["shared_integral"] = s;
  d["exact"] = total.exact();
  if (total.exact()) {
    d["total_w_p_pow_p"] = total.value_pth_power;
    d["total_w_p"] = total.value;
  } else {
    d["bracket"] = {{"lower", total.bracket->lower}, {"upper", total.bracket->upper}};
  }

  double disagreement = relative_gap(s, total.value_pth_power);
  bool agree = disagreement <= o.tolerance;
  Json notices = Json::array();
  const auto mu = comonotone_measure(f);
  const auto nu = comonotone_measure(g);
  if (mu.size() > o.oracle_max_atoms || nu.size() > o.oracle_max_atoms) {
    notices.push_back("oracle omitted: " + std::to_string(mu.size()) + " x " + std::to_string(nu.size()) +
                      " joint atoms exceeds --oracle-max-atoms " + std::to_string(o.oracle_max_atoms));
  } else {
    const double oracle = solve_exact({mu, nu, o.p, q}, o.oracle_max_atoms).value;
    Json check = Json::object();
    check["w_pq_pow_p"] = oracle;
    if (total.exact()) {
      const double gap = relative_gap(oracle, total.value_pth_power);
      disagreement = std::max(disagreement, gap);
      agree = agree && gap <= o.tolerance;
    } else {
      const double scale = std::max(1.0, oracle);
      const bool inside = oracle >= total.bracket->lower - o.tolerance * scale &&
                          oracle <= total.bracket->upper + o.tolerance * scale;
      check["inside_bracket"] = inside;
      agree = agree && inside;
    }
    d["oracle"] = check;
  }
  d["max_method_disagreement"] = disagreement;
  d["tolerance"] = o.tolerance;
  d["within_tolerance"] = agree;
  d["notices"] = notices;
  for (const auto& n : notices) err << "notice: " << n.get<std::string>() << "\n";
  if (!agree) err << "error: shared-copula value and oracle disagree\n";
  return agree ? kOk : kCheckFailed;
}

int cmd_check_copula(const Options& o, Report& report, std::ostream&) {
  if (o.inputs.size() != 2) throw InputError("check-copula expects LABEL DIM");
  std::string label = o.inputs[0];
  std::transform(label.begin(), label.end(), label.begin(), [](unsigned char c) { return std::toupper(c); });
  double dim_value = 0.0;
  if (!parse_number(o.inputs[1], dim_value) || dim_value != std::floor(dim_value) || dim_value < 2 ||
      dim_value > 1e6) {
    throw InputError("dimension must be an integer >= 2, got '" + o.inputs[1] + "'");
  }
  const auto dim = static_cast<std::size_t>(dim_value);
  std::optional<CopulaFn> c;
  if (label == "M") c = m_copula(dim);
  if (label == "W") c = w_lower(dim);
  if (label == "PI") c = pi_copula(dim);
  if (!c) throw InputError("unknown copula label '" + o.inputs[0] + "' (expected M, W or Pi)");
  const std::size_t resolution = o.resolution ? o.resolution : default_resolution(dim);
  const auto v = validate_copula(*c, resolution);

  auto& d = report.data;
  d["label"] = to_string(c->label());
  d["dimension"] = dim;
  d["resolution"] = resolution;
  d["passed"] = v.passed();
  Json axioms = Json::array();
  Json witnesses = Json::array();
  for (const AxiomResult* a : {&v.grounded, &v.uniform_margins, &v.d_increasing}) {
    Json row = Json::object();
    row["axiom"] = to_string(a->axiom);
    row["passed"] = a->passed;
    row["checked"] = a->checked;
    row["violations"] = a->violations;
    axioms.push_back(row);
    for (const auto& w : a->witnesses) {
      Json wrow = Json::object();
      wrow["axiom"] = to_string(w.axiom);
      wrow["point"] = w.point;
      wrow["box_upper"] = w.box_upper;
      wrow["value"] = w.value;
      witnesses.push_back(wrow);
    }
  }
  d["axioms"] = axioms;
  d["witnesses"] = witnesses;
  return kOk;
}

int cmd_oracle_compare(const Options& o, Report& report, std::ostream& err) {
  require_order(o);
  const auto f = load_distribution(o.inputs.at(0));
  const auto g = load_distribution(o.inputs.at(1));
  if (!f.is_discrete() || !g.is_discrete()) throw InputError("oracle-compare needs discrete inputs");
  if (f.size() > kMaxEnumerationAtoms || g.size() > kMaxEnumerationAtoms) {
    throw CapacityError("oracle-compare enumerates couplings of at most " + std::to_string(kMaxEnumerationAtoms) +
                        " atoms per side; got " + std::to_string(f.size()) + " x " + std::to_string(g.size()));
  }
  const auto vertices = enumerate_extreme_couplings(as_measure(f), as_measure(g));
  const auto comonotone = monotone_plan_1d(f, g);
  const double i_m = direct_expectation(comonotone, o.p);
  const double oracle = solve_exact({as_measure(f), as_measure(g), o.p, {}}, o.oracle_max_atoms).value;
  const double quantile = wasserstein_1d(f, g, o.p).value_pth_power;

  Json rows = Json::array();
  double min_gap = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const auto& plan = vertices[k];
    bool same = true;
    for (std::size_t e = 0; e < plan.mass.data().size(); ++e) {
      same = same && std::abs(plan.mass.data()[e] - comonotone.mass.data()[e]) <= 1e-12;
    }
    found = found || same;
    const double value = direct_expectation(plan, o.p);
    min_gap = std::min(min_gap, value - i_m);
    Json row = Json::object();
    row["vertex"] = k;
    row["comonotone"] = same;
    row["i_h"] = value;
    if (o.p > 1.0) row["dall_aglio"] = dall_aglio_functional(plan, o.p);
    row["gap"] = value - i_m;
    row["plan"] = plan_json(plan);
    rows.push_back(row);
  }
  const bool minimal = min_gap >= -kMinimalitySlack;
  const double disagreement = std::max(relative_gap(i_m, oracle), relative_gap(quantile, oracle));
  const bool agree = disagreement <= o.tolerance;

  auto& d = report.data;
  d["p"] = o.p;
  d["vertex_count"] = vertices.size();
  d["comonotone_value"] = i_m;
  d["comonotone_is_vertex"] = found;
  d["oracle_value"] = oracle;
  d["quantile_integral"] = quantile;
  d["min_gap"] = min_gap;
  d["comonotone_minimal"] = minimal;
  d["max_method_disagreement"] = disagreement;
  d["tolerance"] = o.tolerance;
  d["within_tolerance"] = agree;
  d["couplings"] = rows;
  if (!minimal) err << "error: an extreme coupling beats the comonotone plan by " << format_number(-min_gap) << "\n";
  if (!agree) err << "error: comonotone value, quantile integral and oracle disagree\n";
  return minimal && agree ? kOk : kCheckFailed;
}

int cmd_diagnose_tails(const Options& o, Report& report, std::ostream&) {
  if (o.grid.empty()) throw InputError("diagnose-tails needs --grid a,b,c");
  if (!(o.r > 0.0) || !std::isfinite(o.r)) throw InputError("--r must be a positive number");
  std::vector<double> grid;
  std::stringstream ss(o.grid);
  for (std::string token; std::getline(ss, token, ',');) {
    double x = 0.0;
    const auto first = token.find_first_not_of(' ');
    const auto last = token.find_last_not_of(' ');
    if (first == std::string::npos || !parse_number(std::string_view(token).substr(first, last - first + 1), x)) {
      throw InputError("--grid: '" + token + "' is not a number");
    }
    grid.push_back(x);
  }
  const auto dist = load_distribution(o.inputs.at(0));
  const auto table = tail_decay_diagnostic(dist, o.r, grid);
  auto& d = report.data;
  d["r"] = o.r;
  Json rows = Json::array();
  for (const auto& row : table) {
    Json j = Json::object();
    j["x"] = row.x;
    j["upper_tail"] = row.upper;
    j["lower_tail"] = row.lower;
    rows.push_back(j);
  }
  d["rows"] = rows;
  return kOk;
}

double parse_tolerance(const Environment& env) {
  if (!env.tolerance) return kDefaultTolerance;
  double tol = 0.0;
  if (!parse_number(*env.tolerance, tol) || !(tol > 0.0)) {
    throw InputError("COPULA_OT_TOLERANCE must be a positive number, got '" + *env.tolerance + "'");
  }
  return tol;
}

}  // namespace

Environment Environment::from_process() {
  Environment env;
  if (const char* tol = std::getenv("COPULA_OT_TOLERANCE")) env.tolerance = tol;
  return env;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  Options o;
  CLI::App app{"Wasserstein distances through the comonotonicity copula", "copula_ot"};
  app.require_subcommand(1);
  app.set_version_flag("--version", COPULA_OT_VERSION);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "plain"}));
  };
  auto orders = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "Wasserstein order (>= 1)");
    sub->add_option_function<double>("--q", [&](double q) {
          o.q = q;
          o.q_set = true;
        }, "Ground-norm order (default p)");
    sub->add_option("--oracle-max-atoms", o.oracle_max_atoms, "Per-side atom limit of the exact solver");
  };

  auto* dist1d = app.add_subcommand("dist1d", "W_p between two one-dimensional distributions");
  dist1d->add_option("inputs", o.inputs, "Sample files or specs")->expected(2)->required();
  orders(dist1d);
  common(dist1d);

  auto* distnd = app.add_subcommand("distnd", "W_p between two multi-column samples sharing a copula");
  distnd->add_option("inputs", o.inputs, "Sample files")->expected(2)->required();
  distnd->add_flag("--assume-shared-copula", o.assume_shared_copula, "Assert that both samples share one copula");
  orders(distnd);
  common(distnd);

  auto* check = app.add_subcommand("check-copula", "Validate a built-in copula on a grid");
  check->add_option("inputs", o.inputs, "LABEL (M, W, Pi) and DIM")->expected(2)->required();
  check->add_option("--resolution", o.resolution, "Grid points per axis")->check(CLI::PositiveNumber);
  common(check);

  auto* compare = app.add_subcommand("oracle-compare", "Compare the comonotone plan against every extreme coupling");
  compare->add_option("inputs", o.inputs, "Sample files or specs")->expected(2)->required();
  orders(compare);
  common(compare);

  auto* tails = app.add_subcommand("diagnose-tails", "Tail decay terms x^r (1 - F(x)) and x^r F(-x)");
  tails->add_option("inputs", o.inputs, "Sample file or spec")->expected(1)->required();
  tails->add_option("--r", o.r, "Tail exponent r > 0");
  tails->add_option("--grid", o.grid, "Comma-separated increasing positive points");
  common(tails);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Report report;
  report.metadata["tool"] = "copula_ot";
  report.metadata["version"] = COPULA_OT_VERSION;
  int code = kOk;
  try {
    o.tolerance = parse_tolerance(env);
    const auto format = o.format == "csv" ? Format::kCsv : o.format == "plain" ? Format::kPlain : Format::kJson;
    if (dist1d->parsed()) {
      report.command = "dist1d";
      code = cmd_dist1d(o, report, err);
    } else if (distnd->parsed()) {
      report.command = "distnd";
      code = cmd_distnd(o, report, err);
      if (code == kMissingHypothesis) return code;
    } else if (check->parsed()) {
      report.command = "check-copula";
      code = cmd_check_copula(o, report, err);
    } else if (compare->parsed()) {
      report.command = "oracle-compare";
      code = cmd_oracle_compare(o, report, err);
    } else {
      report.command = "diagnose-tails";
      code = cmd_diagnose_tails(o, report, err);
    }
    render(report, format, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const CertificateError& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const copula_ot::Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}

}  // namespace copula_ot::cli
