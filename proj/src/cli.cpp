#include "nls1d/cli.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nls1d/criteria.hpp"
#include "nls1d/errors.hpp"
#include "nls1d/format.hpp"
#include "nls1d/profile.hpp"
#include "nls1d/variational.hpp"

namespace nls1d {
namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::string terms;
  std::string spec_file;
  std::optional<double> omega;
  std::optional<double> lambda;
  int points = 33;
  double grid_halfwidth = 20.0;
  int grid_n = 2001;
  std::optional<double> tol;
  std::string out;
  std::uint64_t seed = 0;
  std::string method = "quadrature";
  std::string signs;
  std::string exponents;
  std::string coeffs;
  std::optional<double> omega_min;
  std::optional<double> omega_max;
  int samples = 10000;
};

Json real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_real(const std::optional<double>& v) { return v ? real(*v) : Json(nullptr); }

Nonlinearity load_nonlinearity(const Options& o) {
  if (!o.terms.empty()) return parse_nonlinearity(o.terms);
  if (o.spec_file.empty()) throw InputError("one of --terms or --spec-file is required");
  std::ifstream in(o.spec_file);
  if (!in) throw InputError("cannot read spec file '" + o.spec_file + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_nonlinearity(text);
}

double require_positive(const std::optional<double>& v, const char* flag) {
  if (!v) throw InputError(std::string(flag) + " is required");
  if (!(*v > 0.0) || !std::isfinite(*v)) throw InputError(std::string(flag) + " must be positive");
  return *v;
}

void require_grid(const Options& o) {
  if (!(o.grid_halfwidth > 0.0)) throw InputError("--grid-halfwidth must be positive");
  if (o.grid_n < 3 || o.grid_n % 2 == 0) throw InputError("--grid-n must be odd and at least 3");
  if (o.tol && !(*o.tol > 0.0)) throw InputError("--tol must be positive");
}

std::vector<double> split_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InputError(std::string(flag) + ": bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

SignTriple parse_signs(const std::string& text) {
  SignTriple s{0, 0, 0};
  std::vector<int> v;
  if (text.find(',') == std::string::npos) {
    for (char ch : text) {
      if (ch == '+') v.push_back(1);
      else if (ch == '-') v.push_back(-1);
      else if (ch == '0') v.push_back(0);
      else throw InputError("--signs: expected characters from '+-0' or a comma list");
    }
  } else {
    for (double d : split_reals(text, "--signs")) {
      if (d != -1.0 && d != 0.0 && d != 1.0) throw InputError("--signs: entries must be -1, 0 or 1");
      v.push_back(static_cast<int>(d));
    }
  }
  if (v.empty() || v.size() > 3) throw InputError("--signs: one to three signs required");
  std::copy(v.begin(), v.end(), s.begin());
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << content;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Json verdict_json(const Verdict& v) {
  Json j;
  j["holds"] = v.holds;
  j["witness"] = optional_real(v.witness);
  return j;
}

Json row_json(const ClassificationRow& r) {
  Json j;
  j["signs"] = r.signs;
  Json exponents = Json::array();
  for (std::size_t i = 0; i < 3; ++i) exponents.push_back(r.signs[i] ? Json(r.exponents[i]) : Json(nullptr));
  j["exponents"] = exponents;
  Json regime = Json::array();
  for (const auto& g : r.regime) regime.push_back(g ? Json(*g) : Json(nullptr));
  j["sign_6_minus_exponent"] = regime;
  j["num_A"] = r.a_count;
  j["omega_bounded"] = r.omega_bounded;
  j["verdict"] = to_string(r.verdict);
  j["draws"] = r.draws;
  j["note"] = r.note;
  return j;
}

int cmd_check(const Options& o, Json& rep) {
  const auto nl = load_nonlinearity(o);
  const auto c = check_conditions(nl);
  rep["nonlinearity"] = to_inline(nl);
  rep["g1"] = verdict_json(c.g1);
  rep["g2b"] = verdict_json(c.g2b);
  rep["g3"] = verdict_json(c.g3);
  rep["g4"] = verdict_json(c.g4);
  rep["g5"] = verdict_json(c.g5);
  rep["A"] = c.a_set;
  rep["omega"] = {{"lower", c.omega.lower}, {"upper", real(c.omega.upper)}, {"bounded", c.omega.bounded}};
  rep["sup_V"] = real(c.sup_v);
  rep["all_hold"] = c.all_hold();
  if (!c.all_hold()) rep["reason"] = c.first_failure();
  return c.all_hold() ? kExitOk : kExitNegative;
}

int cmd_classify(const Options& o, Json& rep) {
  if (o.signs.empty() || o.exponents.empty()) throw InputError("classify needs --signs and --exponents");
  const auto signs = parse_signs(o.signs);
  const auto ex = split_reals(o.exponents, "--exponents");
  std::array<double, 3> exponents{0.0, 0.0, 0.0};
  std::size_t k = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (signs[i] == 0) continue;
    if (k >= ex.size()) throw InputError("--exponents: one exponent per non-zero sign");
    exponents[i] = ex[k++];
  }
  if (k != ex.size()) throw InputError("--exponents: one exponent per non-zero sign");
  std::optional<std::array<double, 3>> coeffs;
  if (!o.coeffs.empty()) {
    const auto cv = split_reals(o.coeffs, "--coeffs");
    std::array<double, 3> c{1.0, 1.0, 1.0};
    std::size_t m = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (signs[i] == 0) continue;
      if (m >= cv.size()) throw InputError("--coeffs: one coefficient per non-zero sign");
      c[i] = cv[m++];
    }
    if (m != cv.size()) throw InputError("--coeffs: one coefficient per non-zero sign");
    coeffs = c;
  }
  rep["row"] = row_json(classify_family(signs, exponents, coeffs, o.seed));
  return kExitOk;
}

ProfileOptions profile_options(const Options& o) {
  ProfileOptions po;
  if (o.method == "quadrature") po.method = ProfileMethod::quadrature;
  else if (o.method == "shooting") po.method = ProfileMethod::shooting;
  else throw InputError("--method must be quadrature or shooting");
  return po;
}

int cmd_profile(const Options& o, Json& rep) {
  const auto nl = load_nonlinearity(o);
  const double omega = require_positive(o.omega, "--omega");
  const auto po = profile_options(o);
  const auto sol = solve_profile(nl, omega, po);
  rep["nonlinearity"] = to_inline(nl);
  rep["omega"] = omega;
  rep["method"] = o.method;
  rep["r_star"] = sol.r_star;
  rep["mass"] = sol.mass;
  rep["energy"] = sol.energy;
  rep["residual_first_integral"] = sol.residual_first_integral;
  rep["nodes"] = sol.xs.size();
  rep["x_last"] = sol.xs[sol.xs.size() - 1];
  if (!o.out.empty()) {
    std::ostringstream csv;
    const std::vector<std::vector<double>> cols{to_std(sol.xs), to_std(sol.rs)};
    write_csv(csv, {"x", "R"}, cols);
    write_file(o.out, csv.str());
    rep["out"] = o.out;
  }
  return kExitOk;
}

int cmd_curve(const Options& o, Json& rep) {
  const auto nl = load_nonlinearity(o);
  if (o.points < 3) throw InputError("--points must be at least 3");
  if (o.omega_min.has_value() != o.omega_max.has_value())
    throw InputError("--omega-min and --omega-max go together");
  std::optional<std::pair<double, double>> range;
  if (o.omega_min) {
    if (!(*o.omega_min > 0.0 && *o.omega_min < *o.omega_max))
      throw InputError("need 0 < --omega-min < --omega-max");
    range = std::make_pair(*o.omega_min, *o.omega_max);
  }
  const auto c = lambda_curve(nl, o.points, range);
  rep["nonlinearity"] = to_inline(nl);
  rep["points"] = o.points;
  rep["omega_min"] = c.omegas[0];
  rep["omega_max"] = c.omegas[c.omegas.size() - 1];
  rep["monotone"] = c.monotone;
  rep["first_violation"] = c.first_violation ? Json(*c.first_violation) : Json(nullptr);
  rep["min_slope"] = c.slopes.minCoeff();
  if (!o.out.empty()) {
    std::ostringstream csv;
    const std::vector<std::vector<double>> cols{to_std(c.omegas), to_std(c.r_stars), to_std(c.lambdas),
                                                to_std(c.energies), to_std(c.slopes)};
    write_csv(csv, {"omega", "r_star", "lambda", "energy", "dlambda_domega"}, cols);
    write_file(o.out, csv.str());
    rep["out"] = o.out;
  }
  return kExitOk;
}

int cmd_certify(const Options& o, Json& rep) {
  const auto nl = load_nonlinearity(o);
  if (o.points < 3) throw InputError("--points must be at least 3");
  const auto c = uniqueness_certificate(nl, o.points);
  rep["nonlinearity"] = c.nonlinearity;
  rep["verdict"] = to_string(c.verdict);
  rep["reason"] = c.reason;
  rep["omega_lower"] = c.omega_lower;
  rep["omega_upper"] = real(c.omega_upper);
  rep["min_slope"] = c.min_slope;
  rep["max_lambda"] = c.max_lambda;
  rep["points"] = c.n_points;
  return c.verdict == Certification::CertifiedUnique ? kExitOk : kExitNegative;
}

int cmd_minimize(const Options& o, Json& rep) {
  const auto nl = load_nonlinearity(o);
  const double lambda = require_positive(o.lambda, "--lambda");
  require_grid(o);
  MinimizerOptions mo;
  mo.half_width = o.grid_halfwidth;
  mo.n = o.grid_n;
  if (o.tol) mo.tol = *o.tol;
  const auto r = minimize_on_sphere(nl, lambda, mo);
  rep["nonlinearity"] = to_inline(nl);
  rep["lambda"] = lambda;
  rep["omega_estimate"] = r.omega_estimate;
  rep["energy"] = r.energy;
  rep["peak"] = r.u[r.u.center()];
  rep["gradient_residual"] = r.gradient_residual;
  rep["iterations"] = r.iterations;
  rep["warnings"] = r.warnings;
  if (!o.out.empty()) {
    std::vector<double> xs(r.u.size());
    for (Eigen::Index i = 0; i < r.u.size(); ++i) xs[i] = r.u.x(i);
    std::ostringstream csv;
    const std::vector<std::vector<double>> cols{xs, to_std(r.u.values())};
    write_csv(csv, {"x", "u"}, cols);
    write_file(o.out, csv.str());
    rep["out"] = o.out;
  }
  return kExitOk;
}

int cmd_spectrum(const Options& o, Json& rep) {
  const auto nl = load_nonlinearity(o);
  const double omega = require_positive(o.omega, "--omega");
  require_grid(o);
  SpectralOptions so;
  if (o.tol) so.tol = *o.tol;
  const auto r0 = discrete_branch(nl, omega, o.grid_halfwidth, o.grid_n);
  const auto s = hessian_spectrum(nl, r0, omega, so);
  rep["nonlinearity"] = to_inline(nl);
  rep["omega"] = omega;
  rep["eig_min_unrestricted"] = s.eig_min_unrestricted;
  rep["eig_min_orthogonal"] = s.eig_min_orthogonal;
  rep["zero_mode_residual"] = s.zero_mode_residual;
  rep["lplus_s0_residual"] = s.lplus_s0_residual;
  rep["lplus_s0_pairing"] = s.lplus_s0_pairing;
  rep["s0_pairing"] = s.s0_pairing;
  rep["omega_step"] = s.omega_step;
  rep["iterations_unrestricted"] = s.iterations_unrestricted;
  rep["iterations_orthogonal"] = s.iterations_orthogonal;
  return kExitOk;
}

int cmd_lemma(const Options& o, Json& rep) {
  if (o.samples < 1) throw InputError("--samples must be positive");
  const auto s = lemma_m_sweep(o.samples, std::max(1, o.samples / 10), o.seed);
  rep["seed"] = o.seed;
  rep["interior_samples"] = s.interior_samples;
  rep["boundary_samples"] = s.boundary_samples;
  rep["max_interior"] = s.max_interior;
  rep["max_boundary_deviation"] = s.max_boundary_deviation;
  rep["M_3_2_1"] = s.m_321;
  rep["d_star_3_4_5"] = d_star(3.0, 4.0, 5.0);
  return kExitOk;
}

int cmd_table(const Options& o, Json& rep) {
  const auto rows = classification_table(o.seed);
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(row_json(r));
  rep["seed"] = o.seed;
  rep["rows"] = arr;
  if (!o.out.empty()) {
    std::ostringstream csv;
    csv << "eps_a,eps_b,eps_c,sign_6_p,sign_6_q,sign_6_r,num_A,omega_bounded,verdict,p,q,r,note\n";
    for (const auto& r : rows) {
      for (int s : r.signs) csv << s << ',';
      for (const auto& g : r.regime) csv << (g ? std::to_string(*g) : std::string()) << ',';
      csv << r.a_count << ',' << (r.omega_bounded ? 1 : 0) << ',' << to_string(r.verdict);
      for (std::size_t i = 0; i < 3; ++i) csv << ',' << (r.signs[i] ? format_real(r.exponents[i]) : std::string());
      csv << ',' << r.note << '\n';
    }
    write_file(o.out, csv.str());
    rep["out"] = o.out;
  }
  return kExitOk;
}

// CLI11 reads a leading '-' as a flag, so "--terms -1*1*4" is joined into
// "--terms=-1*1*4" before parsing.
std::vector<std::string> join_values(const std::vector<std::string>& args) {
  static const std::vector<std::string> valued{"--terms", "--signs", "--coeffs", "--exponents"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i + 1 < args.size() && std::find(valued.begin(), valued.end(), args[i]) != valued.end() &&
        !args[i + 1].empty() && args[i + 1][0] == '-' && args[i + 1].rfind("--", 0) != 0) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground states of 1D NLS with power-sum nonlinearities", "nls1d"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_spec = [&](CLI::App* sub) {
    auto* t = sub->add_option("--terms", o.terms, "inline terms sign*coeff*exponent,...");
    auto* f = sub->add_option("--spec-file", o.spec_file, "JSON or inline spec file");
    t->excludes(f);
  };
  const auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid-halfwidth", o.grid_halfwidth, "half-width X of [-X, X]");
    sub->add_option("--grid-n", o.grid_n, "number of grid nodes (odd)");
    sub->add_option("--tol", o.tol, "convergence tolerance");
  };

  auto* check = app.add_subcommand("check", "hypotheses G1-G5, A and Omega");
  add_spec(check);
  auto* classify = app.add_subcommand("classify", "classify one sign pattern");
  classify->add_option("--signs", o.signs, "e.g. +-+ or 1,-1,1")->required();
  classify->add_option("--exponents", o.exponents, "comma list, one per non-zero sign")->required();
  classify->add_option("--coeffs", o.coeffs, "comma list, needed for (-,+,-)");
  classify->add_option("--seed", o.seed);
  auto* profile = app.add_subcommand("profile", "ground-state profile at one frequency");
  add_spec(profile);
  profile->add_option("--omega", o.omega)->required();
  profile->add_option("--method", o.method, "quadrature or shooting");
  profile->add_option("--out", o.out, "CSV x,R");
  auto* curve = app.add_subcommand("curve", "lambda(omega) along the branch");
  add_spec(curve);
  curve->add_option("--points", o.points);
  curve->add_option("--omega-min", o.omega_min);
  curve->add_option("--omega-max", o.omega_max);
  curve->add_option("--out", o.out, "CSV omega,r_star,lambda,energy,dlambda_domega");
  auto* certify = app.add_subcommand("certify", "uniqueness certificate");
  add_spec(certify);
  certify->add_option("--points", o.points);
  auto* minimize = app.add_subcommand("minimize", "energy minimizer at fixed mass");
  add_spec(minimize);
  minimize->add_option("--lambda", o.lambda)->required();
  add_grid(minimize);
  minimize->add_option("--out", o.out, "CSV x,u");
  auto* spectrum = app.add_subcommand("spectrum", "spectrum of the linearized operator");
  add_spec(spectrum);
  spectrum->add_option("--omega", o.omega)->required();
  add_grid(spectrum);
  auto* lemma = app.add_subcommand("lemma", "seeded checks of M <= 1");
  lemma->add_option("--samples", o.samples);
  lemma->add_option("--seed", o.seed);
  auto* table = app.add_subcommand("table", "three-term classification table");
  table->add_option("--seed", o.seed);
  table->add_option("--out", o.out, "CSV table");

  std::vector<std::string> args = join_values(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  Json rep;
  rep["command"] = app.get_subcommands().front()->get_name();
  int code = kExitOk;
  try {
    if (*check) code = cmd_check(o, rep);
    else if (*classify) code = cmd_classify(o, rep);
    else if (*profile) code = cmd_profile(o, rep);
    else if (*curve) code = cmd_curve(o, rep);
    else if (*certify) code = cmd_certify(o, rep);
    else if (*minimize) code = cmd_minimize(o, rep);
    else if (*spectrum) code = cmd_spectrum(o, rep);
    else if (*lemma) code = cmd_lemma(o, rep);
    else if (*table) code = cmd_table(o, rep);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const BranchError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNegative;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  rep["exit_code"] = code;
  out << rep.dump(2) << '\n';
  return code;
}

}  // namespace nls1d
