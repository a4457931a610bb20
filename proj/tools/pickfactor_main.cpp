#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pickfactor/factorize.hpp"
#include "pickfactor/json_io.hpp"
#include "pickfactor/pick.hpp"
#include "pickfactor/poly_parser.hpp"
#include "pickfactor/version.hpp"

namespace pf = pickfactor;
using pf::Json;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  double tol = -1.0;  // negative: module defaults
  bool table = false;
  bool json = false;
  int max_degree = pf::KernelSpace::kDefaultWorkingDegree;
  bool timing = false;
};

struct SpaceOpts {
  std::string family = "dirichlet";
  int dim = 1;
  double alpha = 1.0;
  std::vector<double> coeffs;
};

void add_space_flags(CLI::App* cmd, SpaceOpts& opts, const std::string& prefix) {
  const std::string dash = "--" + prefix;
  cmd->add_option(dash + "space", opts.family,
                  "kernel family: hardy, dirichlet, d_alpha, drury_arveson, "
                  "custom");
  cmd->add_option(dash + "dim", opts.dim, "ambient dimension");
  cmd->add_option(dash + "alpha", opts.alpha, "exponent for d_alpha");
  cmd->add_option(dash + "coeffs", opts.coeffs,
                  "kernel coefficients for a custom space");
}

pf::KernelSpace make_space(const SpaceOpts& opts, const GlobalOpts& global) {
  const pf::Family family = pf::family_from_name(opts.family);
  switch (family) {
    case pf::Family::hardy: return pf::KernelSpace::hardy(global.max_degree);
    case pf::Family::dirichlet:
      return pf::KernelSpace::dirichlet(global.max_degree);
    case pf::Family::d_alpha:
      return pf::KernelSpace::d_alpha(opts.alpha, opts.dim, global.max_degree);
    case pf::Family::drury_arveson:
      return pf::KernelSpace::drury_arveson(opts.dim, global.max_degree);
    case pf::Family::custom:
      return pf::KernelSpace::custom(opts.coeffs, opts.dim);
  }
  throw pf::Error(pf::ErrorKind::bad_input, "unknown family");
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest(const Json& inputs) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(inputs.dump())));
  return buf;
}

Json make_report(const std::string& command, const Json& options,
                 const Json& inputs, const GlobalOpts& global) {
  Json report;
  report["command"] = command;
  report["options"] = options;
  report["inputs_digest"] = digest(inputs);
  report["seed"] = global.seed;
  report["version"] = pf::kVersion;
  report["wall_ms"] = nullptr;
  report["outputs"] = Json::object();
  report["residuals"] = Json::object();
  return report;
}

void flatten(const Json& j, const std::string& path,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten(value, path.empty() ? key : path + "." + key, rows);
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const Json& value : j)
      flatten(value, path + "[" + std::to_string(i++) + "]", rows);
  } else {
    rows.emplace_back(path, j.dump());
  }
}

void emit(const Json& report, const GlobalOpts& global) {
  if (!global.table) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t width = 0;
  for (const auto& [key, value] : rows) width = std::max(width, key.size());
  for (const auto& [key, value] : rows)
    std::cout << key << std::string(width - key.size() + 2, ' ') << value
              << "\n";
}

Json read_data(const std::string& inline_json, const std::string& file) {
  if (!inline_json.empty() && !file.empty())
    throw pf::Error(pf::ErrorKind::bad_input,
                    "pass either --data or --input, not both");
  std::string text = inline_json;
  if (text.empty()) {
    if (file.empty())
      throw pf::Error(pf::ErrorKind::bad_input,
                      "missing input: pass --data or --input");
    std::ifstream in(file);
    if (!in)
      throw pf::Error(pf::ErrorKind::bad_input, "cannot open " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw pf::Error(pf::ErrorKind::bad_input,
                    std::string("malformed JSON: ") + e.what());
  }
}

int resolve_budget_flag(int budget_flag) {
  if (budget_flag >= 0) return budget_flag;
  if (const char* env = std::getenv("PICKFACTOR_BUDGET")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return -1;
}

pf::FactorOptions make_factor_options(const GlobalOpts& global, int restarts) {
  pf::FactorOptions options;
  if (global.tol > 0.0) options.tol_moments = global.tol;
  options.restarts = restarts;
  options.seed = global.seed;
  return options;
}

Json factor_options_json(const pf::FactorOptions& options) {
  return Json{{"tol_moments", options.tol_moments},
              {"restarts", options.restarts},
              {"probe_degree", options.probe_degree}};
}

pf::PickProblem pick_problem_from_json(const Json& data,
                                       const GlobalOpts& global) {
  if (!data.contains("space") || !data.contains("points") ||
      !data.contains("targets"))
    throw pf::Error(pf::ErrorKind::bad_input,
                    "pick data needs 'space', 'points', 'targets'");
  pf::KernelSpace space = pf::space_from_json(data["space"]);
  std::vector<pf::Point> points;
  for (const Json& p : data["points"])
    points.push_back(pf::point_from_json(p, space.dim()));
  std::vector<pf::cplx> targets;
  for (const Json& t : data["targets"])
    targets.push_back(pf::complex_from_json(t));
  int truncation = data.contains("truncation")
                       ? data["truncation"].get<int>()
                       : std::min(space.working_degree(), global.max_degree);
  return pf::PickProblem{std::move(space), std::move(points),
                         std::move(targets), truncation};
}

Json eigs_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json weights_to_json(const std::vector<pf::cplx>& ws) {
  Json out = Json::array();
  for (const pf::cplx& w : ws) out.push_back(pf::complex_to_json(w));
  return out;
}

// Registered by each subcommand; main() runs it after parsing so that all
// output and exit-code handling sits in one place.
std::function<int()> g_action;

struct ExampleRow {
  std::string id;
  std::string quantity;
  double expected;
  double computed;
  double tol;
};

int run_examples(const GlobalOpts& global) {
  std::vector<ExampleRow> rows;
  const auto add = [&rows](const std::string& id, const std::string& quantity,
                           double expected, double computed, double tol) {
    rows.push_back(ExampleRow{id, quantity, expected, computed, tol});
  };

  // Dirichlet lines z - lambda.
  {
    const pf::KernelSpace space = pf::KernelSpace::dirichlet(global.max_degree);
    const double root2 = std::sqrt(2.0);
    for (const pf::cplx lambda :
         {pf::cplx(1.0, 0.0), pf::cplx(0.5, 0.0), pf::cplx(1.0, 0.3)}) {
      pf::MultiPoly f(space);
      f.set_coeff({1}, pf::cplx(1.0, 0.0));
      f.set_coeff({0}, -lambda);
      const pf::FactorOptions options = make_factor_options(global, 16);
      const pf::FactorResult r = pf::subinner_free_outer(space, f, options);
      std::ostringstream id;
      id << "dirichlet-line(" << lambda.real() << (lambda.imag() >= 0 ? "+" : "")
         << lambda.imag() << "i)";
      add(id.str(), "outer const", root2, r.outer.coeff({0}).real(),
          1e-8);
      add(id.str(), "outer z-coeff",
          0.0, std::abs(r.outer.coeff({1}) - (-std::conj(lambda) / root2)),
          1e-8);
      const pf::SarasonSeries v = pf::sarason_series(space, f, 1);
      add(id.str(), "sarason const", 2.0 + std::norm(lambda),
          v.series.coeff({0}).real(), 1e-10);
      add(id.str(), "sarason z-coeff", 0.0,
          std::abs(v.series.coeff({1}) - (-2.0 * std::conj(lambda))), 1e-10);
    }
    for (const double lambda : {1.5, 2.0}) {
      pf::MultiPoly f(space);
      f.set_coeff({1}, pf::cplx(1.0, 0.0));
      f.set_coeff({0}, pf::cplx(-lambda, 0.0));
      const pf::OuterCheck check =
          pf::is_free_outer(space, f, 1e-8, make_factor_options(global, 16));
      add("dirichlet-line(" + std::to_string(lambda) + ")", "gain", 0.0,
          check.gain, 1e-8);
    }
  }

  // Drury-Arveson quadratic 1 + 2 z1 z2.
  {
    const pf::KernelSpace space =
        pf::KernelSpace::drury_arveson(2, global.max_degree);
    pf::MultiPoly f(space);
    f.set_coeff({0, 0}, pf::cplx(1.0, 0.0));
    f.set_coeff({1, 1}, pf::cplx(2.0, 0.0));
    const pf::FactorResult r =
        pf::subinner_free_outer(space, f, make_factor_options(global, 16));
    const double root2 = std::sqrt(2.0);
    add("da-quadratic", "outer const", root2, r.outer.coeff({0, 0}).real(),
        1e-8);
    add("da-quadratic", "outer z1z2-coeff", root2,
        r.outer.coeff({1, 1}).real(), 1e-8);
    const pf::MomentProfile prof = pf::moment_profile(space, f, 2);
    add("da-quadratic", "norm_sq", 3.0, prof.norm_sq, 1e-10);
    add("da-quadratic", "moment z1z2", 1.0, prof.at({1, 1}).real(), 1e-10);
  }

  // Drury-Arveson product (1 - z1)(1 - z2): restricted objective along the
  // symmetric slice, r(a) = a^2 + 18 a^2 / (1 + 2 a^2)^2 + 1 / (2 a^2);
  // the gain of the factorization matches the slice optimum a* - 1.
  {
    const pf::KernelSpace space =
        pf::KernelSpace::drury_arveson(2, global.max_degree);
    pf::MultiPoly f(space);
    f.set_coeff({0, 0}, pf::cplx(1.0, 0.0));
    f.set_coeff({1, 0}, pf::cplx(-1.0, 0.0));
    f.set_coeff({0, 1}, pf::cplx(-1.0, 0.0));
    f.set_coeff({1, 1}, pf::cplx(1.0, 0.0));
    const auto slice = [](double a) {
      const double a2 = a * a;
      const double denom = 1.0 + 2.0 * a2;
      return a2 + 18.0 * a2 / (denom * denom) + 1.0 / (2.0 * a2);
    };
    add("da-product", "slice r(1)", 3.5, slice(1.0), 1e-12);
    const double h = 1e-6;
    add("da-product", "slice r'(1)", -1.0 / 3.0,
        (slice(1.0 + h) - slice(1.0 - h)) / (2.0 * h), 1e-6);
    double lo = 1.0 + 1e-9;
    double hi = 3.0;
    while (slice(hi) < 3.5) hi *= 2.0;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (slice(mid) < 3.5 ? lo : hi) = mid;
    }
    const double a_star = 0.5 * (lo + hi);
    const pf::OuterCheck check =
        pf::is_free_outer(space, f, 1e-8, make_factor_options(global, 32));
    add("da-product", "gain vs slice", a_star - 1.0, check.gain, 1e-6);
  }

  // Fock outer defect of 1 - (1/6) sum of the balanced degree-4 words.
  {
    pf::FreePoly F(2);
    F.set_coeff({}, pf::cplx(1.0, 0.0));
    for (const pf::Word& w :
         {pf::Word{1, 1, 2, 2}, pf::Word{1, 2, 1, 2}, pf::Word{1, 2, 2, 1},
          pf::Word{2, 1, 1, 2}, pf::Word{2, 1, 2, 1}, pf::Word{2, 2, 1, 1}})
      F.set_coeff(w, pf::cplx(-1.0 / 6.0, 0.0));
    for (const int N : {4, 8, 12}) {
      const double defect = pf::outer_defect(F, N, N + 4);
      const double envelope = std::pow(6.0, -0.5 * (N / 4 + 1));
      add("fock-balanced", "defect N=" + std::to_string(N) + " vs envelope",
          0.0, std::max(0.0, defect - envelope), 1e-10);
    }
  }

  // Zero-free radii of the truncated Dirichlet kernels.
  add("radius", "n=1", std::sqrt(2.0), pf::dirichlet_truncated_radius(1),
      1e-10);
  add("radius", "n=2", 1.25801, pf::dirichlet_truncated_radius(2), 1e-4);

  Json options{{"max_degree", global.max_degree}};
  Json report = make_report("examples", options, Json::object(), global);
  Json out_rows = Json::array();
  bool all_pass = true;
  for (const ExampleRow& row : rows) {
    const double delta = std::abs(row.computed - row.expected);
    const bool pass = delta <= row.tol;
    all_pass = all_pass && pass;
    Json r;
    r["id"] = row.id;
    r["quantity"] = row.quantity;
    r["expected"] = row.expected;
    r["computed"] = row.computed;
    r["delta"] = delta;
    r["tol"] = row.tol;
    r["pass"] = pass;
    out_rows.push_back(std::move(r));
  }
  report["outputs"]["rows"] = std::move(out_rows);
  report["outputs"]["all_pass"] = all_pass;

  if (global.table) {
    std::printf("%-28s %-28s %14s %14s %10s %8s %s\n", "id", "quantity",
                "expected", "computed", "|delta|", "tol", "pass");
    for (const Json& r : report["outputs"]["rows"])
      std::printf("%-28s %-28s %14.8f %14.8f %10.2e %8.0e %s\n",
                  r["id"].get<std::string>().c_str(),
                  r["quantity"].get<std::string>().c_str(),
                  r["expected"].get<double>(), r["computed"].get<double>(),
                  r["delta"].get<double>(), r["tol"].get<double>(),
                  r["pass"].get<bool>() ? "ok" : "FAIL");
    std::printf("%s\n", all_pass ? "all rows pass" : "FAILURES present");
  } else {
    emit(report, global);
  }
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subinner / free outer factorization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts global;
  app.add_option("--seed", global.seed, "random seed (default 0)");
  app.add_option("--tol", global.tol, "override the module tolerance");
  app.add_flag("--json", global.json, "JSON output (default)");
  app.add_flag("--table", global.table, "flat table output");
  app.add_option("--max-degree", global.max_degree,
                 "working degree for series truncation");
  app.add_flag("--timing", global.timing, "measure wall time");

  // factor
  {
    CLI::App* cmd = app.add_subcommand("factor", "subinner / free outer pair");
    auto space_opts = std::make_shared<SpaceOpts>();
    auto poly_text = std::make_shared<std::string>();
    auto restarts = std::make_shared<int>(16);
    add_space_flags(cmd, *space_opts, "");
    cmd->add_option("--poly", *poly_text, "polynomial, e.g. \"z-1\"");
    cmd->add_option("--restarts", *restarts, "solver restarts");
    cmd->callback([&global, space_opts, poly_text, restarts] {
      g_action = [&global, space_opts, poly_text, restarts]() -> int {
        if (poly_text->empty())
          throw pf::Error(pf::ErrorKind::bad_input, "empty polynomial");
        const pf::KernelSpace space = make_space(*space_opts, global);
        const pf::MultiPoly f = pf::parse_poly(space, *poly_text);
        const pf::FactorOptions options =
            make_factor_options(global, *restarts);
        const pf::FactorResult r = pf::subinner_free_outer(space, f, options);

        Json inputs{{"space", pf::space_to_json(space)},
                    {"poly", pf::poly_terms_to_json(f)}};
        Json report = make_report("factor", factor_options_json(options),
                                  inputs, global);
        report["outputs"]["outer"] = pf::poly_terms_to_json(r.outer);
        report["outputs"]["subinner"] = pf::kernel_ratio_to_json(r.subinner);
        report["outputs"]["gain"] = r.gain;
        report["outputs"]["restarts_used"] = r.restarts_used;
        report["residuals"]["moment_residual"] = r.moment_residual;
        report["residuals"]["norm_match"] = r.norm_match;
        report["residuals"]["converged"] = r.converged;
        emit(report, global);
        return r.converged ? 0 : 2;
      };
    });
  }

  // common-factor
  {
    CLI::App* cmd =
        app.add_subcommand("common-factor", "common free outer factor");
    auto space_opts = std::make_shared<SpaceOpts>();
    auto polys = std::make_shared<std::vector<std::string>>();
    auto restarts = std::make_shared<int>(16);
    add_space_flags(cmd, *space_opts, "");
    cmd->add_option("--poly", *polys, "family member (repeatable)");
    cmd->add_option("--restarts", *restarts, "solver restarts");
    cmd->callback([&global, space_opts, polys, restarts] {
      g_action = [&global, space_opts, polys, restarts]() -> int {
        const pf::KernelSpace space = make_space(*space_opts, global);
        std::vector<pf::MultiPoly> fs;
        Json in_polys = Json::array();
        for (const std::string& text : *polys) {
          fs.push_back(pf::parse_poly(space, text));
          in_polys.push_back(pf::poly_terms_to_json(fs.back()));
        }
        const pf::FactorOptions options =
            make_factor_options(global, *restarts);
        const pf::CommonFactorResult r =
            pf::common_free_outer(space, fs, options);

        Json inputs{{"space", pf::space_to_json(space)}, {"polys", in_polys}};
        Json report = make_report("common-factor",
                                  factor_options_json(options), inputs, global);
        report["outputs"]["outer"] = pf::poly_terms_to_json(r.outer);
        Json ratios = Json::array();
        for (const pf::KernelRatio& ratio : r.ratios)
          ratios.push_back(pf::kernel_ratio_to_json(ratio));
        report["outputs"]["ratios"] = std::move(ratios);
        report["outputs"]["restarts_used"] = r.restarts_used;
        report["residuals"]["moment_residual"] = r.moment_residual;
        report["residuals"]["column_residual"] = r.column_residual;
        report["residuals"]["norm_match"] = r.norm_match;
        report["residuals"]["converged"] = r.converged;
        emit(report, global);
        return r.converged ? 0 : 2;
      };
    });
  }

  // weak-product
  {
    CLI::App* cmd = app.add_subcommand(
        "weak-product", "weak-product factorization h = phi f^2");
    auto space_opts = std::make_shared<SpaceOpts>();
    auto polys = std::make_shared<std::vector<std::string>>();
    auto restarts = std::make_shared<int>(16);
    add_space_flags(cmd, *space_opts, "");
    cmd->add_option("--poly", *polys, "the two factors (repeat twice)");
    cmd->add_option("--restarts", *restarts, "solver restarts");
    cmd->callback([&global, space_opts, polys, restarts] {
      g_action = [&global, space_opts, polys, restarts]() -> int {
        if (polys->size() != 2)
          throw pf::Error(pf::ErrorKind::bad_input,
                          "weak-product needs exactly two --poly");
        const pf::KernelSpace space = make_space(*space_opts, global);
        const pf::MultiPoly f1 = pf::parse_poly(space, (*polys)[0]);
        const pf::MultiPoly f2 = pf::parse_poly(space, (*polys)[1]);
        const pf::FactorOptions options =
            make_factor_options(global, *restarts);
        const pf::WeakProductResult r =
            pf::weak_product_factor(space, f1, f2, options);

        Json inputs{{"space", pf::space_to_json(space)},
                    {"polys", Json::array({pf::poly_terms_to_json(f1),
                                           pf::poly_terms_to_json(f2)})}};
        Json report = make_report("weak-product",
                                  factor_options_json(options), inputs, global);
        report["outputs"]["phi"] = pf::kernel_ratio_to_json(r.phi);
        report["outputs"]["outer"] = pf::poly_terms_to_json(r.outer);
        report["outputs"]["outer_norm_sq"] = r.outer_norm_sq;
        report["residuals"]["identity_residual"] = r.identity_residual;
        report["residuals"]["converged"] = r.converged;
        emit(report, global);
        return r.converged ? 0 : 2;
      };
    });
  }

  // through-factor
  {
    CLI::App* cmd = app.add_subcommand(
        "through-factor", "factorization through a containing space");
    auto space_opts = std::make_shared<SpaceOpts>();
    auto target_opts = std::make_shared<SpaceOpts>();
    auto poly_text = std::make_shared<std::string>();
    auto restarts = std::make_shared<int>(16);
    add_space_flags(cmd, *space_opts, "");
    add_space_flags(cmd, *target_opts, "target-");
    cmd->add_option("--poly", *poly_text, "polynomial in the source space");
    cmd->add_option("--restarts", *restarts, "solver restarts");
    cmd->callback([&global, space_opts, target_opts, poly_text, restarts] {
      g_action = [&global, space_opts, target_opts, poly_text, restarts]() -> int {
        if (poly_text->empty())
          throw pf::Error(pf::ErrorKind::bad_input, "empty polynomial");
        const pf::KernelSpace space_k = make_space(*space_opts, global);
        const pf::KernelSpace space_s = make_space(*target_opts, global);
        const pf::MultiPoly f = pf::parse_poly(space_k, *poly_text);
        const pf::FactorOptions options =
            make_factor_options(global, *restarts);
        const pf::ThroughFactorResult r =
            pf::factor_through_subspace(f, space_k, space_s, options);

        Json inputs{{"space", pf::space_to_json(space_k)},
                    {"target_space", pf::space_to_json(space_s)},
                    {"poly", pf::poly_terms_to_json(f)}};
        Json report = make_report("through-factor",
                                  factor_options_json(options), inputs, global);
        Json factors = Json::array();
        for (std::size_t i = 0; i < r.factor_indices.size(); ++i)
          factors.push_back(Json{{"index", r.factor_indices[i]},
                                 {"scale", r.factor_scales[i]},
                                 {"component",
                                  pf::poly_terms_to_json(r.components[i])}});
        report["outputs"]["factors"] = std::move(factors);
        report["outputs"]["outer"] = pf::poly_terms_to_json(r.outer);
        report["outputs"]["phi"] = pf::kernel_ratio_to_json(r.phi);
        report["residuals"]["sum_norm_residual"] = r.sum_norm_residual;
        report["residuals"]["identity_residual"] = r.identity_residual;
        report["residuals"]["column_residual"] = r.column_residual;
        report["residuals"]["converged"] = r.converged;
        emit(report, global);
        return r.converged ? 0 : 2;
      };
    });
  }

  // sarason
  {
    CLI::App* cmd = app.add_subcommand("sarason", "Sarason series of f");
    auto space_opts = std::make_shared<SpaceOpts>();
    auto poly_text = std::make_shared<std::string>();
    auto order = std::make_shared<int>(-1);
    add_space_flags(cmd, *space_opts, "");
    cmd->add_option("--poly", *poly_text, "polynomial");
    cmd->add_option("--order", *order, "series order (default: deg f)");
    cmd->callback([&global, space_opts, poly_text, order] {
      g_action = [&global, space_opts, poly_text, order]() -> int {
        if (poly_text->empty())
          throw pf::Error(pf::ErrorKind::bad_input, "empty polynomial");
        const pf::KernelSpace space = make_space(*space_opts, global);
        const pf::MultiPoly f = pf::parse_poly(space, *poly_text);
        const int n = *order >= 0 ? *order : f.degree();
        const pf::SarasonSeries v = pf::sarason_series(space, f, n);

        Json inputs{{"space", pf::space_to_json(space)},
                    {"poly", pf::poly_terms_to_json(f)},
                    {"order", n}};
        Json report =
            make_report("sarason", Json{{"order", n}}, inputs, global);
        report["outputs"]["series"] = pf::poly_terms_to_json(v.series);
        report["outputs"]["norm_sq"] = pf::norm_sq(space, f);
        emit(report, global);
        return 0;
      };
    });
  }

  // moments
  {
    CLI::App* cmd = app.add_subcommand("moments", "vector-state moments");
    auto space_opts = std::make_shared<SpaceOpts>();
    auto poly_text = std::make_shared<std::string>();
    auto order = std::make_shared<int>(-1);
    add_space_flags(cmd, *space_opts, "");
    cmd->add_option("--poly", *poly_text, "polynomial");
    cmd->add_option("--order", *order, "max |alpha| (default: deg f)");
    cmd->callback([&global, space_opts, poly_text, order] {
      g_action = [&global, space_opts, poly_text, order]() -> int {
        if (poly_text->empty())
          throw pf::Error(pf::ErrorKind::bad_input, "empty polynomial");
        const pf::KernelSpace space = make_space(*space_opts, global);
        const pf::MultiPoly f = pf::parse_poly(space, *poly_text);
        const int n = *order >= 0 ? *order : f.degree();
        const pf::MomentProfile profile = pf::moment_profile(space, f, n);

        Json inputs{{"space", pf::space_to_json(space)},
                    {"poly", pf::poly_terms_to_json(f)},
                    {"order", n}};
        Json report =
            make_report("moments", Json{{"order", n}}, inputs, global);
        report["outputs"]["profile"] = pf::moment_profile_to_json(profile);
        emit(report, global);
        return 0;
      };
    });
  }

  // pick classify | solve | approx
  {
    CLI::App* pick = app.add_subcommand("pick", "Pick interpolation");
    pick->require_subcommand(1);

    CLI::App* cls = pick->add_subcommand("classify", "feasibility class");
    auto cls_data = std::make_shared<std::string>();
    auto cls_file = std::make_shared<std::string>();
    cls->add_option("--data", *cls_data, "inline JSON problem");
    cls->add_option("--input", *cls_file, "JSON problem file");
    cls->callback([&global, cls_data, cls_file] {
      g_action = [&global, cls_data, cls_file]() -> int {
        const Json data = read_data(*cls_data, *cls_file);
        const pf::PickProblem problem = pick_problem_from_json(data, global);
        const pf::PickMatrices m = pf::build_pick(problem);
        const pf::PickClass cls_result = pf::classify(m);

        Json report = make_report(
            "pick classify", Json{{"truncation", problem.truncation}}, data,
            global);
        report["outputs"]["class"] = pf::pick_class_name(cls_result);
        report["outputs"]["rank_K"] = m.rank_K;
        report["outputs"]["rank_P"] = m.rank_P;
        report["outputs"]["eig_K"] = eigs_to_json(m.eig_K);
        report["outputs"]["eig_P"] = eigs_to_json(m.eig_P);
        report["residuals"]["kernel_slack"] = m.kernel_slack;
        emit(report, global);
        return 0;
      };
    });

    CLI::App* solve = pick->add_subcommand("solve", "extremal solution");
    auto solve_data = std::make_shared<std::string>();
    auto solve_file = std::make_shared<std::string>();
    solve->add_option("--data", *solve_data, "inline JSON problem");
    solve->add_option("--input", *solve_file, "JSON problem file");
    solve->callback([&global, solve_data, solve_file] {
      g_action = [&global, solve_data, solve_file]() -> int {
        const Json data = read_data(*solve_data, *solve_file);
        const pf::PickProblem problem = pick_problem_from_json(data, global);
        const pf::ExtremalSolution sol = pf::extremal_solve(problem);

        Json report = make_report(
            "pick solve", Json{{"truncation", problem.truncation}}, data,
            global);
        Json phi;
        phi["num_weights"] = weights_to_json(sol.num_weights);
        phi["den_weights"] = weights_to_json(sol.den_weights);
        Json pts = Json::array();
        for (const pf::Point& p : problem.points)
          pts.push_back(pf::point_to_json(p, problem.space.dim()));
        phi["points"] = std::move(pts);
        phi["truncation"] = problem.truncation;
        report["outputs"]["phi"] = std::move(phi);
        report["residuals"]["interp_residual"] = sol.interp_residual;
        report["residuals"]["norm_match"] = sol.norm_match;
        emit(report, global);
        return 0;
      };
    });

    CLI::App* approx = pick->add_subcommand("approx", "subinner approximants");
    auto approx_data = std::make_shared<std::string>();
    auto approx_file = std::make_shared<std::string>();
    approx->add_option("--data", *approx_data, "inline JSON");
    approx->add_option("--input", *approx_file, "JSON file");
    approx->callback([&global, approx_data, approx_file] {
      g_action = [&global, approx_data, approx_file]() -> int {
        const Json data = read_data(*approx_data, *approx_file);
        if (!data.contains("space") || !data.contains("phi") ||
            !data.contains("schedule"))
          throw pf::Error(pf::ErrorKind::bad_input,
                          "approx data needs 'space', 'phi', 'schedule'");
        const pf::KernelSpace space = pf::space_from_json(data["space"]);
        pf::MultiPoly phi =
            data["phi"].is_string()
                ? pf::parse_poly(space, data["phi"].get<std::string>())
                : pf::poly_from_json(
                      Json{{"space", data["space"]}, {"poly", data["phi"]}});
        std::vector<std::vector<pf::Point>> schedule;
        for (const Json& stage : data["schedule"]) {
          std::vector<pf::Point> pts;
          for (const Json& p : stage)
            pts.push_back(pf::point_from_json(p, space.dim()));
          schedule.push_back(std::move(pts));
        }
        pf::ApproxOptions options;
        options.truncation = std::min(space.working_degree(),
                                      global.max_degree);
        const std::vector<pf::ApproximantStage> stages =
            pf::subinner_approximants(space, phi, schedule, {}, options);

        Json report = make_report(
            "pick approx", Json{{"truncation", options.truncation}}, data,
            global);
        Json out_stages = Json::array();
        double last_interp = 0.0;
        for (const pf::ApproximantStage& st : stages) {
          Json s;
          s["t"] = st.t;
          s["min_eigenvalue"] = st.min_eigenvalue;
          Json targets = Json::array();
          for (const pf::cplx& w : st.targets)
            targets.push_back(pf::complex_to_json(w));
          s["targets"] = std::move(targets);
          s["num_weights"] = weights_to_json(st.solution.num_weights);
          s["den_weights"] = weights_to_json(st.solution.den_weights);
          s["interp_residual"] = st.solution.interp_residual;
          last_interp = st.solution.interp_residual;
          out_stages.push_back(std::move(s));
        }
        report["outputs"]["stages"] = std::move(out_stages);
        report["residuals"]["final_interp_residual"] = last_interp;
        emit(report, global);
        return 0;
      };
    });
  }

  // fock outer-defect | sarason | embed
  {
    CLI::App* fock = app.add_subcommand("fock", "free Fock space operations");
    fock->require_subcommand(1);

    CLI::App* defect = fock->add_subcommand("outer-defect",
                                            "distance from 1 to the shifts");
    auto defect_data = std::make_shared<std::string>();
    auto defect_file = std::make_shared<std::string>();
    auto defect_n = std::make_shared<int>(4);
    auto defect_budget = std::make_shared<int>(-1);
    defect->add_option("--data", *defect_data, "free polynomial JSON");
    defect->add_option("--input", *defect_file, "free polynomial JSON file");
    defect->add_option("--N", *defect_n, "shift length bound");
    defect->add_option("--budget", *defect_budget, "word length budget");
    defect->callback([&global, defect_data, defect_file, defect_n,
                      defect_budget] {
      g_action = [&global, defect_data, defect_file, defect_n,
                  defect_budget]() -> int {
        const Json data = read_data(*defect_data, *defect_file);
        const pf::FreePoly F = pf::free_poly_from_json(data);
        const int budget = resolve_budget_flag(*defect_budget);
        const double defect_value = pf::outer_defect(F, *defect_n, budget);

        Json report = make_report(
            "fock outer-defect",
            Json{{"N", *defect_n}, {"budget", budget}}, data, global);
        report["outputs"]["defect"] = defect_value;
        report["outputs"]["N"] = *defect_n;
        emit(report, global);
        return 0;
      };
    });

    CLI::App* fsar = fock->add_subcommand("sarason", "free Sarason function");
    auto fsar_data = std::make_shared<std::string>();
    auto fsar_file = std::make_shared<std::string>();
    auto fsar_side = std::make_shared<std::string>("left");
    auto fsar_len = std::make_shared<int>(-1);
    auto fsar_budget = std::make_shared<int>(-1);
    fsar->add_option("--data", *fsar_data, "free polynomial JSON");
    fsar->add_option("--input", *fsar_file, "free polynomial JSON file");
    fsar->add_option("--side", *fsar_side, "left or right");
    fsar->add_option("--max-len", *fsar_len, "max word length (default deg F)");
    fsar->add_option("--budget", *fsar_budget, "word length budget");
    fsar->callback([&global, fsar_data, fsar_file, fsar_side, fsar_len,
                    fsar_budget] {
      g_action = [&global, fsar_data, fsar_file, fsar_side, fsar_len,
                  fsar_budget]() -> int {
        const Json data = read_data(*fsar_data, *fsar_file);
        const pf::FreePoly F = pf::free_poly_from_json(data);
        pf::SarasonSide side;
        if (*fsar_side == "left")
          side = pf::SarasonSide::left;
        else if (*fsar_side == "right")
          side = pf::SarasonSide::right;
        else
          throw pf::Error(pf::ErrorKind::bad_input,
                          "--side must be left or right");
        const int len = *fsar_len >= 0 ? *fsar_len : F.degree();
        const int budget = resolve_budget_flag(*fsar_budget);
        const pf::FreePoly V = pf::free_sarason(F, side, len, budget);

        Json report = make_report(
            "fock sarason",
            Json{{"side", *fsar_side}, {"max_len", len}, {"budget", budget}},
            data, global);
        report["outputs"]["series"] = pf::free_poly_to_json(V);
        emit(report, global);
        return 0;
      };
    });

    CLI::App* embed = fock->add_subcommand("embed", "symmetric embedding");
    auto space_opts = std::make_shared<SpaceOpts>();
    space_opts->family = "drury_arveson";
    space_opts->dim = 2;
    auto poly_text = std::make_shared<std::string>();
    add_space_flags(embed, *space_opts, "");
    embed->add_option("--poly", *poly_text, "polynomial to embed");
    embed->callback([&global, space_opts, poly_text] {
      g_action = [&global, space_opts, poly_text]() -> int {
        if (poly_text->empty())
          throw pf::Error(pf::ErrorKind::bad_input, "empty polynomial");
        const pf::KernelSpace space = make_space(*space_opts, global);
        const pf::MultiPoly f = pf::parse_poly(space, *poly_text);
        const pf::FreePoly F = pf::embed_symmetric(f);

        Json inputs{{"space", pf::space_to_json(space)},
                    {"poly", pf::poly_terms_to_json(f)}};
        Json report =
            make_report("fock embed", Json::object(), inputs, global);
        report["outputs"]["free_poly"] = pf::free_poly_to_json(F);
        report["residuals"]["isometry_residual"] =
            std::abs(F.norm_sq() - pf::norm_sq(space, f));
        emit(report, global);
        return 0;
      };
    });
  }

  // radius
  {
    CLI::App* cmd =
        app.add_subcommand("radius", "zero-free radius of free outers");
    auto n = std::make_shared<int>(1);
    cmd->add_option("--n", *n, "truncation degree (>= 1)");
    cmd->callback([&global, n] {
      g_action = [&global, n]() -> int {
        const double radius = pf::dirichlet_truncated_radius(*n);
        const std::vector<double> coeffs = pf::dirichlet_kaluza_coeffs(*n);

        Json report = make_report("radius", Json{{"n", *n}},
                                  Json{{"n", *n}}, global);
        report["outputs"]["radius"] = radius;
        report["outputs"]["coeffs"] = coeffs;
        emit(report, global);
        return 0;
      };
    });
  }

  // examples
  {
    CLI::App* cmd = app.add_subcommand(
        "examples", "regression table of the shipped worked examples");
    cmd->callback([&global] {
      g_action = [&global]() -> int { return run_examples(global); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    const int code = g_action ? g_action() : 1;
    if (global.timing) {
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      std::cerr << "wall_ms " << elapsed.count() << "\n";
    }
    return code;
  } catch (const pf::Error& e) {
    Json err;
    err["command"] = "error";
    err["error"] = Json{{"kind", pf::error_kind_name(e.kind())},
                        {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return (e.kind() == pf::ErrorKind::no_convergence ||
            e.kind() == pf::ErrorKind::bisection_failure)
               ? 2
               : 1;
  } catch (const std::exception& e) {
    Json err;
    err["command"] = "error";
    err["error"] = Json{{"kind", "internal"}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 1;
  }
}
