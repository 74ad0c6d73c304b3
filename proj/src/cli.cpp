#include "qsing/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "qsing/covering.hpp"
#include "qsing/errors.hpp"
#include "qsing/field_io.hpp"
#include "qsing/frequency.hpp"
#include "qsing/grid.hpp"
#include "qsing/meanflat.hpp"
#include "qsing/minkowski.hpp"
#include "qsing/oracle.hpp"
#include "qsing/reifenberg.hpp"
#include "qsing/text_io.hpp"

namespace qsing {

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

/// CSV text and the values worth repeating in the manifest.
struct CommandOutput {
  std::ostringstream csv;
  json summary = json::object();
};

void csv_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_double(values[i]);
  os << '\n';
}

std::string coordinate_header(const std::string& prefix, std::size_t m) {
  std::string h;
  for (std::size_t i = 0; i < m; ++i) h += prefix + std::to_string(i + 1) + ",";
  return h;
}

WeightProfile weight_from(const RunConfig& c) {
  if (c.weight_knots.empty()) return WeightProfile::standard();
  std::vector<std::pair<double, double>> knots;
  std::stringstream ss(c.weight_knots);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("weight knots are written t:v,t:v");
    try {
      knots.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw InputError("weight knot '" + item + "' is not numeric");
    }
  }
  return WeightProfile::piecewise_linear(std::move(knots));
}

QuadratureScheme scheme_from(const RunConfig& c) {
  QuadratureScheme q;
  q.radial_nodes = c.radial_nodes;
  q.angular_nodes = c.angular_nodes;
  q.mc_samples = c.mc_samples;
  q.seed = c.seed;
  if (c.method == "slab")
    q.method = SpatialMethod::SlabReduction;
  else if (c.method == "qmc")
    q.method = SpatialMethod::QuasiMonteCarlo;
  else
    throw InputError("method must be slab or qmc");
  q.policy = c.serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;
  q.validate();
  return q;
}

const std::string& require_path(const std::string& path, const char* flag) {
  if (path.empty()) throw InputError(std::string("missing ") + flag);
  return path;
}

Point center_for(const RunConfig& c, std::size_t m) {
  if (c.center.empty()) return Point(m, 0.0);
  if (c.center.size() != m) throw InputError("center has the wrong dimension");
  return c.center;
}

std::vector<Point> load_points(const std::string& path) {
  const auto rows = parse_numeric_rows(read_text_file(path));
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().values.size();
  std::vector<Point> pts;
  for (const auto& row : rows) {
    if (row.values.size() != cols)
      throw ParseError("expected " + std::to_string(cols) + " coordinates, found " +
                           std::to_string(row.values.size()),
                       row.line, 1);
    pts.push_back(row.values);
  }
  return pts;
}

void cmd_freqscan(const RunConfig& c, CommandOutput& out) {
  const auto f = load_field(require_path(c.field_path, "--field"));
  const auto phi = weight_from(c);
  const auto q = scheme_from(c);
  const Point x = center_for(c, f.m());
  out.csv << coordinate_header("x", f.m()) << "r,D,H,E,I,est_error,skipped_nodes\n";
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double r : parse_range(c.radii)) {
    const auto rep = frequency_I(f, phi, x, r, q);
    std::vector<double> row = x;
    row.insert(row.end(), {r, rep.D, rep.H, rep.E, rep.I, rep.est_error,
                           static_cast<double>(rep.skipped_nodes)});
    csv_row(out.csv, row);
    lo = first ? rep.I : std::min(lo, rep.I);
    hi = first ? rep.I : std::max(hi, rep.I);
    first = false;
  }
  out.summary["I_min"] = lo;
  out.summary["I_max"] = hi;
}

void cmd_identities(const RunConfig& c, CommandOutput& out) {
  const auto f = load_field(require_path(c.field_path, "--field"));
  const auto phi = weight_from(c);
  const auto q = scheme_from(c);
  const Point x = center_for(c, f.m());
  if (!(c.s > 0.0) || !(c.s < 1.0)) throw InputError("--s is the doubling ratio s/r in (0, 1)");
  out.csv << "r,D,H,E,pairing,dirichlet_derivative,height_derivative,cauchy_schwarz,doubling\n";
  double worst = 0.0, cs_min = 0.0;
  for (double r : parse_range(c.radii)) {
    const auto id = identity_residuals(f, phi, x, r, q);
    const double dbl = doubling_residual(f, phi, x, c.s * r, r, q);
    csv_row(out.csv, {r, id.D, id.H, id.E, id.pairing, id.dirichlet_derivative,
                      id.height_derivative, id.cauchy_schwarz, dbl});
    worst = std::max({worst, id.pairing, id.dirichlet_derivative, id.height_derivative, dbl});
    cs_min = std::min(cs_min, id.cauchy_schwarz);
  }
  out.summary["max_residual"] = worst;
  out.summary["min_cauchy_schwarz_slack"] = cs_min;
}

void cmd_pinchmap(const RunConfig& c, CommandOutput& out) {
  const auto f = load_field(require_path(c.field_path, "--field"));
  const auto phi = weight_from(c);
  const auto q = scheme_from(c);
  if (!(c.s > 0.0) || !(c.s < c.r)) throw InputError("pinchmap needs 0 < s < r");
  const auto g = Grid::cube(center_for(c, f.m()), c.half_width, c.count);
  out.csv << coordinate_header("x", f.m()) << "W\n";
  double wmax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point x = g.node(i);
    double W;
    try {
      W = pinch_W(f, phi, x, c.s, c.r, q);
    } catch (const DegenerateHeightError&) {
      W = std::nan("");
    }
    wmax = std::isnan(W) ? wmax : std::max(wmax, W);
    x.push_back(W);
    csv_row(out.csv, x);
  }
  out.summary["W_max"] = wmax;
}

void cmd_beta(const RunConfig& c, CommandOutput& out) {
  const auto mu = load_measure(require_path(c.measure_path, "--measure"));
  if (!(c.r > 0.0)) throw InputError("--r must be positive");
  const Point x0 = center_for(c, mu.m);
  const auto b = beta_k(mu, x0, c.r, c.k);
  out.csv << coordinate_header("x0_", mu.m) << "r0,k," << coordinate_header("lambda_", mu.m)
          << "beta" << (c.bruteforce ? ",beta_bruteforce" : "") << '\n';
  std::vector<double> row = x0;
  row.insert(row.end(), {c.r, static_cast<double>(c.k)});
  if (b.empty)
    row.insert(row.end(), mu.m, 0.0);
  else
    row.insert(row.end(), b.fit.eigenvalues.begin(), b.fit.eigenvalues.end());
  row.push_back(b.value);
  if (c.bruteforce) row.push_back(beta_bruteforce(mu, x0, c.r, c.k, 24, c.seed));
  csv_row(out.csv, row);
  out.summary["beta"] = b.value;
}

void cmd_jones(const RunConfig& c, CommandOutput& out) {
  const auto mu = load_measure(require_path(c.measure_path, "--measure"));
  const Point x0 = center_for(c, mu.m);
  const auto scales = dyadic_scales(c.s0, c.scales);
  out.csv << "scale,beta,cumulative\n";
  double total = 0.0;
  for (double s : scales) {
    const double b = beta_k(mu, x0, s, c.k).value;
    total += b * std::log(2.0);
    csv_row(out.csv, {s, b, total});
  }
  out.summary["jones_integral"] = jones_integral(mu, x0, c.k, scales);
}

void cmd_cover(const RunConfig& c, CommandOutput& out) {
  const auto D = load_points(require_path(c.points_path, "--points"));
  std::unique_ptr<FrequencyOracle> oracle;
  if (!c.oracle_path.empty())
    oracle = std::make_unique<TableOracle>(TableOracle::load(c.oracle_path));
  else if (!c.field_path.empty())
    oracle = std::make_unique<FieldOracle>(load_field(c.field_path), weight_from(c),
                                           scheme_from(c));
  else
    throw InputError("cover needs --oracle or --field");
  const auto res = minkowski_cover_driver(D, *oracle, c.rho_target, c.delta, c.rho);
  const auto audit = packing_verify(res, D, 1.0);
  const std::size_t m = res.m;
  out.csv << coordinate_header("x", m) << "radius,scale_index,tag\n";
  for (const auto& b : res.balls) {
    for (double v : b.center) out.csv << format_double(v) << ',';
    out.csv << format_double(b.radius) << ',' << b.scale_index << ',' << tag_name(b.tag) << '\n';
  }
  out.summary["balls"] = res.balls.size();
  out.summary["packing_sum"] = res.packing_sum;
  out.summary["rounds"] = res.rounds;
  out.summary["kappa"] = res.kappa;
  out.summary["drop_log"] = res.drop_log;
  out.summary["C_V"] = res.C_V;
  out.summary["audit"] = audit.covered && audit.assignment_ok ? "pass" : "fail";
  out.summary["missed"] = audit.missed;
  if (!audit.covered || !audit.assignment_ok)
    throw InternalLogicError("covering audit failed");
}

void cmd_reifcheck(const RunConfig& c, CommandOutput& out) {
  std::vector<SourceBall> balls;
  for (auto& row : load_points(require_path(c.balls_path, "--balls"))) {
    if (row.size() < 2) throw InputError("ball rows need coordinates and a radius");
    const double radius = row.back();
    row.pop_back();
    balls.push_back({std::move(row), radius});
  }
  const auto rep = reifenberg_hypothesis_check(balls, c.k, c.delta0);
  out.csv << "k,delta0,max_ratio,argmax_r,evaluations,passes\n";
  csv_row(out.csv, {static_cast<double>(c.k), c.delta0, rep.max_ratio, rep.argmax_r,
                    static_cast<double>(rep.evaluations), rep.passes ? 1.0 : 0.0});
  out.summary["max_ratio"] = rep.max_ratio;
  out.summary["passes"] = rep.passes;
}

void cmd_minkowski(const RunConfig& c, CommandOutput& out) {
  const auto f = load_field(require_path(c.field_path, "--field"));
  const auto g = Grid::cube(center_for(c, f.m()), c.half_width, c.count);
  const auto est = minkowski_content_estimate(f, g, parse_range(c.rhos));
  out.csv << "rho,cells,volume\n";
  for (const auto& rec : est.records)
    csv_row(out.csv, {rec.rho, static_cast<double>(rec.cells), rec.volume});
  out.summary["q_points"] = est.q_points;
  out.summary["slope"] = est.records.empty() ? json(nullptr) : json(est.slope);
}

const std::map<std::string, std::function<void(const RunConfig&, CommandOutput&)>>& commands() {
  static const std::map<std::string, std::function<void(const RunConfig&, CommandOutput&)>> table{
      {"freqscan", cmd_freqscan}, {"identities", cmd_identities}, {"pinchmap", cmd_pinchmap},
      {"beta", cmd_beta},         {"jones", cmd_jones},           {"cover", cmd_cover},
      {"reifcheck", cmd_reifcheck}, {"minkowski", cmd_minkowski},
  };
  return table;
}

json config_json(const RunConfig& c) {
  return {{"command", c.command},       {"field", c.field_path},     {"measure", c.measure_path},
          {"oracle", c.oracle_path},    {"points", c.points_path},   {"balls", c.balls_path},
          {"out", c.out_path},          {"center", c.center},        {"radii", c.radii},
          {"r", c.r},                   {"s", c.s},                  {"half_width", c.half_width},
          {"count", c.count},           {"rhos", c.rhos},            {"k", c.k},
          {"s0", c.s0},                 {"scales", c.scales},        {"bruteforce", c.bruteforce},
          {"rho", c.rho},               {"delta", c.delta},          {"delta0", c.delta0},
          {"rho_target", c.rho_target}, {"weight_knots", c.weight_knots},
          {"radial_nodes", c.radial_nodes}, {"angular_nodes", c.angular_nodes},
          {"mc_samples", c.mc_samples}, {"method", c.method},        {"serial", c.serial},
          {"seed", c.seed},             {"threads", c.threads}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path);
  os << text;
}

} // namespace

int run(const RunConfig& config, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  if (config.threads > 0) omp_set_num_threads(config.threads);
  const std::string out_path = config.out_path.empty() ? config.command + ".csv" : config.out_path;

  json manifest{{"tool", "qsing"},
                {"version", kVersion},
                {"versions",
                 {{"compiler", __VERSION__},
                  {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                        std::to_string(NLOHMANN_JSON_VERSION_MINOR)},
                  {"cli11", CLI11_VERSION}}},
                {"config", config_json(config)},
                {"threads", omp_get_max_threads()}};
  int status = kExitOk;
  CommandOutput out;
  try {
    const auto it = commands().find(config.command);
    if (it == commands().end()) throw InputError("unknown command '" + config.command + "'");
    it->second(config, out);
    write_file(out_path, out.csv.str());
    manifest["output"] = out_path;
  } catch (const ParseError& e) {
    status = kExitParse;
    manifest["error"] = {{"kind", "parse"}, {"message", e.what()}, {"line", e.line()},
                         {"column", e.column()}};
  } catch (const InputError& e) {
    status = kExitPrecondition;
    manifest["error"] = {{"kind", "precondition"}, {"message", e.what()}};
  } catch (const DegenerateHeightError& e) {
    status = kExitDegenerate;
    manifest["error"] = {{"kind", "degenerate_height"}, {"message", e.what()}};
  } catch (const SingularPointError& e) {
    status = kExitDegenerate;
    manifest["error"] = {{"kind", "singular_point"}, {"message", e.what()}};
  } catch (const InternalLogicError& e) {
    status = kExitInternal;
    manifest["error"] = {{"kind", "internal"}, {"message", e.what()}};
  }
  if (manifest.contains("error")) log << "error: " << manifest["error"]["message"].get<std::string>() << '\n';

  manifest["status"] = status;
  manifest["summary"] = out.summary;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
  } catch (const InputError& e) {
    log << "error: " << e.what() << '\n';
    if (status == kExitOk) status = kExitPrecondition;
  }
  for (auto& [key, value] : out.summary.items()) log << key << ": " << value.dump() << '\n';
  return status;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Frequency functionals, mean flatness and covering experiments for Q-valued fields"};
  app.set_config("--config", "", "TOML/INI file with option values (sections per command)");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunConfig c;
  auto positive = CLI::PositiveNumber;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", c.out_path, "CSV output; the manifest goes to <out>.manifest.json");
    sub->add_option("--seed", c.seed, "Seed recorded in the manifest and used by randomized steps")
        ->capture_default_str();
    sub->add_option("--threads", c.threads, "OpenMP threads (default: QSING_THREADS or all)")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_quadrature = [&](CLI::App* sub) {
    sub->add_option("--weight-knots", c.weight_knots, "Piecewise-linear cutoff knots t:v,t:v");
    sub->add_option("--radial-nodes", c.radial_nodes, "Gauss-Legendre nodes per radial panel")
        ->capture_default_str();
    sub->add_option("--angular-nodes", c.angular_nodes, "Uniform angular nodes")
        ->capture_default_str();
    sub->add_option("--mc-samples", c.mc_samples, "Quasi-Monte-Carlo samples (m >= 3, qmc)")
        ->capture_default_str();
    sub->add_option("--method", c.method, "slab or qmc (m >= 3)")
        ->check(CLI::IsMember({"slab", "qmc"}))
        ->capture_default_str();
    sub->add_flag("--serial", c.serial, "Serial reference quadrature");
  };
  auto add_field = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--field", c.field_path, "Field description (JSON)")->check(CLI::ExistingFile);
    if (required) o->required();
    sub->add_option("--center", c.center, "Center point x1,x2,...")->delimiter(',');
  };

  auto* freqscan = app.add_subcommand("freqscan", "I(x, r) with D, H, E over a list of radii");
  add_field(freqscan, true);
  freqscan->add_option("--radii", c.radii, "start:stop:step or a,b,c")->capture_default_str();
  add_quadrature(freqscan);
  add_common(freqscan);

  auto* identities = app.add_subcommand("identities", "Identity and doubling residuals per radius");
  add_field(identities, true);
  identities->add_option("--radii", c.radii, "start:stop:step or a,b,c")->capture_default_str();
  identities->add_option("--s", c.s, "Doubling lower radius as a fraction of r")
      ->capture_default_str();
  add_quadrature(identities);
  add_common(identities);

  auto* pinchmap = app.add_subcommand("pinchmap", "W = I(x, r) - I(x, s) over a cube grid");
  add_field(pinchmap, true);
  pinchmap->add_option("--r", c.r, "Outer radius")->check(positive)->capture_default_str();
  pinchmap->add_option("--s", c.s, "Inner radius")->check(positive)->capture_default_str();
  pinchmap->add_option("--half-width", c.half_width, "Grid half width")->check(positive)
      ->capture_default_str();
  pinchmap->add_option("--count", c.count, "Nodes per axis")->check(positive)->capture_default_str();
  add_quadrature(pinchmap);
  add_common(pinchmap);

  auto* beta = app.add_subcommand("beta", "k-th mean flatness of a measure in one ball");
  beta->add_option("--measure", c.measure_path, "Atoms: coordinates then weight per line")
      ->required()->check(CLI::ExistingFile);
  beta->add_option("--x0", c.center, "Ball center")->delimiter(',');
  beta->add_option("--r", c.r, "Ball radius")->check(positive)->capture_default_str();
  beta->add_option("--k", c.k, "Plane dimension")->capture_default_str();
  beta->add_flag("--bruteforce", c.bruteforce, "Add the direct plane search as a column");
  add_common(beta);

  auto* jones = app.add_subcommand("jones", "Dyadic sum of mean flatness over halving scales");
  jones->add_option("--measure", c.measure_path, "Atoms: coordinates then weight per line")
      ->required()->check(CLI::ExistingFile);
  jones->add_option("--x0", c.center, "Ball center")->delimiter(',');
  jones->add_option("--k", c.k, "Plane dimension")->capture_default_str();
  jones->add_option("--s0", c.s0, "Largest scale")->check(positive)->capture_default_str();
  jones->add_option("--scales", c.scales, "Number of scales")->check(positive)->capture_default_str();
  add_common(jones);

  auto* cover = app.add_subcommand("cover", "Frequency-drop covering of a point set");
  cover->add_option("--oracle", c.oracle_path, "Frequency table: rows y..., r, I")
      ->check(CLI::ExistingFile);
  add_field(cover, false);
  cover->add_option("--points", c.points_path, "Points, one per line")->required()
      ->check(CLI::ExistingFile);
  cover->add_option("--rho-target", c.rho_target, "Final ball radius")->check(positive)
      ->capture_default_str();
  cover->add_option("--rho", c.rho, "Refinement ratio, at most 1/100")->check(positive)
      ->capture_default_str();
  cover->add_option("--delta", c.delta, "Frequency drop per round")->check(positive)
      ->capture_default_str();
  add_quadrature(cover);
  add_common(cover);

  auto* reifcheck = app.add_subcommand("reifcheck", "Dyadic mean-flatness integral of a ball packing");
  reifcheck->add_option("--balls", c.balls_path, "Balls: center coordinates then radius per line")
      ->required()->check(CLI::ExistingFile);
  reifcheck->add_option("--k", c.k, "Plane dimension")->capture_default_str();
  reifcheck->add_option("--delta0", c.delta0, "Threshold; the bound is delta0^2")->check(positive)
      ->capture_default_str();
  add_common(reifcheck);

  auto* minkowski = app.add_subcommand("minkowski", "Volume of rho-neighbourhoods of the Q-points");
  add_field(minkowski, true);
  minkowski->add_option("--half-width", c.half_width, "Grid half width")->check(positive)
      ->capture_default_str();
  minkowski->add_option("--count", c.count, "Nodes per axis")->check(positive)->capture_default_str();
  minkowski->add_option("--rhos", c.rhos, "start:stop:step or a,b,c")->capture_default_str();
  add_common(minkowski);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == static_cast<int>(CLI::ExitCodes::ConfigError) ? kExitParse
                                                                              : kExitPrecondition;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  if (c.threads == 0)
    if (const char* env = std::getenv("QSING_THREADS")) {
      try {
        c.threads = std::max(0, std::stoi(env));
      } catch (const std::logic_error&) {
        std::cerr << "error: QSING_THREADS must be an integer\n";
        return kExitPrecondition;
      }
    }
  return run(c, std::cout);
}

} // namespace qsing
