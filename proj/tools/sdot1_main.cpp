#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "sdot1/bounds.hpp"
#include "sdot1/geometry.hpp"
#include "sdot1/io.hpp"
#include "sdot1/measures.hpp"
#include "sdot1/multiscale.hpp"
#include "sdot1/objective.hpp"
#include "sdot1/optimizer.hpp"
#include "sdot1/oracle.hpp"
#include "sdot1/render.hpp"
#include "sdot1/synthetic.hpp"

using nlohmann::json;

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitNotConverged = 3;

int env_threads() {
  const char* value = std::getenv("SDOT1_THREADS");
  if (!value) return 0;  // all cores
  return std::max(1, std::atoi(value));
}

struct CommonSolveArgs {
  std::string density_path;
  std::vector<double> bounds;  // empty or x0,y0,x1,y1
  double epsilon = 0.05;
  std::string subpixels = "auto";
  std::string multiscale = "on";
  uint64_t seed = 0;
  double balance_tol = 1e-6;
  bool autonormalize = false;
  bool error_bounds = false;
  std::string out_json;
  std::string out_svg;
  std::string out_assignment;
};

void add_common_solve_flags(CLI::App* cmd, CommonSolveArgs& args) {
  cmd->add_option("--density", args.density_path, "density image (PGM) or CSV grid")
      ->required();
  cmd->add_option("--bounds", args.bounds, "physical bounds x0,y0,x1,y1")
      ->delimiter(',')
      ->expected(4);
  cmd->add_option("--epsilon", args.epsilon, "stopping threshold on mistransported mass");
  cmd->add_option("--subpixels", args.subpixels, "subpixel factor per pixel side: auto or K");
  cmd->add_option("--multiscale", args.multiscale, "coarse-to-fine warm start: on or off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--seed", args.seed, "seed for the coarsening hierarchy");
  cmd->add_option("--balance-tol", args.balance_tol, "relative mass balance tolerance");
  cmd->add_flag("--autonormalize", args.autonormalize, "rescale the target to the density mass");
  cmd->add_flag("--error-bounds", args.error_bounds, "report discretization/blur error bounds");
  cmd->add_option("--out", args.out_json, "JSON report path");
  cmd->add_option("--svg", args.out_svg, "partition rendering path");
  cmd->add_option("--assignment", args.out_assignment, "assignment PGM path");
}

std::optional<sdot1::Bounds> parse_bounds(const std::vector<double>& b) {
  if (b.empty()) return std::nullopt;
  return sdot1::Bounds{b[0], b[1], b[2], b[3]};
}

void write_assignment_pgm(const sdot1::Rasterization& raster, int n_sites,
                          const std::string& path) {
  sdot1::PgmImage img;
  img.width = raster.cols;
  img.height = raster.rows;
  img.max_value = n_sites <= 255 ? 255 : 65535;
  img.pixels.resize(raster.assignment.size());
  for (size_t i = 0; i < raster.assignment.size(); ++i) {
    const int32_t a = raster.assignment[i];
    img.pixels[i] =
        a == sdot1::kUnassigned ? static_cast<uint16_t>(img.max_value)
                                : static_cast<uint16_t>(a);
  }
  sdot1::write_pgm(img, path);
}

json measure_json(const sdot1::DiscreteMeasure& nu) {
  json sites = json::array();
  json masses = json::array();
  for (int j = 0; j < nu.size(); ++j) {
    sites.push_back({nu.point(j).x, nu.point(j).y});
    masses.push_back(nu.mass(j));
  }
  return {{"sites", sites}, {"masses", masses}};
}

struct SolveOutput {
  json report;
  bool converged = false;
};

SolveOutput run_solve(const std::string& command, const CommonSolveArgs& args,
                      const sdot1::DensityGrid& grid, const sdot1::DiscreteMeasure& nu_in,
                      const json& extra_result = json::object()) {
  const auto started = std::chrono::steady_clock::now();

  sdot1::DiscreteMeasure nu = nu_in;
  const auto balance = sdot1::check_balance(grid, nu, args.balance_tol);
  if (!balance.ok) {
    if (!args.autonormalize) {
      throw std::runtime_error("unbalanced measures (relative gap " +
                               std::to_string(balance.relative_gap) +
                               "); pass --autonormalize to rescale the target");
    }
    nu = sdot1::normalize(nu, grid.total_mass());
  }

  sdot1::SolverConfig config;
  config.epsilon = args.epsilon;
  config.raster.threads = env_threads();
  if (args.subpixels != "auto") {
    config.subpixel_factor = std::stoi(args.subpixels);
    if (config.subpixel_factor < 1) throw std::runtime_error("--subpixels must be >= 1");
  }

  sdot1::SolveReport report;
  sdot1::MultiscaleStats stats;
  if (args.multiscale == "on") {
    sdot1::HierarchyOptions hierarchy;
    hierarchy.seed = args.seed;
    report = sdot1::solve_multiscale(grid, nu, config, hierarchy, &stats);
  } else {
    report = sdot1::minimize(grid, nu, std::vector<double>(nu.size(), 0.0), config);
  }

  const sdot1::SiteSet sites{nu.points(), report.final_w};
  const sdot1::Rasterization raster =
      sdot1::rasterize(grid, sites, report.subpixel_factor, config.raster);

  if (!args.out_assignment.empty()) {
    write_assignment_pgm(raster, nu.size(), args.out_assignment);
  }
  if (!args.out_svg.empty()) {
    std::ofstream svg(args.out_svg);
    std::vector<double> masses = nu.masses();
    svg << sdot1::render_partition_svg(raster, grid, nu.points(), &masses);
  }

  json result = extra_result;
  result["w1"] = report.w1_cost;
  result["mistransported_mass"] = report.final_mistransported_mass;
  result["iterations"] = report.iterations;
  result["converged"] = report.converged;
  result["termination_reason"] = report.termination_reason;
  result["evaluations"] = report.evaluations;
  result["subpixel_factor"] = report.subpixel_factor;
  result["weights"] = report.final_w;
  result["cell_mass"] = report.cell_mass;
  result["phi_history"] = report.phi_history;
  result.update(measure_json(nu));
  if (args.multiscale == "on") {
    json levels = json::array();
    for (const auto& ls : stats.levels) {
      levels.push_back({{"level", ls.level},
                        {"support_size", ls.support_size},
                        {"iterations", ls.iterations},
                        {"evaluations", ls.evaluations},
                        {"subpixel_factor", ls.subpixel_factor},
                        {"mistransported_mass", ls.final_mistransported_mass}});
    }
    result["multiscale_levels"] = levels;
  }

  if (args.error_bounds) {
    json bounds_json;
    bounds_json["blur_bound"] =
        sdot1::blur_error_bound(nu, grid.pixel_side()).value;
    // upper bound from the computed partition, at pixel resolution
    const sdot1::Rasterization pixel_raster = sdot1::rasterize(grid, sites, 1, config.raster);
    double bound = 0.0;
    for (int r = 0; r < grid.ny(); ++r) {
      for (int c = 0; c < grid.nx(); ++c) {
        const int32_t a = pixel_raster.at(c, r);
        if (a == sdot1::kUnassigned) continue;
        bound += grid.pixel_mass(c, r) * sdot1::distance(grid.pixel_center(c, r), nu.point(a));
      }
    }
    bounds_json["partition_transport_bound"] = bound;
    result["error_bounds"] = bounds_json;
  }

  const auto finished = std::chrono::steady_clock::now();
  json manifest = {
      {"command", command},
      {"density", args.density_path},
      {"bounds", args.bounds.empty() ? json() : json(args.bounds)},
      {"config",
       {{"epsilon", args.epsilon},
        {"subpixels", args.subpixels},
        {"multiscale", args.multiscale},
        {"balance_tol", args.balance_tol},
        {"autonormalize", args.autonormalize}}},
      {"seed", args.seed},
      {"version", sdot1::kVersion},
      {"wall_time_ms",
       std::chrono::duration_cast<std::chrono::milliseconds>(finished - started).count()},
  };

  SolveOutput out;
  out.report = {{"manifest", manifest}, {"result", result}};
  out.converged = report.converged;
  return out;
}

void write_report(const json& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    out << report.dump(2) << "\n";
  }
}

int cmd_solve(const CommonSolveArgs& args, const std::string& nu_path) {
  const auto grid = sdot1::load_density(args.density_path, parse_bounds(args.bounds));
  const auto nu = sdot1::load_discrete_csv(nu_path);
  CommonSolveArgs enriched = args;
  auto out = run_solve("solve", enriched, grid, nu, {{"nu", nu_path}});
  write_report(out.report, args.out_json);
  return out.converged ? 0 : kExitNotConverged;
}

int cmd_gof(const CommonSolveArgs& args, const std::string& sample_path) {
  const auto grid = sdot1::load_density(args.density_path, parse_bounds(args.bounds));
  const auto points = sdot1::load_points_csv(sample_path);
  if (points.empty()) throw std::runtime_error(sample_path + ": no sample points");
  const double mass_each = grid.total_mass() / points.size();
  sdot1::DiscreteMeasure nu(points, std::vector<double>(points.size(), mass_each));

  auto out = run_solve("gof", args, grid, nu, {{"sample", sample_path}});

  // eccentricity diagnostic for the converged partition
  const auto& result = out.report["result"];
  std::vector<double> weights = result["weights"].get<std::vector<double>>();
  const sdot1::SiteSet sites{nu.points(), weights};
  sdot1::RasterizeOptions raster_options;
  raster_options.threads = env_threads();
  const auto raster = sdot1::rasterize(
      grid, sites, result["subpixel_factor"].get<int>(), raster_options);
  auto ecc = sdot1::cell_eccentricities(grid, raster, nu.size());
  std::vector<double> sorted = ecc;
  std::sort(sorted.begin(), sorted.end());
  out.report["result"]["cell_eccentricity"] = ecc;
  out.report["result"]["median_cell_eccentricity"] = sorted[sorted.size() / 2];

  write_report(out.report, args.out_json);
  return out.converged ? 0 : kExitNotConverged;
}

int cmd_quantize(const std::string& density_path, const std::vector<double>& bounds,
                 int n, uint64_t seed, const std::string& out_path) {
  const auto grid = sdot1::load_density(density_path, parse_bounds(bounds));
  const auto nu = sdot1::quantize(grid, n, seed);
  sdot1::write_discrete_csv(nu, out_path);
  return 0;
}

int cmd_render(const std::string& in_path, const std::string& svg_path, int width_px) {
  sdot1::RenderOptions options;
  options.width_px = width_px;
  std::string svg;
  if (in_path.size() > 4 && in_path.substr(in_path.size() - 4) == ".pgm") {
    const auto img = sdot1::load_pgm(in_path);
    std::vector<int32_t> assignment(img.pixels.size());
    for (size_t i = 0; i < img.pixels.size(); ++i) {
      assignment[i] = img.pixels[i] == img.max_value ? sdot1::kUnassigned
                                                     : static_cast<int32_t>(img.pixels[i]);
    }
    svg = sdot1::render_assignment_svg(assignment, img.width, img.height, options);
  } else {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error(in_path + ": cannot open file");
    const json report = json::parse(in);
    const auto& manifest = report.at("manifest");
    const auto& result = report.at("result");
    std::optional<sdot1::Bounds> bounds;
    if (!manifest.at("bounds").is_null()) {
      const auto b = manifest.at("bounds").get<std::vector<double>>();
      bounds = sdot1::Bounds{b[0], b[1], b[2], b[3]};
    }
    const auto grid = sdot1::load_density(manifest.at("density").get<std::string>(), bounds);
    std::vector<sdot1::Point> sites;
    for (const auto& s : result.at("sites")) {
      sites.push_back({s[0].get<double>(), s[1].get<double>()});
    }
    std::vector<double> masses = result.at("masses").get<std::vector<double>>();
    std::vector<double> weights = result.at("weights").get<std::vector<double>>();
    sdot1::RasterizeOptions raster_options;
    raster_options.threads = env_threads();
    const sdot1::Rasterization raster =
        sdot1::rasterize(grid, {sites, weights},
                         result.at("subpixel_factor").get<int>(), raster_options);
    svg = sdot1::render_partition_svg(raster, grid, sites, &masses, options);
  }
  std::ofstream out(svg_path);
  if (!out) throw std::runtime_error(svg_path + ": cannot open file for writing");
  out << svg;
  return 0;
}

int cmd_oracle(const std::string& mu_path, const std::string& nu_path, int p) {
  const auto mu = sdot1::load_discrete_csv(mu_path);
  const auto nu = sdot1::load_discrete_csv(nu_path);
  const auto plan =
      sdot1::discrete_wp({mu.points(), mu.masses(), nu.points(), nu.masses()}, p);
  json entries = json::array();
  for (const auto& e : plan.entries) entries.push_back({e.from, e.to, e.mass});
  json out = {{"cost", plan.cost}, {"p", p}, {"plan", entries}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-discrete optimal transport under Euclidean cost"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("sdot1 ") + sdot1::kVersion);

  CommonSolveArgs solve_args;
  std::string nu_path;
  auto* solve = app.add_subcommand("solve", "optimal transport partition and W1");
  add_common_solve_flags(solve, solve_args);
  solve->add_option("--nu", nu_path, "target measure CSV (x,y,mass)")->required();

  CommonSolveArgs gof_args;
  std::string sample_path;
  auto* gof = app.add_subcommand("gof", "goodness-of-fit partition for a sample");
  add_common_solve_flags(gof, gof_args);
  gof->add_option("--sample", sample_path, "sample points CSV (x,y)")->required();

  std::string q_density, q_out;
  std::vector<double> q_bounds;
  int q_n = 0;
  uint64_t q_seed = 0;
  auto* quant = app.add_subcommand("quantize", "K-means discretization of a density");
  quant->add_option("--density", q_density)->required();
  quant->add_option("--bounds", q_bounds)->delimiter(',')->expected(4);
  quant->add_option("--n", q_n, "support size")->required();
  quant->add_option("--seed", q_seed);
  quant->add_option("--out", q_out, "output CSV")->required();

  std::string r_in, r_svg;
  int r_width = 800;
  auto* render = app.add_subcommand("render", "render a report or assignment to SVG");
  render->add_option("--in", r_in, "report JSON or assignment PGM")->required();
  render->add_option("--svg", r_svg, "output SVG")->required();
  render->add_option("--width", r_width, "output width in pixels");

  std::string o_mu, o_nu;
  int o_p = 1;
  auto* oracle = app.add_subcommand("oracle", "exact discrete-discrete transport (debugging)");
  oracle->group("");  // hidden
  oracle->add_option("--mu", o_mu)->required();
  oracle->add_option("--nu", o_nu)->required();
  oracle->add_option("--p", o_p)->check(CLI::IsMember({1, 2}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_args, nu_path);
    if (gof->parsed()) return cmd_gof(gof_args, sample_path);
    if (quant->parsed()) return cmd_quantize(q_density, q_bounds, q_n, q_seed, q_out);
    if (render->parsed()) return cmd_render(r_in, r_svg, r_width);
    if (oracle->parsed()) return cmd_oracle(o_mu, o_nu, o_p);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
