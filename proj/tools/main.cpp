#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "kqse/errors.hpp"
#include "kqse/harness/config.hpp"
#include "kqse/harness/experiments.hpp"
#include "kqse/io.hpp"
#include "kqse/seeding.hpp"

namespace fs = std::filesystem;
using namespace kqse;
using namespace kqse::harness;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGate = 3;

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<unsigned> workers;
  std::string out = ".";
  bool full = false;
  std::vector<std::string> sets;
};

Config load_config(const GlobalFlags& g) {
  Config cfg = g.config_path.empty() ? Config::from_string("") : Config::from_file(g.config_path);
  for (const auto& kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) cfg.set("run.seed", std::to_string(*g.seed));
  if (g.reps) cfg.set("run.reps", std::to_string(*g.reps));
  if (g.workers) cfg.set("run.workers", std::to_string(*g.workers));
  if (g.full) cfg.set("run.full", "true");
  return cfg;
}

fs::path out_dir(const GlobalFlags& g) {
  fs::path dir(g.out);
  fs::create_directories(dir);
  return dir;
}

void write_result(const ExperimentResult& r, const Config& cfg, const fs::path& dir) {
  const fs::path csv = dir / (r.name + ".csv");
  write_text(csv, r.table.csv());
  nlohmann::json side;
  side["name"] = r.name;
  side["rows"] = r.table.rows.size();
  side["summary"] = r.summary;
  side["config"] = cfg.resolved();
  write_text(sidecar_path(csv), side.dump(2) + "\n");
  std::cout << csv.string() << '\n';
}

Axis config_axis(const Config& cfg, const std::string& prefix, std::size_t count) {
  const double max = cfg.get_double("grid." + prefix + "_max", 6.0);
  const std::size_t n = cfg.get_size("grid.n_" + prefix, count);
  const std::string layout = cfg.get("grid.layout", "dft");
  if (layout == "dft") return Axis::dft(max, n);
  if (layout == "symmetric") return Axis::symmetric(max, n);
  throw ConfigError("grid.layout expects dft or symmetric");
}

// Sampled or analytic CF grid, or one read from grid.input.
CFGrid obtain_grid(const Config& cfg) {
  const std::string input = cfg.get("grid.input", "");
  if (!input.empty()) return read_cf_grid(input);
  const auto state = config_state(cfg);
  const Axis mu = config_axis(cfg, "mu", 36);
  const Axis nu = config_axis(cfg, "nu", 36);
  if (cfg.get("grid.source", "sampled") == "analytic") return analytic_cf_grid(state, mu, nu);

  const auto opt = run_options(cfg);
  const std::size_t n = cfg.get_size("grid.n", 415);
  const bool noisy = cfg.get_bool("grid.noisy", false);
  const NoiseModel noise = config_noise(cfg);
  CFEstimateOptions eo;
  eo.kernel = parse_kernel(cfg.get("grid.kernel", "gaussian"));
  eo.workers = opt.workers;
  if (noisy) eo.noise = noise;
  eo.deconvolve = cfg.get_bool("grid.deconvolve", true);
  BatchSource source = [&](std::size_t i, std::size_t j) -> std::optional<SampleBatch> {
    const std::size_t idx = i * nu.count + j;
    const PhaseSetting s{mu.at(i), nu.at(j)};
    const auto sampler = build_sampler(state, s);
    auto x = draw(sampler, n, derive_seed(opt.seed, idx, 0, Stream::Signal));
    if (!noisy) return x;
    return mix_noise(x, noise, derive_seed(opt.seed, idx, 0, Stream::Noise));
  };
  auto grid = estimate_cf_grid(mu, nu, source, eo);
  grid.state_tag = state.tag();
  return grid;
}

int cmd_sample(const Config& cfg, const fs::path& dir) {
  const auto opt = run_options(cfg);
  const auto state = config_state(cfg);
  const auto s = config_setting(cfg);
  const std::size_t n = cfg.get_size("sample.n", 1000);
  const bool noisy = cfg.get_bool("sample.noisy", false);
  const auto noise = config_noise(cfg);
  const auto sampler = build_sampler(state, s);
  const auto x = draw(sampler, n, derive_seed(opt.seed, 0, 0, Stream::Signal));
  const auto batch = noisy ? mix_noise(x, noise, derive_seed(opt.seed, 0, 0, Stream::Noise)) : x;
  const fs::path csv = dir / "samples.csv";
  write_sample_batch(batch, csv, cfg.resolved());
  std::cout << csv.string() << '\n';
  return 0;
}

int cmd_kde(const Config& cfg, const fs::path& dir) {
  const auto opt = run_options(cfg);
  const std::string input = cfg.get("kde.input", "");
  std::vector<double> values;
  if (!input.empty()) {
    values = read_sample_values(input);
  } else {
    const auto sampler = build_sampler(config_state(cfg), config_setting(cfg));
    values = draw(sampler, cfg.get_size("sample.n", 1000),
                  derive_seed(opt.seed, 0, 0, Stream::Signal))
                 .values;
  }
  const UniformGrid grid{cfg.get_double("kde.lo", -8.0), cfg.get_double("kde.hi", 8.0),
                         cfg.get_size("kde.points", 1601)};
  const std::string rule = cfg.get("kde.bandwidth", "silverman");
  DensityEstimate est;
  if (rule == "fd") {
    const auto hist = fd_histogram(values);
    est = hist;
    est.grid = grid;
    est.values = histogram_on_grid(hist, grid);
  } else {
    const KernelKind k = parse_kernel(cfg.get("kde.kernel", "gaussian"));
    double h = 0.0;
    if (rule == "silverman") {
      h = silverman_bandwidth(values);
    } else if (rule == "lscv") {
      h = lscv_bandwidth(values, k,
                         log_spaced(cfg.get_double("kde.lscv_min", 0.05),
                                    cfg.get_double("kde.lscv_max", 1.0),
                                    cfg.get_size("kde.lscv_count", 40)));
    } else if (rule == "fixed") {
      h = cfg.get_double("kde.h", 0.3);
    } else {
      throw ConfigError("kde.bandwidth expects silverman, lscv, fixed or fd");
    }
    est = kde_evaluate(values, k, h, grid);
  }
  const fs::path csv = dir / "kde.csv";
  write_density_estimate(est, csv, cfg.resolved());
  std::cout << csv.string() << '\n';
  return 0;
}

int cmd_kcfe(const Config& cfg, const fs::path& dir) {
  const auto grid = obtain_grid(cfg);
  const fs::path csv = dir / "cf_grid.csv";
  write_cf_grid(grid, csv, cfg.resolved());
  std::cout << csv.string() << '\n';
  return 0;
}

int cmd_reconstruct(const Config& cfg, const fs::path& dir) {
  ReconstructionGrid rg;
  rg.y = {cfg.get_double("recon.y_min", -4.0), cfg.get_double("recon.y_max", 4.0),
          cfg.get_size("recon.y_points", 17)};
  rg.mu_max = cfg.get_double("grid.mu_max", 6.0);
  rg.n_mu = cfg.get_size("grid.n_mu", 36);
  const std::string input = cfg.get("grid.input", "");
  CFGrid grid;
  if (!input.empty()) {
    grid = read_cf_grid(input);
  } else {
    // nu runs over y - y' on the y grid
    const auto state = config_state(cfg);
    const Axis mu = rg.mu_axis();
    const Axis nu = rg.nu_axis();
    if (cfg.get("grid.source", "sampled") == "analytic") {
      grid = analytic_cf_grid(state, mu, nu);
    } else {
      const auto opt = run_options(cfg);
      const std::size_t n = cfg.get_size("grid.n", 415);
      const bool noisy = cfg.get_bool("grid.noisy", false);
      const NoiseModel noise = config_noise(cfg);
      CFEstimateOptions eo;
      eo.workers = opt.workers;
      if (noisy) eo.noise = noise;
      eo.deconvolve = cfg.get_bool("grid.deconvolve", true);
      grid = estimate_cf_grid(
          mu, nu,
          [&](std::size_t i, std::size_t j) -> std::optional<SampleBatch> {
            const std::size_t idx = i * nu.count + j;
            const auto sampler = build_sampler(state, PhaseSetting{mu.at(i), nu.at(j)});
            auto x = draw(sampler, n, derive_seed(opt.seed, idx, 0, Stream::Signal));
            if (!noisy) return x;
            return mix_noise(x, noise, derive_seed(opt.seed, idx, 0, Stream::Noise));
          },
          eo);
      grid.state_tag = state.tag();
    }
  }
  const std::string tail = cfg.get("recon.tail", "off");
  if (tail != "on" && tail != "off") throw ConfigError("recon.tail expects on or off");
  const auto rho = reconstruct_rho(grid, rg, tail == "on");
  const fs::path csv = dir / "rho.csv";
  write_density_kernel(rho, csv, cfg.resolved());
  std::cout << csv.string() << '\n';
  return 0;
}

int cmd_trace(const Config& cfg, const fs::path& dir) {
  const auto grid = obtain_grid(cfg);
  const double purity = overlap(grid, grid, 1.0);
  ResultTable t;
  t.columns = {"functional", "value"};
  t.add({"purity", format_double(purity)});
  if (cfg.get_bool("trace.cubic", true)) {
    t.add({"trace_rho3", format_double(trace_power_3(grid))});
  }
  ExperimentResult r{"trace", t, {{"state", grid.state_tag}, {"source", grid.source}}};
  write_result(r, cfg, dir);
  return 0;
}

int cmd_validate(const Config& cfg, const fs::path& dir) {
  const auto grid = obtain_grid(cfg);
  std::vector<ReferenceState> probes;
  for (const auto& tag : cfg.get_strings("validate.probes",
                                         {"coherent:0", "coherent:1", "coherent:0.5+0.5i",
                                          "coherent:-1+0.3i", "fock:0"})) {
    probes.push_back(ReferenceState::parse(tag));
  }
  const auto report = validate_cf_grid(grid, probes);
  const fs::path path = dir / "validation.json";
  write_text(path, validation_report_json(report, cfg.resolved()) + "\n");
  std::cout << path.string() << '\n' << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : kExitGate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel quantum state estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--config", g.config_path, "Config file (key = value with [sections])");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--reps", g.reps, "Repetitions L");
  app.add_option("--workers", g.workers, "Worker threads (0: all cores)");
  app.add_option("--out", g.out, "Output directory");
  app.add_flag("--full", g.full, "Paper-scale repetition counts");
  app.add_option("--set", g.sets, "Override a config key, KEY=VALUE");

  std::string which;
  auto* sample = app.add_subcommand("sample", "Draw quadrature samples");
  auto* kde = app.add_subcommand("kde", "Kernel tomogram estimate");
  auto* kcfe = app.add_subcommand("kcfe", "CF grid estimate");
  auto* reconstruct = app.add_subcommand("reconstruct", "Density-kernel reconstruction");
  auto* trace = app.add_subcommand("trace", "Purity and tr rho^3");
  auto* validate = app.add_subcommand("validate", "Physical-validity checks on a CF grid");
  auto* slopes = app.add_subcommand("slopes", "Convergence-rate study");
  slopes->add_option("which", which, "kde-mise | kcfe-mse | kqse-end2end")->required();
  auto* table = app.add_subcommand("table", "Reproduce a results table");
  table->add_option("which", which, "1 | s2 | s3 | s4")->required();
  auto* plotdata = app.add_subcommand("plotdata", "Figure data");
  plotdata->add_option("figure", which, "tomogram-kde | cf-corrected | rho-heatmap | wigner")
      ->required();
  auto* bounds = app.add_subcommand("bounds", "Empirical errors against the error bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Config cfg = load_config(g);
    const fs::path dir = out_dir(g);
    const auto started = std::chrono::steady_clock::now();
    int code = 0;
    if (sample->parsed()) {
      code = cmd_sample(cfg, dir);
    } else if (kde->parsed()) {
      code = cmd_kde(cfg, dir);
    } else if (kcfe->parsed()) {
      code = cmd_kcfe(cfg, dir);
    } else if (reconstruct->parsed()) {
      code = cmd_reconstruct(cfg, dir);
    } else if (trace->parsed()) {
      code = cmd_trace(cfg, dir);
    } else if (validate->parsed()) {
      code = cmd_validate(cfg, dir);
    } else if (slopes->parsed()) {
      write_result(run_slopes(cfg, which), cfg, dir);
    } else if (table->parsed()) {
      ExperimentResult r;
      if (which == "1") {
        r = run_table1(cfg);
      } else if (which == "s2") {
        r = run_table_s2(cfg);
      } else if (which == "s3") {
        r = run_table_s3(cfg);
      } else if (which == "s4") {
        r = run_table_s4(cfg);
      } else {
        throw ConfigError("table expects 1, s2, s3 or s4");
      }
      write_result(r, cfg, dir);
    } else if (plotdata->parsed()) {
      write_result(emit_plotdata(cfg, which), cfg, dir);
    } else if (bounds->parsed()) {
      write_result(run_bounds(cfg), cfg, dir);
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
    std::fprintf(stderr, "done in %.1f s\n", took.count());
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalGateError& e) {
    std::cerr << "numerical gate: " << e.what() << '\n';
    return kExitGate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
