#include "kqse/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "kqse/error_bounds.hpp"
#include "kqse/errors.hpp"
#include "kqse/io.hpp"
#include "kqse/parallel.hpp"
#include "kqse/seeding.hpp"
#include "kqse/stats.hpp"

namespace kqse::harness {

using nlohmann::json;

ExperimentPlan ExperimentPlan::with_defaults(std::size_t n) {
  ExperimentPlan p;
  p.n = n;
  const double log_n = std::log(static_cast<double>(n));
  p.mu_max = log_n;
  p.nu_max = log_n;
  p.n_mu = static_cast<std::size_t>(std::lround(p.mu_max * log_n));
  p.n_nu = p.n_mu;
  return p;
}

PairedCF paired_cf(const InverseCdfTable& sampler, const NoiseModel& noise, KernelKind kernel,
                   std::size_t n, std::uint64_t signal_seed, std::uint64_t noise_seed, double t,
                   std::vector<double>& x, std::vector<double>& z) {
  x.resize(n);
  z.resize(n);
  Engine signal(signal_seed);
  draw_into(sampler, signal, x);
  Engine noise_engine(noise_seed);
  mix_noise_into(x, noise, noise_engine, z);

  const PhaseSetting& s = sampler.setting();
  const auto plain = kcfe_point(x, s, t, kernel);
  const auto noisy = kcfe_point(z, s, t, kernel);
  const auto fixed = deconvolve(kcfe_point(z, s, t / noise.kappa, kernel), noise, t);
  return {plain.value, noisy.value, fixed.value, plain.h, noisy.h, fixed.h};
}

namespace {

cplx pick(const PairedCF& p, std::size_t type) {
  return type == 0 ? p.noiseless : type == 1 ? p.noisy : p.corrected;
}

double pick_h(const PairedCF& p, std::size_t type) {
  return type == 0 ? p.h_noiseless : type == 1 ? p.h_noisy : p.h_corrected;
}

CFGrid sampled_grid(const Axis& mu, const Axis& nu, const cplx* values, bool deconvolved,
                    const NoiseModel& noise, std::size_t n) {
  CFGrid g;
  g.mu = mu;
  g.nu = nu;
  g.values.assign(values, values + mu.count * nu.count);
  g.h.assign(g.size(), 0.0);
  g.n.assign(g.size(), n);
  g.source = "sampled";
  g.noise = noise;
  g.deconvolved = deconvolved;
  return g;
}

}  // namespace

std::vector<KqseRow> kqse_study(const ExperimentPlan& plan) {
  plan.noise.validate();
  if (plan.reps == 0 || plan.n == 0) throw ConfigError("reps and n must be positive");
  const Axis ov_mu = Axis::dft(plan.mu_max, plan.n_mu);
  const Axis ov_nu = Axis::dft(plan.nu_max, plan.n_nu);
  const ReconstructionGrid recon = plan.recon_grid();
  const Axis rc_mu = recon.mu_axis();
  const Axis rc_nu = recon.nu_axis();

  std::vector<PhaseSetting> settings;
  for (std::size_t i = 0; i < ov_mu.count; ++i) {
    for (std::size_t j = 0; j < ov_nu.count; ++j) settings.push_back({ov_mu.at(i), ov_nu.at(j)});
  }
  const std::size_t n_overlap = settings.size();
  for (std::size_t k = 0; k < rc_mu.count; ++k) {
    for (std::size_t d = 0; d < rc_nu.count; ++d) settings.push_back({rc_mu.at(k), rc_nu.at(d)});
  }
  const std::size_t total = settings.size();
  const std::size_t reps = plan.reps;

  // est[(type * reps + r) * total + s]
  std::vector<cplx> est(3 * reps * total);
  std::vector<double> h_sum(3 * total, 0.0);
  parallel_for(total, plan.workers, [&](std::size_t s) {
    const auto sampler = build_sampler(plan.state, settings[s]);
    std::vector<double> x;
    std::vector<double> z;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto p = paired_cf(sampler, plan.noise, plan.kernel, plan.n,
                               derive_seed(plan.seed, s, r, Stream::Signal),
                               derive_seed(plan.seed, s, r, Stream::Noise), 1.0, x, z);
      for (std::size_t type = 0; type < 3; ++type) {
        est[(type * reps + r) * total + s] = pick(p, type);
        h_sum[type * total + s] += pick_h(p, type);
      }
    }
  });

  const Eigen::MatrixXcd truth = analytic_density_grid(plan.state, plan.y).values;
  const CFFunction true_cf = cf_function(plan.state);
  const auto g = static_cast<Eigen::Index>(plan.y.points);
  std::vector<Eigen::MatrixXd> sq(3 * reps, Eigen::MatrixXd::Zero(g, g));
  std::vector<double> ov(3 * reps, 0.0);
  parallel_for(3 * reps, plan.workers, [&](std::size_t task) {
    const std::size_t type = task / reps;
    const cplx* base = est.data() + task * total;
    const bool deconvolved = type == 2;
    const CFGrid ov_grid = sampled_grid(ov_mu, ov_nu, base, deconvolved, plan.noise, plan.n);
    ov[task] = overlap(true_cf, ov_grid, 1.0);
    const CFGrid rc_grid =
        sampled_grid(rc_mu, rc_nu, base + n_overlap, deconvolved, plan.noise, plan.n);
    const auto rho = reconstruct_rho(rc_grid, recon, plan.tail);
    sq[task] = (rho.values - truth).cwiseAbs2();
  });

  std::vector<KqseRow> rows;
  for (std::size_t type = 0; type < 3; ++type) {
    Eigen::MatrixXd mean_sq = Eigen::MatrixXd::Zero(g, g);
    double mse = 0.0;
    double d2 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      mean_sq += sq[type * reps + r];
      const double v = ov[type * reps + r];
      mse += (v - 1.0) * (v - 1.0);
      const double d = trace_distance_pure(v);
      d2 += d * d;
    }
    double h = 0.0;
    for (std::size_t s = 0; s < total; ++s) h += h_sum[type * total + s];
    const auto L = static_cast<double>(reps);
    rows.push_back({kDataTypes[type], mean_sq.maxCoeff() / L, mse / L, d2 / L,
                    h / (L * static_cast<double>(total))});
  }
  return rows;
}

namespace {

double choose_bandwidth(const KdeStudyPlan& plan, std::span<const double> x, KernelKind k) {
  if (plan.bandwidth == "silverman") return silverman_bandwidth(x);
  if (plan.bandwidth == "lscv") return lscv_bandwidth(x, k, plan.lscv_grid);
  if (plan.bandwidth == "fixed") return plan.fixed_h;
  throw ConfigError("unknown bandwidth rule '" + plan.bandwidth +
                    "' (expected silverman, lscv or fixed)");
}

}  // namespace

std::vector<KdeRow> kde_study(const KdeStudyPlan& plan) {
  if (plan.reps == 0) throw ConfigError("reps must be positive");
  const auto truth = tomogram_grid(plan.state, plan.setting, plan.eval.lo, plan.eval.step(),
                                   plan.eval.points);
  const auto sampler = build_sampler(plan.state, plan.setting);
  const std::size_t methods = plan.kernels.size() + (plan.histogram ? 1 : 0);
  const std::size_t tasks = plan.ns.size() * plan.reps;
  std::vector<double> mise_v(tasks * methods);
  std::vector<double> h_v(tasks * methods);
  parallel_for(tasks, plan.workers, [&](std::size_t task) {
    const std::size_t ni = task / plan.reps;
    const std::size_t r = task % plan.reps;
    std::vector<double> x(plan.ns[ni]);
    Engine engine(derive_seed(plan.seed, ni, r, Stream::Signal));
    draw_into(sampler, engine, x);
    for (std::size_t m = 0; m < plan.kernels.size(); ++m) {
      const double h = choose_bandwidth(plan, x, plan.kernels[m]);
      const auto est = kde_evaluate(x, plan.kernels[m], h, plan.eval);
      mise_v[task * methods + m] = mise(est.values, truth, plan.eval.step());
      h_v[task * methods + m] = h;
    }
    if (plan.histogram) {
      const auto hist = fd_histogram(x);
      const auto values = histogram_on_grid(hist, plan.eval);
      mise_v[task * methods + methods - 1] = mise(values, truth, plan.eval.step());
      h_v[task * methods + methods - 1] = hist.h;
    }
  });

  std::vector<KdeRow> rows;
  for (std::size_t ni = 0; ni < plan.ns.size(); ++ni) {
    for (std::size_t m = 0; m < methods; ++m) {
      double ms = 0.0;
      double hs = 0.0;
      for (std::size_t r = 0; r < plan.reps; ++r) {
        ms += mise_v[(ni * plan.reps + r) * methods + m];
        hs += h_v[(ni * plan.reps + r) * methods + m];
      }
      const std::string method =
          m < plan.kernels.size() ? kernel_name(plan.kernels[m]) : std::string("histogram");
      const auto L = static_cast<double>(plan.reps);
      rows.push_back({plan.ns[ni], method, hs / L, ms / L});
    }
  }
  return rows;
}

std::vector<KcfeRow> kcfe_study(const KcfeStudyPlan& plan) {
  plan.noise.validate();
  if (plan.reps == 0) throw ConfigError("reps must be positive");
  const auto sampler = build_sampler(plan.state, plan.setting);
  const cplx truth = cf(plan.state, plan.t, plan.setting);
  const std::size_t tasks = plan.ns.size() * plan.reps;
  std::vector<PairedCF> out(tasks);
  parallel_for(tasks, plan.workers, [&](std::size_t task) {
    const std::size_t ni = task / plan.reps;
    const std::size_t r = task % plan.reps;
    std::vector<double> x;
    std::vector<double> z;
    out[task] = paired_cf(sampler, plan.noise, plan.kernel, plan.ns[ni],
                          derive_seed(plan.seed, ni, r, Stream::Signal),
                          derive_seed(plan.seed, ni, r, Stream::Noise), plan.t, x, z);
  });
  std::vector<KcfeRow> rows;
  for (std::size_t ni = 0; ni < plan.ns.size(); ++ni) {
    for (std::size_t type = 0; type < 3; ++type) {
      double se = 0.0;
      double hs = 0.0;
      for (std::size_t r = 0; r < plan.reps; ++r) {
        const auto& p = out[ni * plan.reps + r];
        se += std::norm(pick(p, type) - truth);
        hs += pick_h(p, type);
      }
      const auto L = static_cast<double>(plan.reps);
      rows.push_back({plan.ns[ni], kDataTypes[type], hs / L, se / L});
    }
  }
  return rows;
}

std::vector<BoundsRow> bounds_study(const BoundsPlan& plan) {
  if (plan.reps == 0) throw ConfigError("reps must be positive");
  const ReconstructionGrid recon{plan.y, plan.mu_max, plan.n_mu};
  const Axis mu = recon.mu_axis();
  const Axis nu = recon.nu_axis();
  std::vector<PhaseSetting> settings;
  for (std::size_t k = 0; k < mu.count; ++k) {
    for (std::size_t d = 0; d < nu.count; ++d) settings.push_back({mu.at(k), nu.at(d)});
  }
  const std::size_t total = settings.size();
  const std::size_t ns = plan.ns.size();
  const std::size_t reps = plan.reps;

  std::vector<cplx> est(ns * reps * total);
  parallel_for(total, plan.workers, [&](std::size_t s) {
    const auto sampler = build_sampler(plan.state, settings[s]);
    std::vector<double> x;
    for (std::size_t ni = 0; ni < ns; ++ni) {
      x.resize(plan.ns[ni]);
      for (std::size_t r = 0; r < reps; ++r) {
        Engine engine(derive_seed(plan.seed, s, ni * reps + r, Stream::Signal));
        draw_into(sampler, engine, x);
        est[(ni * reps + r) * total + s] =
            kcfe_point(x, settings[s], 1.0, KernelKind::GaussianStd).value;
      }
    }
  });

  const CFFunction phi = cf_function(plan.state);
  const Eigen::MatrixXcd lattice = reconstruct_rho(phi, recon, false).values;
  const Eigen::MatrixXcd truth = analytic_density_grid(plan.state, plan.y).values;
  const auto g = static_cast<Eigen::Index>(plan.y.points);
  std::vector<Eigen::MatrixXd> eps(ns * reps);
  std::vector<Eigen::MatrixXd> sup(ns * reps);
  parallel_for(ns * reps, plan.workers, [&](std::size_t task) {
    const NoiseModel unused;
    const CFGrid grid =
        sampled_grid(mu, nu, est.data() + task * total, false, unused, plan.ns[task / reps]);
    const auto rho = reconstruct_rho(grid, recon, false);
    eps[task] = (rho.values - lattice).cwiseAbs2();
    sup[task] = (rho.values - truth).cwiseAbs2();
  });

  // envelope max_nu |phi(mu, nu)| for the decay fit
  std::vector<double> mus;
  std::vector<double> env;
  for (std::size_t k = 0; k < mu.count; ++k) {
    double m = 0.0;
    for (std::size_t d = 0; d < nu.count; ++d) m = std::max(m, std::abs(phi(mu.at(k), nu.at(d))));
    mus.push_back(mu.at(k));
    env.push_back(m);
  }
  ErrorBoundParams params;
  params.tau = std::max(0.0, fit_tau(mus, env).rate);

  std::vector<BoundsRow> rows;
  for (std::size_t ni = 0; ni < ns; ++ni) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(g, g);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(g, g);
    for (std::size_t r = 0; r < reps; ++r) {
      e += eps[ni * reps + r];
      s += sup[ni * reps + r];
    }
    const auto L = static_cast<double>(reps);
    BoundsRow row;
    row.n = plan.ns[ni];
    row.t = plan.ns[ni] * plan.n_mu;
    row.eps_k2 = e.maxCoeff() / L;
    row.estimation = estimation_bound(plan.mu_max, plan.ns[ni]);
    row.sup_error = s.maxCoeff() / L;
    row.total = total_bound(params, plan.mu_max, plan.n_mu, plan.ns[ni]);
    row.tau = params.tau;
    rows.push_back(row);
  }
  return rows;
}

SlopeResult loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto f = fit_loglog(x, y);
  return {x, y, f.slope, f.ci_low, f.ci_high};
}

void ResultTable::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match header");
  rows.push_back(std::move(row));
}

std::string ResultTable::csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

RunOptions run_options(const Config& cfg) {
  RunOptions o;
  o.seed = cfg.get_u64("run.seed", kDefaultSeed);
  o.reps = cfg.get_size("run.reps", 0);
  o.workers = static_cast<unsigned>(cfg.get_size("run.workers", 0));
  o.full = cfg.get_bool("run.full", false);
  return o;
}

std::size_t choose_reps(const RunOptions& opt, std::size_t fallback, std::size_t full_default) {
  if (opt.reps > 0) return opt.reps;
  return opt.full ? full_default : fallback;
}

ReferenceState config_state(const Config& cfg) {
  return ReferenceState::parse(cfg.get("state.tag", "ccs:1+0.5i"));
}

NoiseModel config_noise(const Config& cfg) {
  NoiseModel nm{cfg.get_double("noise.kappa", 0.85), cfg.get_double("noise.mean", 0.0),
                cfg.get_double("noise.variance", 1.0)};
  nm.validate();
  return nm;
}

PhaseSetting config_setting(const Config& cfg) {
  return {cfg.get_double("setting.mu", 0.8), cfg.get_double("setting.nu", 1.2)};
}

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

std::pair<std::size_t, std::size_t> parse_size_pair(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw ConfigError("size '" + s + "' must look like nxN");
  try {
    return {std::stoul(s.substr(0, x)), std::stoul(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw ConfigError("size '" + s + "' must look like nxN");
  }
}

bool resolve_tail(const Config& cfg, const std::string& key, const ReferenceState& state) {
  const std::string mode = cfg.get(key, "auto");
  if (mode == "auto") return state.is_ground_state();
  if (mode == "on") return true;
  if (mode == "off") return false;
  throw ConfigError("key '" + key + "' expects auto, on or off");
}

UniformGrid config_y(const Config& cfg, const std::string& section, std::size_t points) {
  UniformGrid y{cfg.get_double(section + ".y_min", -4.0), cfg.get_double(section + ".y_max", 4.0),
                cfg.get_size(section + ".y_points", points)};
  if (y.points < 2 || !(y.hi > y.lo)) throw ConfigError(section + ": bad y grid");
  return y;
}

ExperimentPlan base_plan(const Config& cfg, const RunOptions& opt) {
  ExperimentPlan p;
  p.state = config_state(cfg);
  p.noise = config_noise(cfg);
  p.seed = opt.seed;
  p.workers = opt.workers;
  p.kernel = parse_kernel(cfg.get("recon.kernel", "gaussian"));
  return p;
}

json plan_json(const ExperimentPlan& p) {
  return {{"state", p.state.tag()},
          {"noise", p.noise.tag()},
          {"n", p.n},
          {"n_mu", p.n_mu},
          {"n_nu", p.n_nu},
          {"mu_max", p.mu_max},
          {"nu_max", p.nu_max},
          {"y", {{"lo", p.y.lo}, {"hi", p.y.hi}, {"points", p.y.points}}},
          {"reps", p.reps},
          {"seed", std::to_string(p.seed)},
          {"tail", p.tail},
          {"T_mu", p.t_mu()},
          {"T_munu", p.t_munu()}};
}

std::vector<KernelKind> parse_kernels(const std::vector<std::string>& names) {
  std::vector<KernelKind> out;
  for (const auto& n : names) out.push_back(parse_kernel(n));
  return out;
}

}  // namespace

ExperimentResult run_table1(const Config& cfg) {
  const auto opt = run_options(cfg);
  ExperimentPlan base = base_plan(cfg, opt);
  base.mu_max = cfg.get_double("table1.mu_max", 6.0);
  base.nu_max = cfg.get_double("table1.nu_max", base.mu_max);
  base.y = config_y(cfg, "table1", 17);
  base.reps = choose_reps(opt, 50, 1000);
  base.tail = resolve_tail(cfg, "table1.tail", base.state);
  const auto sizes = cfg.get_strings("table1.sizes", {"415x36", "531x38", "755x40"});

  ExperimentResult res;
  res.name = "table1";
  res.table.columns = {"T", "n", "N", "type", "linf", "overlap_mse", "d2", "avg_h"};
  res.summary["plans"] = json::array();
  for (const auto& s : sizes) {
    ExperimentPlan p = base;
    std::tie(p.n, p.n_mu) = parse_size_pair(s);
    p.n_nu = p.n_mu;
    for (const auto& row : kqse_study(p)) {
      res.table.add({fmt(p.t_munu()), fmt(p.n), fmt(p.n_mu), row.type, fmt(row.linf),
                     fmt(row.overlap_mse), fmt(row.d2), fmt(row.avg_h)});
    }
    res.summary["plans"].push_back(plan_json(p));
  }
  return res;
}

ExperimentResult run_table_s2(const Config& cfg) {
  const auto opt = run_options(cfg);
  KdeStudyPlan p;
  p.state = config_state(cfg);
  p.setting = config_setting(cfg);
  p.ns = cfg.get_sizes("tables.n", {500, 1000, 2000});
  p.kernels = parse_kernels(cfg.get_strings("kde.kernels", {"gaussian", "epanechnikov"}));
  p.bandwidth = cfg.get("kde.bandwidth", "silverman");
  p.fixed_h = cfg.get_double("kde.h", 0.3);
  p.lscv_grid = log_spaced(cfg.get_double("kde.lscv_min", 0.05),
                           cfg.get_double("kde.lscv_max", 1.0), cfg.get_size("kde.lscv_count", 40));
  p.eval = {cfg.get_double("kde.lo", -8.0), cfg.get_double("kde.hi", 8.0),
            cfg.get_size("kde.points", 1601)};
  p.histogram = cfg.get_bool("kde.histogram", false);
  p.reps = choose_reps(opt, 200, 1000);
  p.seed = opt.seed;
  p.workers = opt.workers;

  ExperimentResult res;
  res.name = "table_s2";
  res.table.columns = {"n", "method", "avg_bandwidth", "mise"};
  for (const auto& r : kde_study(p)) {
    res.table.add({fmt(r.n), r.method, fmt(r.avg_h), fmt(r.mise)});
  }
  res.summary = {{"state", p.state.tag()},
                 {"setting", {{"mu", p.setting.mu}, {"nu", p.setting.nu}}},
                 {"bandwidth", p.bandwidth},
                 {"reps", p.reps}};
  return res;
}

ExperimentResult run_table_s3(const Config& cfg) {
  const auto opt = run_options(cfg);
  KcfeStudyPlan p;
  p.state = config_state(cfg);
  p.setting = config_setting(cfg);
  p.ns = cfg.get_sizes("tables.n", {500, 1000, 2000});
  p.noise = config_noise(cfg);
  p.kernel = parse_kernel(cfg.get("kcfe.kernel", "gaussian"));
  p.reps = choose_reps(opt, 500, 1000);
  p.seed = opt.seed;
  p.workers = opt.workers;

  ExperimentResult res;
  res.name = "table_s3";
  res.table.columns = {"n", "type", "avg_bandwidth", "mse"};
  for (const auto& r : kcfe_study(p)) {
    res.table.add({fmt(r.n), r.type, fmt(r.avg_h), fmt(r.mse)});
  }
  res.summary = {{"state", p.state.tag()},
                 {"setting", {{"mu", p.setting.mu}, {"nu", p.setting.nu}}},
                 {"noise", p.noise.tag()},
                 {"reps", p.reps}};
  return res;
}

ExperimentResult run_table_s4(const Config& cfg) {
  const auto opt = run_options(cfg);
  ExperimentPlan base = base_plan(cfg, opt);
  base.n = cfg.get_size("tables.n_default", 500);
  base.mu_max = cfg.get_double("tables.mu_max", 8.0);
  base.n_mu = cfg.get_size("tables.n_mu", 160);
  base.n_nu = cfg.get_size("tables.n_nu", 40);
  base.y = config_y(cfg, "tables", 17);
  base.reps = choose_reps(opt, 20, 1000);
  base.tail = resolve_tail(cfg, "tables.tail", base.state);

  const auto n_values = cfg.get_sizes("tables.n_values", {500, 1000, 2000});
  const auto mu_values = cfg.get_doubles("tables.mu_max_values", {4.0, 6.0, 8.0});
  const auto nmu_values = cfg.get_sizes("tables.n_mu_values", {40, 80, 160});

  std::map<std::tuple<std::size_t, double, std::size_t>, std::vector<KqseRow>> cache;
  auto run = [&](ExperimentPlan p) {
    p.nu_max = p.mu_max;
    const auto key = std::make_tuple(p.n, p.mu_max, p.n_mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, kqse_study(p)).first;
    return std::make_pair(p, it->second);
  };

  ExperimentResult res;
  res.name = "table_s4";
  res.table.columns = {"parameter", "value", "T", "type", "linf", "overlap_mse", "d2"};
  auto emit = [&](const std::string& param, const std::string& value, const ExperimentPlan& p,
                  const std::vector<KqseRow>& rows) {
    for (const auto& r : rows) {
      res.table.add({param, value, fmt(p.t_munu()), r.type, fmt(r.linf), fmt(r.overlap_mse),
                     fmt(r.d2)});
    }
  };
  for (auto n : n_values) {
    ExperimentPlan p = base;
    p.n = n;
    const auto [q, rows] = run(p);
    emit("n", fmt(n), q, rows);
  }
  for (auto m : mu_values) {
    ExperimentPlan p = base;
    p.mu_max = m;
    const auto [q, rows] = run(p);
    emit("mu_max", fmt(m), q, rows);
  }
  for (auto nm : nmu_values) {
    ExperimentPlan p = base;
    p.n_mu = nm;
    const auto [q, rows] = run(p);
    emit("n_mu", fmt(nm), q, rows);
  }
  res.summary["base_plan"] = plan_json(base);
  return res;
}

ExperimentResult run_slopes(const Config& cfg, const std::string& which) {
  const auto opt = run_options(cfg);
  ExperimentResult res;
  res.name = "slopes_" + which;
  if (which == "kde-mise") {
    KdeStudyPlan p;
    p.state = config_state(cfg);
    p.setting = config_setting(cfg);
    p.ns = cfg.get_sizes("slopes.n", {250, 500, 1000, 2000, 4000});
    p.kernels = {parse_kernel(cfg.get("slopes.kernel", "gaussian"))};
    p.reps = choose_reps(opt, 200, 1000);
    p.seed = opt.seed;
    p.workers = opt.workers;
    std::vector<double> xs;
    std::vector<double> ys;
    res.table.columns = {"n", "mise"};
    for (const auto& r : kde_study(p)) {
      xs.push_back(static_cast<double>(r.n));
      ys.push_back(r.mise);
      res.table.add({fmt(r.n), fmt(r.mise)});
    }
    const auto s = loglog_slope(xs, ys);
    res.summary = {{"slope", s.slope}, {"ci95", {s.ci_low, s.ci_high}}, {"reps", p.reps}};
    return res;
  }
  if (which == "kcfe-mse") {
    KcfeStudyPlan p;
    p.state = config_state(cfg);
    p.setting = config_setting(cfg);
    p.ns = cfg.get_sizes("slopes.n", {250, 500, 1000, 2000, 4000});
    p.noise = config_noise(cfg);
    p.reps = choose_reps(opt, 500, 1000);
    p.seed = opt.seed;
    p.workers = opt.workers;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
    res.table.columns = {"n", "type", "mse"};
    for (const auto& r : kcfe_study(p)) {
      series[r.type].first.push_back(static_cast<double>(r.n));
      series[r.type].second.push_back(r.mse);
      res.table.add({fmt(r.n), r.type, fmt(r.mse)});
    }
    for (const auto& type : {"noiseless", "corrected"}) {
      const auto s = loglog_slope(series[type].first, series[type].second);
      res.summary[type] = {{"slope", s.slope}, {"ci95", {s.ci_low, s.ci_high}}};
    }
    res.summary["reps"] = p.reps;
    return res;
  }
  if (which == "kqse-end2end") {
    ExperimentPlan base = base_plan(cfg, opt);
    base.mu_max = cfg.get_double("table1.mu_max", 6.0);
    base.nu_max = base.mu_max;
    base.y = config_y(cfg, "table1", 17);
    base.reps = choose_reps(opt, 50, 1000);
    base.tail = resolve_tail(cfg, "table1.tail", base.state);
    const auto sizes = cfg.get_strings("table1.sizes", {"415x36", "531x38", "755x40"});
    std::vector<double> ts;
    std::vector<double> linf;
    std::vector<double> mse;
    res.table.columns = {"T", "linf", "overlap_mse"};
    for (const auto& s : sizes) {
      ExperimentPlan p = base;
      std::tie(p.n, p.n_mu) = parse_size_pair(s);
      p.n_nu = p.n_mu;
      const auto rows = kqse_study(p);
      ts.push_back(static_cast<double>(p.t_munu()));
      linf.push_back(rows[2].linf);
      mse.push_back(rows[2].overlap_mse);
      res.table.add({fmt(p.t_munu()), fmt(rows[2].linf), fmt(rows[2].overlap_mse)});
    }
    const auto a = loglog_slope(ts, linf);
    const auto b = loglog_slope(ts, mse);
    res.summary = {{"linf", {{"slope", a.slope}, {"ci95", {a.ci_low, a.ci_high}}}},
                   {"overlap_mse", {{"slope", b.slope}, {"ci95", {b.ci_low, b.ci_high}}}},
                   {"reps", base.reps},
                   {"type", "corrected"}};
    return res;
  }
  throw ConfigError("unknown slope study '" + which +
                    "' (expected kde-mise, kcfe-mse or kqse-end2end)");
}

ExperimentResult run_bounds(const Config& cfg) {
  const auto opt = run_options(cfg);
  BoundsPlan p;
  p.state = config_state(cfg);
  p.ns = cfg.get_sizes("bounds.n", {100, 200, 500, 1000, 2000});
  p.mu_max = cfg.get_double("bounds.mu_max", 6.0);
  p.n_mu = cfg.get_size("bounds.n_mu", 50);
  p.y = config_y(cfg, "bounds", 9);
  p.reps = choose_reps(opt, 30, 1000);
  p.seed = opt.seed;
  p.workers = opt.workers;
  ExperimentResult res;
  res.name = "bounds";
  res.table.columns = {"n",           "T",         "eps_k2",      "estimation_bound", "ratio_k",
                       "sup_error",   "total_bound", "ratio_total", "tau"};
  for (const auto& r : bounds_study(p)) {
    res.table.add({fmt(r.n), fmt(r.t), fmt(r.eps_k2), fmt(r.estimation),
                   fmt(r.estimation / r.eps_k2), fmt(r.sup_error), fmt(r.total),
                   fmt(r.total / r.sup_error), fmt(r.tau)});
  }
  res.summary = {{"state", p.state.tag()}, {"mu_max", p.mu_max}, {"n_mu", p.n_mu},
                 {"reps", p.reps}};
  return res;
}

}  // namespace kqse::harness
