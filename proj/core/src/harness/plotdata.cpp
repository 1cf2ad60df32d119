#include <cmath>

#include "kqse/errors.hpp"
#include "kqse/harness/experiments.hpp"
#include "kqse/io.hpp"
#include "kqse/parallel.hpp"
#include "kqse/seeding.hpp"

namespace kqse::harness {

namespace {

std::string fmt(double v) { return format_double(v); }

ExperimentResult tomogram_kde(const Config& cfg, const RunOptions& opt) {
  const auto state = config_state(cfg);
  const auto s = config_setting(cfg);
  const std::size_t n = cfg.get_size("plot.n", 500);
  const UniformGrid grid{cfg.get_double("plot.lo", -6.0), cfg.get_double("plot.hi", 6.0),
                         cfg.get_size("plot.points", 401)};
  const auto sampler = build_sampler(state, s);
  const auto batch = draw(sampler, n, derive_seed(opt.seed, 0, 0, Stream::Signal));
  const auto truth = tomogram_grid(state, s, grid.lo, grid.step(), grid.points);
  const double hg = silverman_bandwidth(batch.values);
  const auto g = kde_evaluate(batch.values, KernelKind::GaussianStd, hg, grid);
  const auto e = kde_evaluate(batch.values, KernelKind::Epanechnikov, hg, grid);
  const auto hist = histogram_on_grid(fd_histogram(batch.values), grid);

  ExperimentResult res;
  res.name = "plot_tomogram-kde";
  res.table.columns = {"x", "truth", "kde_gauss", "kde_epan", "hist"};
  for (std::size_t i = 0; i < grid.points; ++i) {
    res.table.add({fmt(grid.at(i)), fmt(truth[i]), fmt(g.values[i]), fmt(e.values[i]),
                   fmt(hist[i])});
  }
  res.summary = {{"state", state.tag()}, {"n", n}, {"h", hg}};
  return res;
}

ExperimentResult cf_corrected(const Config& cfg, const RunOptions& opt) {
  const auto state = config_state(cfg);
  const auto noise = config_noise(cfg);
  const double nu = cfg.get_double("plot.nu", 1.2);
  const std::size_t n = cfg.get_size("plot.n", 1000);
  const UniformGrid mus{cfg.get_double("plot.mu_min", 0.0), cfg.get_double("plot.mu_max", 8.0),
                        cfg.get_size("plot.n_mu", 160)};
  std::vector<PairedCF> out(mus.points);
  parallel_for(mus.points, opt.workers, [&](std::size_t i) {
    const auto sampler = build_sampler(state, PhaseSetting{mus.at(i), nu});
    std::vector<double> x;
    std::vector<double> z;
    out[i] = paired_cf(sampler, noise, KernelKind::GaussianStd, n,
                       derive_seed(opt.seed, i, 0, Stream::Signal),
                       derive_seed(opt.seed, i, 0, Stream::Noise), 1.0, x, z);
  });
  ExperimentResult res;
  res.name = "plot_cf-corrected";
  res.table.columns = {"mu",       "truth_re",     "truth_im",    "noisy_re",
                       "noisy_im", "corrected_re", "corrected_im"};
  for (std::size_t i = 0; i < mus.points; ++i) {
    const cplx tr = cf(state, 1.0, PhaseSetting{mus.at(i), nu});
    res.table.add({fmt(mus.at(i)), fmt(tr.real()), fmt(tr.imag()), fmt(out[i].noisy.real()),
                   fmt(out[i].noisy.imag()), fmt(out[i].corrected.real()),
                   fmt(out[i].corrected.imag())});
  }
  res.summary = {{"state", state.tag()}, {"noise", noise.tag()}, {"n", n}, {"nu", nu}};
  return res;
}

// One corrected reconstruction on the density-kernel lattice.
CFGrid corrected_grid(const ReferenceState& state, const NoiseModel& noise, const Axis& mu,
                      const Axis& nu, std::size_t n, const RunOptions& opt) {
  CFGrid g;
  g.mu = mu;
  g.nu = nu;
  g.values.assign(mu.count * nu.count, cplx{});
  g.h.assign(g.values.size(), 0.0);
  g.n.assign(g.values.size(), n);
  g.source = "sampled";
  g.noise = noise;
  g.deconvolved = true;
  g.state_tag = state.tag();
  parallel_for(g.values.size(), opt.workers, [&](std::size_t k) {
    const PhaseSetting s{mu.at(k / nu.count), nu.at(k % nu.count)};
    const auto sampler = build_sampler(state, s);
    std::vector<double> x;
    std::vector<double> z;
    const auto p = paired_cf(sampler, noise, KernelKind::GaussianStd, n,
                             derive_seed(opt.seed, k, 0, Stream::Signal),
                             derive_seed(opt.seed, k, 0, Stream::Noise), 1.0, x, z);
    g.values[k] = p.corrected;
    g.h[k] = p.h_corrected;
  });
  return g;
}

ExperimentResult rho_heatmap(const Config& cfg, const RunOptions& opt) {
  const auto state = config_state(cfg);
  const auto noise = config_noise(cfg);
  const ReconstructionGrid recon{UniformGrid{cfg.get_double("plot.y_min", -4.0),
                                             cfg.get_double("plot.y_max", 4.0),
                                             cfg.get_size("plot.y_points", 17)},
                                 cfg.get_double("plot.mu_max", 6.0),
                                 cfg.get_size("plot.n_mu", 36)};
  const std::size_t n = cfg.get_size("plot.n", 415);
  const auto grid = corrected_grid(state, noise, recon.mu_axis(), recon.nu_axis(), n, opt);
  const auto est = reconstruct_rho(grid, recon, state.is_ground_state());
  const auto truth = analytic_density_grid(state, recon.y);

  ExperimentResult res;
  res.name = "plot_rho-heatmap";
  res.table.columns = {"y", "yp", "diagonal", "truth_re", "truth_im", "est_re", "est_im"};
  for (std::size_t i = 0; i < recon.y.points; ++i) {
    for (std::size_t j = 0; j < recon.y.points; ++j) {
      const auto a = truth.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const auto b = est.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      res.table.add({fmt(recon.y.at(i)), fmt(recon.y.at(j)), i == j ? "1" : "0", fmt(a.real()), fmt(a.imag()),
                     fmt(b.real()), fmt(b.imag())});
    }
  }
  res.summary = {{"state", state.tag()}, {"n", n}, {"sup_error", sup_error(est, truth.values)}};
  return res;
}

ExperimentResult wigner(const Config& cfg, const RunOptions& opt) {
  const auto state = config_state(cfg);
  const auto noise = config_noise(cfg);
  const double mmax = cfg.get_double("plot.mu_max", 6.0);
  const std::size_t nodes = cfg.get_size("plot.n_mu", 36);
  const Axis mu = Axis::dft(mmax, nodes);
  const Axis nu = Axis::dft(mmax, nodes);
  const std::size_t n = cfg.get_size("plot.n", 415);
  const UniformGrid q{cfg.get_double("plot.q_min", -4.0), cfg.get_double("plot.q_max", 4.0),
                      cfg.get_size("plot.q_points", 41)};
  const auto grid = corrected_grid(state, noise, mu, nu, n, opt);
  const auto phi = cf_function(state);

  ExperimentResult res;
  res.name = "plot_wigner";
  res.table.columns = {"q", "p", "truth", "est"};
  for (std::size_t i = 0; i < q.points; ++i) {
    for (std::size_t j = 0; j < q.points; ++j) {
      res.table.add({fmt(q.at(i)), fmt(q.at(j)), fmt(wigner_from_cf(phi, mu, nu, q.at(i), q.at(j))),
                     fmt(wigner_from_cf(grid, q.at(i), q.at(j)))});
    }
  }
  res.summary = {{"state", state.tag()}, {"n", n}, {"nodes", nodes}};
  return res;
}

}  // namespace

ExperimentResult emit_plotdata(const Config& cfg, const std::string& figure) {
  const auto opt = run_options(cfg);
  if (figure == "tomogram-kde") return tomogram_kde(cfg, opt);
  if (figure == "cf-corrected") return cf_corrected(cfg, opt);
  if (figure == "rho-heatmap") return rho_heatmap(cfg, opt);
  if (figure == "wigner") return wigner(cfg, opt);
  throw ConfigError("unknown figure '" + figure +
                    "' (expected tomogram-kde, cf-corrected, rho-heatmap or wigner)");
}

}  // namespace kqse::harness
