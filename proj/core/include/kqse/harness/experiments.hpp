#pragma once

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "kqse/harness/config.hpp"
#include "kqse/kcfe.hpp"
#include "kqse/kde.hpp"
#include "kqse/reconstruction.hpp"
#include "kqse/reference_states.hpp"
#include "kqse/sampling.hpp"

namespace kqse::harness {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

// One end-to-end reconstruction setup. The density kernel uses the mu lattice
// mu_k = k dmu - mu_max against every nu = y - y'; the overlap uses the
// n_mu x n_nu lattice on [-mu_max, mu_max) x [-nu_max, nu_max).
struct ExperimentPlan {
  ReferenceState state = ReferenceState::cat({1.0, 0.5});
  NoiseModel noise;
  std::size_t n = 415;
  std::size_t n_mu = 36;
  std::size_t n_nu = 36;
  double mu_max = 6.0;
  double nu_max = 6.0;
  UniformGrid y{-4.0, 4.0, 17};
  std::size_t reps = 50;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
  KernelKind kernel = KernelKind::GaussianStd;
  bool tail = false;

  std::size_t t_mu() const { return n * n_mu; }
  std::size_t t_munu() const { return n * n_mu * n_nu; }
  ReconstructionGrid recon_grid() const { return {y, mu_max, n_mu}; }

  // mu_max = nu_max = log n and N_mu = N_nu = round(mu_max log n).
  static ExperimentPlan with_defaults(std::size_t n);
};

// Estimates of phi(t) for the same X draws: plain, with noise added, and
// with noise added then deconvolved.
struct PairedCF {
  cplx noiseless;
  cplx noisy;
  cplx corrected;
  double h_noiseless = 0.0;
  double h_noisy = 0.0;
  double h_corrected = 0.0;
};

// Scratch buffers are resized as needed.
PairedCF paired_cf(const InverseCdfTable& sampler, const NoiseModel& noise, KernelKind kernel,
                   std::size_t n, std::uint64_t signal_seed, std::uint64_t noise_seed, double t,
                   std::vector<double>& x, std::vector<double>& z);

inline const std::vector<std::string> kDataTypes = {"noiseless", "noisy", "corrected"};

struct KqseRow {
  std::string type;
  double linf = 0.0;         // max over (y, y') of the mean |rho_hat - rho|^2
  double overlap_mse = 0.0;  // mean (tr(rho rho_hat) - tr(rho^2))^2
  double d2 = 0.0;           // mean squared pure-state trace distance
  double avg_h = 0.0;
};

std::vector<KqseRow> kqse_study(const ExperimentPlan& plan);

struct KdeStudyPlan {
  ReferenceState state = ReferenceState::cat({1.0, 0.5});
  PhaseSetting setting{0.8, 1.2};
  std::vector<std::size_t> ns{500, 1000, 2000};
  std::vector<KernelKind> kernels{KernelKind::GaussianStd, KernelKind::Epanechnikov};
  std::string bandwidth = "silverman";  // silverman | lscv | fixed
  double fixed_h = 0.3;
  std::vector<double> lscv_grid = log_spaced(0.05, 1.0, 40);
  UniformGrid eval{-8.0, 8.0, 1601};
  bool histogram = false;
  std::size_t reps = 200;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
};

struct KdeRow {
  std::size_t n = 0;
  std::string method;
  double avg_h = 0.0;
  double mise = 0.0;
};

std::vector<KdeRow> kde_study(const KdeStudyPlan& plan);

struct KcfeStudyPlan {
  ReferenceState state = ReferenceState::cat({1.0, 0.5});
  PhaseSetting setting{0.8, 1.2};
  std::vector<std::size_t> ns{500, 1000, 2000};
  NoiseModel noise;
  KernelKind kernel = KernelKind::GaussianStd;
  double t = 1.0;
  std::size_t reps = 500;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
};

struct KcfeRow {
  std::size_t n = 0;
  std::string type;
  double avg_h = 0.0;
  double mse = 0.0;
};

std::vector<KcfeRow> kcfe_study(const KcfeStudyPlan& plan);

struct BoundsPlan {
  ReferenceState state = ReferenceState::cat({1.0, 0.5});
  std::vector<std::size_t> ns{100, 200, 500, 1000, 2000};
  double mu_max = 6.0;
  std::size_t n_mu = 50;
  UniformGrid y{-4.0, 4.0, 9};
  std::size_t reps = 30;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
};

struct BoundsRow {
  std::size_t n = 0;
  std::size_t t = 0;           // n * N_mu
  double eps_k2 = 0.0;         // max mean |rho_hat - rho_lattice|^2
  double estimation = 0.0;     // estimation_bound
  double sup_error = 0.0;      // max mean |rho_hat - rho|^2
  double total = 0.0;          // total_bound
  double tau = 0.0;
};

std::vector<BoundsRow> bounds_study(const BoundsPlan& plan);

struct SlopeResult {
  std::vector<double> x;
  std::vector<double> y;
  double slope = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

SlopeResult loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Tabular output plus a JSON summary; the CLI writes name.csv and name.json.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string csv() const;
};

struct ExperimentResult {
  std::string name;
  ResultTable table;
  nlohmann::json summary = nlohmann::json::object();
};

// Config-driven runners used by the CLI.
ExperimentResult run_table1(const Config& cfg);
ExperimentResult run_table_s2(const Config& cfg);
ExperimentResult run_table_s3(const Config& cfg);
ExperimentResult run_table_s4(const Config& cfg);
ExperimentResult run_slopes(const Config& cfg, const std::string& which);
ExperimentResult run_bounds(const Config& cfg);
ExperimentResult emit_plotdata(const Config& cfg, const std::string& figure);

// Common [run] keys.
struct RunOptions {
  std::uint64_t seed = kDefaultSeed;
  std::size_t reps = 0;  // 0: experiment default
  unsigned workers = 0;
  bool full = false;
};
RunOptions run_options(const Config& cfg);
// reps from --reps, else full_default with --full, else fallback.
std::size_t choose_reps(const RunOptions& opt, std::size_t fallback, std::size_t full_default);

ReferenceState config_state(const Config& cfg);
NoiseModel config_noise(const Config& cfg);
PhaseSetting config_setting(const Config& cfg);

}  // namespace kqse::harness
