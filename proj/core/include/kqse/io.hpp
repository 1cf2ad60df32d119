#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kqse/kcfe.hpp"
#include "kqse/kde.hpp"
#include "kqse/reconstruction.hpp"
#include "kqse/sampling.hpp"

namespace kqse {

// Resolved configuration echoed into JSON sidecars.
using ConfigEcho = std::map<std::string, std::string>;

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);
double parse_double(const std::string& text);

// foo.csv -> foo.json
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

// CSV with header `x`; the sidecar carries setting, seeds, state and noise tags.
void write_sample_batch(const SampleBatch& b, const std::filesystem::path& csv,
                        const ConfigEcho& config = {});
SampleBatch read_sample_batch(const std::filesystem::path& csv);
// Single-column CSV (header optional) without sidecar.
std::vector<double> read_sample_values(const std::filesystem::path& csv);

// CSV `x,density`; sidecar with h, method, n, seed.
void write_density_estimate(const DensityEstimate& d, const std::filesystem::path& csv,
                            const ConfigEcho& config = {});

// CSV `mu,nu,re,im,h,n`; sidecar with axes, noise model and seeds.
void write_cf_grid(const CFGrid& g, const std::filesystem::path& csv,
                   const ConfigEcho& config = {});
CFGrid read_cf_grid(const std::filesystem::path& csv);

// CSV `y,yp,re,im`.
void write_density_kernel(const DensityKernelGrid& rho, const std::filesystem::path& csv,
                          const ConfigEcho& config = {});

std::string validation_report_json(const ValidationReport& r, const ConfigEcho& config = {});

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kqse
