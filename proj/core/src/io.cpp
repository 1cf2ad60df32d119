#include "kqse/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "kqse/errors.hpp"

namespace kqse {
namespace {

using nlohmann::json;

json config_json(const ConfigEcho& config) {
  json j = json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  return in;
}

json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

json setting_json(const PhaseSetting& s) { return {{"mu", s.mu}, {"nu", s.nu}}; }

json axis_json(const Axis& a) {
  return {{"start", a.start}, {"step", a.step}, {"count", a.count}};
}

Axis axis_from(const json& j) {
  return {j.at("start").get<double>(), j.at("step").get<double>(),
          j.at("count").get<std::size_t>()};
}

std::string seed_text(std::uint64_t s) { return std::to_string(s); }

std::uint64_t seed_from(const json& j) {
  if (j.is_string()) return std::stoull(j.get<std::string>());
  return j.get<std::uint64_t>();
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& text) {
  std::size_t b = text.find_first_not_of(" \t\r");
  std::size_t e = text.find_last_not_of(" \t\r");
  if (b == std::string::npos) throw ConfigError("empty numeric field");
  const char* first = text.data() + b;
  const char* last = text.data() + e + 1;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("cannot parse number '" + text + "'");
  }
  return v;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

void write_sample_batch(const SampleBatch& b, const std::filesystem::path& csv,
                        const ConfigEcho& config) {
  {
    auto out = open_out(csv);
    out << "x\n";
    for (double v : b.values) out << format_double(v) << '\n';
  }
  json j;
  j["kind"] = "sample_batch";
  j["n"] = b.values.size();
  j["setting"] = setting_json(b.setting);
  j["seed"] = seed_text(b.seed);
  j["state"] = b.state_tag;
  j["noise"] = b.noise_tag ? json(*b.noise_tag) : json(nullptr);
  j["noise_seed"] = seed_text(b.noise_seed);
  j["config"] = config_json(config);
  write_json(sidecar_path(csv), j);
}

std::vector<double> read_sample_values(const std::filesystem::path& csv) {
  auto in = open_in(csv);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (first) {
      first = false;
      if (line.find_first_of("0123456789") == std::string::npos || line.rfind("x", 0) == 0) {
        continue;
      }
    }
    values.push_back(parse_double(split(line, ',').front()));
  }
  return values;
}

SampleBatch read_sample_batch(const std::filesystem::path& csv) {
  SampleBatch b;
  b.values = read_sample_values(csv);
  const auto side = sidecar_path(csv);
  if (!std::filesystem::exists(side)) return b;
  const json j = read_json(side);
  try {
    b.setting = {j.at("setting").at("mu").get<double>(), j.at("setting").at("nu").get<double>()};
    b.seed = seed_from(j.at("seed"));
    b.state_tag = j.at("state").get<std::string>();
    if (!j.at("noise").is_null()) b.noise_tag = j.at("noise").get<std::string>();
    b.noise_seed = seed_from(j.at("noise_seed"));
    if (j.at("n").get<std::size_t>() != b.values.size()) {
      throw ConfigError("sample count in " + csv.string() + " does not match its sidecar");
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed sample sidecar " + side.string() + ": " + e.what());
  }
  return b;
}

void write_density_estimate(const DensityEstimate& d, const std::filesystem::path& csv,
                            const ConfigEcho& config) {
  {
    auto out = open_out(csv);
    out << "x,density\n";
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      out << format_double(d.grid.at(i)) << ',' << format_double(d.values[i]) << '\n';
    }
  }
  json j;
  j["kind"] = "density_estimate";
  j["h"] = d.h;
  j["method"] = d.method;
  j["n"] = d.n;
  j["seed"] = seed_text(d.seed);
  j["grid"] = {{"lo", d.grid.lo}, {"hi", d.grid.hi}, {"points", d.grid.points}};
  j["config"] = config_json(config);
  write_json(sidecar_path(csv), j);
}

void write_cf_grid(const CFGrid& g, const std::filesystem::path& csv, const ConfigEcho& config) {
  {
    auto out = open_out(csv);
    out << "mu,nu,re,im,h,n\n";
    for (std::size_t i = 0; i < g.mu.count; ++i) {
      for (std::size_t j = 0; j < g.nu.count; ++j) {
        const std::size_t idx = g.index(i, j);
        out << format_double(g.mu.at(i)) << ',' << format_double(g.nu.at(j)) << ','
            << format_double(g.values[idx].real()) << ',' << format_double(g.values[idx].imag())
            << ',' << format_double(g.h.empty() ? 0.0 : g.h[idx]) << ','
            << (g.n.empty() ? 0 : g.n[idx]) << '\n';
      }
    }
  }
  json j;
  j["kind"] = "cf_grid";
  j["t"] = g.t;
  j["mu_axis"] = axis_json(g.mu);
  j["nu_axis"] = axis_json(g.nu);
  j["source"] = g.source;
  j["state"] = g.state_tag;
  j["kernel"] = g.kernel;
  j["deconvolved"] = g.deconvolved;
  if (g.noise) {
    j["noise"] = {{"kappa", g.noise->kappa}, {"mean", g.noise->mean},
                  {"variance", g.noise->variance}};
  } else {
    j["noise"] = nullptr;
  }
  json seeds = json::array();
  for (auto s : g.seeds) seeds.push_back(seed_text(s));
  j["seeds"] = seeds;
  j["config"] = config_json(config);
  write_json(sidecar_path(csv), j);
}

CFGrid read_cf_grid(const std::filesystem::path& csv) {
  const json j = read_json(sidecar_path(csv));
  CFGrid g;
  try {
    g.t = j.at("t").get<double>();
    g.mu = axis_from(j.at("mu_axis"));
    g.nu = axis_from(j.at("nu_axis"));
    g.source = j.at("source").get<std::string>();
    g.state_tag = j.at("state").get<std::string>();
    g.kernel = j.at("kernel").get<std::string>();
    g.deconvolved = j.at("deconvolved").get<bool>();
    if (!j.at("noise").is_null()) {
      const auto& n = j.at("noise");
      g.noise = NoiseModel{n.at("kappa").get<double>(), n.at("mean").get<double>(),
                           n.at("variance").get<double>()};
    }
    for (const auto& s : j.at("seeds")) g.seeds.push_back(seed_from(s));
  } catch (const json::exception& e) {
    throw ConfigError("malformed CF grid sidecar: " + std::string(e.what()));
  }
  g.values.assign(g.size(), cplx(0.0, 0.0));
  g.h.assign(g.size(), 0.0);
  g.n.assign(g.size(), 0);
  std::vector<bool> seen(g.size(), false);
  auto in = open_in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw ConfigError("CF grid rows need 6 columns");
    const auto i = g.mu.find(parse_double(f[0]));
    const auto k = g.nu.find(parse_double(f[1]));
    if (!i || !k) throw GridMismatchError("CF grid row off the declared lattice");
    const std::size_t idx = g.index(*i, *k);
    g.values[idx] = {parse_double(f[2]), parse_double(f[3])};
    g.h[idx] = parse_double(f[4]);
    g.n[idx] = static_cast<std::size_t>(parse_double(f[5]));
    seen[idx] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw IncompleteGridError("CF grid file " + csv.string() + " misses lattice nodes");
  }
  return g;
}

void write_density_kernel(const DensityKernelGrid& rho, const std::filesystem::path& csv,
                          const ConfigEcho& config) {
  {
    auto out = open_out(csv);
    out << "y,yp,re,im\n";
    for (Eigen::Index i = 0; i < rho.values.rows(); ++i) {
      for (Eigen::Index k = 0; k < rho.values.cols(); ++k) {
        const cplx v = rho.values(i, k);
        out << format_double(rho.y.at(static_cast<std::size_t>(i))) << ','
            << format_double(rho.y.at(static_cast<std::size_t>(k))) << ','
            << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
      }
    }
  }
  json j;
  j["kind"] = "density_kernel";
  j["grid"] = {{"lo", rho.y.lo}, {"hi", rho.y.hi}, {"points", rho.y.points}};
  j["tail_corrected"] = rho.tail_corrected;
  j["hermiticity_violation"] = rho.hermiticity_violation();
  j["config"] = config_json(config);
  write_json(sidecar_path(csv), j);
}

std::string validation_report_json(const ValidationReport& r, const ConfigEcho& config) {
  json j;
  j["kind"] = "validation_report";
  j["passed"] = r.passed();
  j["hermitian"] = r.hermitian;
  j["normalized"] = r.normalized;
  j["positive"] = r.positive;
  j["normalization_checked"] = r.normalization_checked;
  j["violations"] = {{"hermiticity", r.hermiticity_violation},
                     {"normalization", r.normalization_violation},
                     {"positivity", r.positivity_violation}};
  j["tolerances"] = {{"hermiticity", r.hermiticity_tolerance},
                     {"normalization", r.normalization_tolerance},
                     {"positivity", r.positivity_tolerance}};
  j["probe_overlaps"] = r.probe_overlaps;
  j["notes"] = r.notes;
  j["config"] = config_json(config);
  return j.dump(2);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace kqse
