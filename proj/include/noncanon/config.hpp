// config.hpp - run configuration for the batch front end.
//
// Line-oriented `key = value` with `[section]` headers and '#' comments; keys
// are addressed as "section.key". Lists are comma separated.

#pragma once

#include "noncanon/multi.hpp"
#include "noncanon/perturbation.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/program_options/parsers.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>

namespace noncanon {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string out_dir = "noncanon_out";

  // [modes] cubic lattice, first `count` modes (0 = all)
  double box_length = 2.0 * pi;
  int max_index = 1;
  double volume = 1.0;
  int mode_count = 0;

  // [shell] dense shell for emission rates
  double shell_length = 80.0 * pi;
  double shell_omega_min = 0.9;
  double shell_omega_max = 1.1;
  double shell_volume = 1.0;

  // [truncation]
  std::optional<int> n_max;
  int max_sector = 3;

  // [weights]
  std::string weights = "inverse-sqrt";
  std::vector<double> weight_values;

  // [vacuum]
  std::string vacuum_profile = "uniform";
  double vacuum_center = 1.0;
  double vacuum_width = 1.0;
  std::vector<double> phi_re, phi_im;
  std::vector<double> p{1.0};

  // [atom]
  std::string fixture = "three-level";
  double omega0 = 1.0;
  double dipole = 1.0;
  std::vector<double> u_re{0.6, 0.0, 0.64};
  std::vector<double> u_im{0.0, 0.48, 0.0};

  // [emission] spectral profile F
  std::string profile = "gaussian";
  double profile_center = 1.0;
  double profile_width = 0.1;
  double profile_offset = 0.25;
  double profile_slope = 0.0;

  // [fields]
  int samples = 3;
  double alpha_max = 1.0;

  // [thermal]
  double beta = 1.0;
  std::vector<double> mu_over_kT{0.0, -0.8, -3.0, -10.0};
  double grid_min = 0.01;
  double grid_max = 10.0;
  int grid_points = 200;
  double visibility = 0.01;

  // [tolerances]
  double tol = 1e-12;
  double rel_tol = 1e-12;
  double eta = 1e-6;
  double duration = 9.0;
  double ratio_tol = 0.02;

  ExtensionWeights extension_weights() const {
    if (weights == "inverse-sqrt") return ExtensionWeights::inverse_sqrt(max_sector);
    if (weights == "ones") return ExtensionWeights::ones(max_sector);
    return ExtensionWeights::explicit_values(weight_values);
  }

  TwoLevelAtom two_level_atom() const {
    return {omega0, dipole, CVec3(cplx(u_re[0], u_im[0]), cplx(u_re[1], u_im[1]), cplx(u_re[2], u_im[2]))};
  }

  ModeSet lattice_modes() const {
    const ModeSet all = make_cubic_modeset(box_length, max_index, volume);
    return mode_count == 0 ? all : all.prefix(static_cast<std::size_t>(mode_count));
  }

  ModeSet shell_modes() const { return make_shell_modeset(shell_length, shell_omega_min, shell_omega_max, shell_volume); }

  std::function<double(double)> profile_function() const {
    const double c = profile_center, w = profile_width, a = profile_offset, s = profile_slope;
    if (profile == "flat") return [](double) { return 1.0; };
    if (profile == "gaussian") return [c, w](double x) { return std::exp(-(x - c) * (x - c) / (2.0 * w * w)); };
    return [a, s, c](double x) { return std::max(0.0, a + s * (x - c)); };
  }

  VacuumSpec vacuum(const ModeSet& ms) const {
    VacuumSpec v;
    v.p = p;
    if (vacuum_profile == "explicit") {
      for (std::size_t i = 0; i < phi_re.size(); ++i) v.phi.emplace_back(phi_re[i], phi_im.empty() ? 0.0 : phi_im[i]);
      return v;
    }
    double norm = 0.0;
    for (std::size_t m = 0; m < ms.size(); ++m) {
      const double d = (ms[m].omega - vacuum_center) / vacuum_width;
      v.phi.emplace_back(vacuum_profile == "uniform" ? 1.0 : std::exp(-0.25 * d * d));
      norm += std::norm(v.phi.back());
    }
    for (auto& f : v.phi) f /= std::sqrt(norm);
    return v;
  }
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

inline double parse_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto t = boost::algorithm::trim_copy(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) config_fail(key, "not a number: '" + t + "'");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& s) {
  long long v = 0;
  const auto t = boost::algorithm::trim_copy(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) config_fail(key, "not an integer: '" + t + "'");
  return v;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, s, boost::algorithm::is_any_of(","));
  std::vector<double> out;
  for (const auto& part : parts) out.push_back(parse_double(key, part));
  return out;
}

inline void expect_one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  std::string joined;
  for (const char* a : allowed) {
    if (v == a) return;
    joined += std::string(joined.empty() ? "" : ", ") + a;
  }
  config_fail(key, "'" + v + "' is not one of " + joined);
}

}  // namespace detail

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"algebra-check", "fields-check", "emission", "two-photon", "blackbody"};
  return names;
}

/// Checks every field against the invariants of the module that consumes it.
inline void validate(const RunConfig& c) {
  using detail::config_fail;
  if (c.experiment.empty()) config_fail("experiment", "required");
  if (std::find(experiment_names().begin(), experiment_names().end(), c.experiment) == experiment_names().end())
    config_fail("experiment", "unknown experiment '" + c.experiment + "'");
  const bool thermal = c.experiment == "blackbody";
  if (!thermal && !c.n_max) config_fail("truncation.n_max", "required for experiment '" + c.experiment + "'");
  if (c.n_max && *c.n_max < 1) config_fail("truncation.n_max", "must be >= 1");
  if (c.max_sector < 1) config_fail("truncation.M", "must be >= 1");
  if (!(c.box_length > 0.0)) config_fail("modes.L", "must be > 0");
  if (c.max_index < 1) config_fail("modes.max_index", "must be >= 1");
  if (!(c.volume > 0.0)) config_fail("modes.V", "must be > 0");
  if (c.mode_count < 0) config_fail("modes.count", "must be >= 0");
  if (!thermal) {
    const std::size_t available = make_cubic_modeset(c.box_length, c.max_index, c.volume).size();
    if (static_cast<std::size_t>(c.mode_count) > available)
      config_fail("modes.count", "exceeds the " + std::to_string(available) + " lattice modes");
  }
  if (!(c.shell_length > 0.0)) config_fail("shell.L", "must be > 0");
  if (!(c.shell_omega_min > 0.0) || !(c.shell_omega_max > c.shell_omega_min))
    config_fail("shell.omega_max", "need 0 < omega_min < omega_max");
  if (!(c.shell_volume > 0.0)) config_fail("shell.V", "must be > 0");

  if (c.weights == "explicit") {
    if (static_cast<int>(c.weight_values.size()) < c.max_sector)
      config_fail("weights.values", "need one c_k per sector up to M");
    for (double x : c.weight_values)
      if (!(x > 0.0)) config_fail("weights.values", "c_k must be > 0");
  }

  if (c.vacuum_profile == "explicit" && (c.phi_re.empty() || (!c.phi_im.empty() && c.phi_im.size() != c.phi_re.size())))
    config_fail("vacuum.phi_im", "phi_re must be given and phi_im must match its length");
  if (!(c.vacuum_width > 0.0)) config_fail("vacuum.width", "must be > 0");
  double ps = 0.0;
  for (double q : c.p) {
    if (q < 0.0) config_fail("vacuum.p", "p_k must be >= 0");
    ps += q;
  }
  if (std::abs(ps - 1.0) > 1e-12) config_fail("vacuum.p", "sum p_k must be 1");
  if (static_cast<int>(c.p.size()) > c.max_sector) {
    for (std::size_t k = static_cast<std::size_t>(c.max_sector); k < c.p.size(); ++k)
      if (c.p[k] > 0.0) config_fail("vacuum.p", "support beyond truncation.M");
  }
  if (!thermal) {
    const ModeSet ms = c.lattice_modes();
    const VacuumSpec v = c.vacuum(ms);
    try {
      v.validate(ms.size());
    } catch (const std::invalid_argument& e) {
      config_fail("vacuum.phi_re", e.what());
    }
  }

  try {
    (void)fixture_atom(c.fixture);
  } catch (const std::invalid_argument& e) {
    config_fail("atom.fixture", e.what());
  }
  if (c.u_re.size() != 3 || c.u_im.size() != 3) config_fail("atom.u_re", "u_re and u_im need three components");
  try {
    c.two_level_atom().validate();
  } catch (const std::invalid_argument& e) {
    config_fail("atom.u_re", e.what());
  }
  if (!(c.profile_width > 0.0)) config_fail("emission.width", "must be > 0");
  if (c.profile == "linear" && !(c.profile_offset > 0.0)) config_fail("emission.offset", "F(omega0) must be > 0");

  if (c.samples < 3) config_fail("fields.samples", "need at least 3 sample points");
  if (!(c.alpha_max > 0.0) || c.alpha_max > 1.0) config_fail("fields.alpha_max", "must lie in (0, 1]");
  if (c.experiment == "fields-check" && coherent_tail_bound(c.alpha_max, *c.n_max) >= 1e-8)
    config_fail("truncation.n_max", "too small for coherent states with |alpha| <= fields.alpha_max");
  if (c.experiment == "two-photon" && c.max_sector < 2) config_fail("truncation.M", "two-photon needs M >= 2");

  if (!(c.beta > 0.0)) config_fail("thermal.beta", "must be > 0");
  if (c.mu_over_kT.empty()) config_fail("thermal.mu_over_kT", "at least one value required");
  for (double m : c.mu_over_kT)
    if (!(m <= 0.0)) config_fail("thermal.mu_over_kT", "mu must be <= 0");
  if (!(c.grid_min > 0.0) || !(c.grid_max > c.grid_min)) config_fail("thermal.grid_max", "need 0 < grid_min < grid_max");
  if (c.grid_points < 2) config_fail("thermal.points", "must be >= 2");
  if (!(c.visibility > 0.0)) config_fail("thermal.visibility", "must be > 0");

  if (!(c.tol > 0.0)) config_fail("tolerances.identity", "must be > 0");
  if (!(c.rel_tol > 0.0) || c.rel_tol > 1e-6) config_fail("tolerances.rel_tol", "must lie in (0, 1e-6]");
  if (!(c.eta > 0.0)) config_fail("tolerances.eta", "must be > 0");
  if (!(c.duration > 0.0)) config_fail("tolerances.T", "must be > 0");
  if (!(c.ratio_tol > 0.0)) config_fail("tolerances.ratio", "must be > 0");
}

inline RunConfig parse_config(std::istream& in) {
  namespace po = boost::program_options;
  po::parsed_options parsed(nullptr);
  try {
    parsed = po::parse_config_file(in, po::options_description{}, true);
  } catch (const po::error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  using namespace detail;
  RunConfig c;
  std::set<std::string> seen;
  for (const auto& opt : parsed.options) {
    const std::string& k = opt.string_key;
    const std::string v = opt.value.empty() ? std::string() : boost::algorithm::trim_copy(opt.value.front());
    if (!seen.insert(k).second) config_fail(k, "given more than once");
    auto num = [&] { return parse_double(k, v); };
    auto integer = [&] { return static_cast<int>(parse_integer(k, v)); };
    auto list = [&] { return parse_list(k, v); };

    if (k == "experiment") c.experiment = v;
    else if (k == "seed") {
      const long long s = parse_integer(k, v);
      if (s < 0) config_fail(k, "must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (k == "out") c.out_dir = v;
    else if (k == "modes.L") c.box_length = num();
    else if (k == "modes.max_index") c.max_index = integer();
    else if (k == "modes.V") c.volume = num();
    else if (k == "modes.count") c.mode_count = integer();
    else if (k == "shell.L") c.shell_length = num();
    else if (k == "shell.omega_min") c.shell_omega_min = num();
    else if (k == "shell.omega_max") c.shell_omega_max = num();
    else if (k == "shell.V") c.shell_volume = num();
    else if (k == "truncation.n_max") c.n_max = integer();
    else if (k == "truncation.M") c.max_sector = integer();
    else if (k == "weights.choice") {
      expect_one_of(k, v, {"inverse-sqrt", "ones", "explicit"});
      c.weights = v;
    } else if (k == "weights.values") c.weight_values = list();
    else if (k == "vacuum.profile") {
      expect_one_of(k, v, {"uniform", "gaussian", "explicit"});
      c.vacuum_profile = v;
    } else if (k == "vacuum.center") c.vacuum_center = num();
    else if (k == "vacuum.width") c.vacuum_width = num();
    else if (k == "vacuum.phi_re") c.phi_re = list();
    else if (k == "vacuum.phi_im") c.phi_im = list();
    else if (k == "vacuum.p") c.p = list();
    else if (k == "atom.fixture") c.fixture = v;
    else if (k == "atom.omega0") c.omega0 = num();
    else if (k == "atom.d") c.dipole = num();
    else if (k == "atom.u_re") c.u_re = list();
    else if (k == "atom.u_im") c.u_im = list();
    else if (k == "emission.profile") {
      expect_one_of(k, v, {"flat", "gaussian", "linear"});
      c.profile = v;
    } else if (k == "emission.center") c.profile_center = num();
    else if (k == "emission.width") c.profile_width = num();
    else if (k == "emission.offset") c.profile_offset = num();
    else if (k == "emission.slope") c.profile_slope = num();
    else if (k == "fields.samples") c.samples = integer();
    else if (k == "fields.alpha_max") c.alpha_max = num();
    else if (k == "thermal.beta") c.beta = num();
    else if (k == "thermal.mu_over_kT") c.mu_over_kT = list();
    else if (k == "thermal.grid_min") c.grid_min = num();
    else if (k == "thermal.grid_max") c.grid_max = num();
    else if (k == "thermal.points") c.grid_points = integer();
    else if (k == "thermal.visibility") c.visibility = num();
    else if (k == "tolerances.identity") c.tol = num();
    else if (k == "tolerances.rel_tol") c.rel_tol = num();
    else if (k == "tolerances.eta") c.eta = num();
    else if (k == "tolerances.T") c.duration = num();
    else if (k == "tolerances.ratio") c.ratio_tol = num();
    else config_fail(k, "unknown key");
  }
  validate(c);
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  return parse_config(in);
}

}  // namespace noncanon
