// blackbody.hpp - two-index (oscillator count m, excitation n) Boltzmann-Gibbs
// statistics with energies E_{m,n} = m hbar omega (n + 1/2) and chemical
// potential mu, the resulting spectral density and its Planck limit.
//
// With r = e^{-beta(hbar omega/2 - mu)} and x_m = e^{-beta m hbar omega}:
//   Z     = sum_m r^m / (1 - x_m)
//   Z nbar = sum_m m r^m x_m / (1 - x_m)^2

#pragma once

#include "noncanon/modes.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cstdint>
#include <optional>

namespace noncanon {

struct ThermalParams {
  double beta = 1.0;
  double mu = 0.0;

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("ThermalParams: beta must be > 0");
    if (!(mu <= 0.0)) throw std::invalid_argument("ThermalParams: mu must be <= 0");
  }
};

inline constexpr long long series_term_cap = 1000000;

struct SeriesValue {
  double value = 0.0;
  long long terms = 0;
};

inline double level_energy(int m, int n, double omega, double hbar = 1.0) { return m * hbar * omega * (n + 0.5); }

namespace detail {

inline void check_series_args(const ThermalParams& tp, double omega, double rel_tol, double hbar) {
  if (!(tp.beta > 0.0)) throw std::invalid_argument("ThermalParams: beta must be > 0");
  if (!(omega > 0.0)) throw std::invalid_argument("thermal series: omega must be > 0");
  if (!(rel_tol > 0.0) || rel_tol > 1e-6) throw std::invalid_argument("thermal series: rel_tol must lie in (0, 1e-6]");
  if (!(0.5 * hbar * omega - tp.mu > 0.0))
    throw std::domain_error("thermal series: divergent, requires hbar omega/2 - mu > 0");
  tp.validate();
}

/// Sums Z and Z*nbar together; stops when both geometric tail bounds fall below rel_tol.
inline std::pair<SeriesValue, SeriesValue> thermal_sums(const ThermalParams& tp, double omega, double rel_tol,
                                                        double hbar) {
  check_series_args(tp, omega, rel_tol, hbar);
  const double log_r = -tp.beta * (0.5 * hbar * omega - tp.mu);
  const double r = std::exp(log_r);
  const double bw = tp.beta * hbar * omega;
  double z = 0.0, zn = 0.0;
  for (long long m = 1; m <= series_term_cap; ++m) {
    const double rm = std::exp(static_cast<double>(m) * log_r);
    const double one_minus_x = -std::expm1(-static_cast<double>(m) * bw);
    const double xm = std::exp(-static_cast<double>(m) * bw);
    const double tz = rm / one_minus_x;
    const double tn = static_cast<double>(m) * rm * xm / (one_minus_x * one_minus_x);
    z += tz;
    zn += tn;
    const double tail_z = tz * r / (1.0 - r);
    const double tail_n = tn * (r / (1.0 - r) + r / (static_cast<double>(m) * (1.0 - r) * (1.0 - r)));
    if (tail_z < rel_tol * z && (zn == 0.0 || tail_n < rel_tol * zn)) return {{z, m}, {zn, m}};
  }
  throw std::runtime_error("thermal series: hard cap of 1e6 terms reached");
}

}  // namespace detail

inline SeriesValue partition_function(const ThermalParams& tp, double omega, double rel_tol = 1e-12,
                                      double hbar = 1.0) {
  return detail::thermal_sums(tp, omega, rel_tol, hbar).first;
}

/// nbar = Z^{-1} sum_m sum_n m n e^{-beta(E_{m,n} - m mu)}.
inline SeriesValue mean_excitations(const ThermalParams& tp, double omega, double rel_tol = 1e-12,
                                    double hbar = 1.0) {
  const auto [z, zn] = detail::thermal_sums(tp, omega, rel_tol, hbar);
  return {zn.value / z.value, std::max(z.terms, zn.terms)};
}

/// nbar from the weights q_m = e^{-beta|mu|(m-1)} after dividing both series
/// by e^{-beta|mu|}: sum m q_m s^m x_m/(1-x_m)^2 / sum q_m s^m/(1-x_m), s = e^{-beta hbar omega/2}.
inline SeriesValue mean_excitations_factored(const ThermalParams& tp, double omega, double rel_tol = 1e-12,
                                             double hbar = 1.0) {
  detail::check_series_args(tp, omega, rel_tol, hbar);
  const double bw = tp.beta * hbar * omega;
  const double s = std::exp(-0.5 * bw);
  const double ratio = s * std::exp(-tp.beta * std::abs(tp.mu));
  double num = 0.0, den = 0.0, sm = 1.0;
  for (long long m = 1; m <= series_term_cap; ++m) {
    sm *= s;
    const double q = std::exp(-tp.beta * std::abs(tp.mu) * static_cast<double>(m - 1));
    const double xm = std::exp(-static_cast<double>(m) * bw);
    const double omx = -std::expm1(-static_cast<double>(m) * bw);
    const double td = q * sm / omx;
    const double tn = static_cast<double>(m) * q * sm * xm / (omx * omx);
    den += td;
    num += tn;
    const double tail_d = td * ratio / (1.0 - ratio);
    const double tail_n =
        tn * (ratio / (1.0 - ratio) + ratio / (static_cast<double>(m) * (1.0 - ratio) * (1.0 - ratio)));
    if (tail_d < rel_tol * den && (num == 0.0 || tail_n < rel_tol * num)) return {num / den, m};
  }
  throw std::runtime_error("thermal series: hard cap of 1e6 terms reached");
}

/// (hbar / pi^2 c^3) omega^3 nbar.
inline double spectral_density_new(const ThermalParams& tp, double omega, const Constants& k = {},
                                   double rel_tol = 1e-12) {
  if (!(omega > 0.0)) throw std::invalid_argument("spectral_density_new: omega must be > 0");
  const double pref = k.hbar / (pi * pi * k.c_light * k.c_light * k.c_light);
  return pref * omega * omega * omega * mean_excitations(tp, omega, rel_tol, k.hbar).value;
}

/// (hbar / pi^2 c^3) omega^3 / (e^{beta hbar omega} - 1).
inline double planck_density(double beta, double omega, const Constants& k = {}) {
  if (!(omega > 0.0)) throw std::invalid_argument("planck_density: omega must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("planck_density: beta must be > 0");
  const double pref = k.hbar / (pi * pi * k.c_light * k.c_light * k.c_light);
  return pref * omega * omega * omega / std::expm1(beta * k.hbar * omega);
}

struct Peak {
  double x = 0.0;
  double value = 0.0;
};

/// Maximum of f on [lo, hi]: coarse scan, then Brent refinement around the best sample.
inline Peak find_peak(const std::function<double(double)>& f, double lo, double hi, int scan = 400) {
  double best_x = lo, best = f(lo);
  const double step = (hi - lo) / scan;
  for (int i = 1; i <= scan; ++i) {
    const double x = lo + i * step;
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
  const auto [x, negv] = boost::math::tools::brent_find_minima([&](double y) { return -f(y); }, a, b, 52);
  return {x, -negv};
}

struct SpectralCurve {
  double beta = 1.0;
  double mu_over_kT = 0.0;
  double rel_tol = 1e-12;
  std::vector<double> x;  // beta hbar omega
  std::vector<double> rho_new;
  std::vector<double> rho_planck;
  std::vector<double> rel_dev;
  long long max_terms = 0;
  double max_rel_dev = 0.0;
};

/// n log-spaced points on [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  g.back() = hi;
  return g;
}

inline SpectralCurve spectral_curve(double beta, double mu_over_kT, const std::vector<double>& grid,
                                    const Constants& k = {}, double rel_tol = 1e-12) {
  SpectralCurve c;
  c.beta = beta;
  c.mu_over_kT = mu_over_kT;
  c.rel_tol = rel_tol;
  const ThermalParams tp{beta, mu_over_kT / beta};
  for (double x : grid) {
    const double omega = x / (beta * k.hbar);
    const auto nbar = mean_excitations(tp, omega, rel_tol, k.hbar);
    const double pref = k.hbar / (pi * pi * k.c_light * k.c_light * k.c_light);
    const double rn = pref * omega * omega * omega * nbar.value;
    const double rp = planck_density(beta, omega, k);
    c.x.push_back(x);
    c.rho_new.push_back(rn);
    c.rho_planck.push_back(rp);
    c.rel_dev.push_back(std::abs(rn - rp) / rp);
    c.max_terms = std::max(c.max_terms, nbar.terms);
    c.max_rel_dev = std::max(c.max_rel_dev, c.rel_dev.back());
  }
  return c;
}

struct PlanckLimitReport {
  std::vector<SpectralCurve> curves;  // in the order of the requested mu list
  bool monotone = false;              // deviation nonincreasing as mu decreases
  double visibility_threshold = 0.01;
  std::optional<double> visibility_mu_over_kT;  // deviation crosses the threshold here
  Peak planck_peak;

  std::string table() const {
    std::ostringstream os;
    char buf[128];
    os << "mu/kT        max_rel_dev   max_terms\n";
    for (const auto& c : curves) {
      std::snprintf(buf, sizeof buf, "%-12.4g %-13.6e %lld\n", c.mu_over_kT, c.max_rel_dev, c.max_terms);
      os << buf;
    }
    os << "deviation monotone in mu: " << (monotone ? "yes" : "no") << '\n';
    std::snprintf(buf, sizeof buf, "visibility threshold %.3g crossed at mu/kT = ", visibility_threshold);
    os << buf;
    if (visibility_mu_over_kT)
      os << *visibility_mu_over_kT << '\n';
    else
      os << "(not bracketed)\n";
    std::snprintf(buf, sizeof buf, "Planck peak at beta hbar omega = %.8f\n", planck_peak.x);
    os << buf;
    return os.str();
  }

  /// mu_over_kT, omega_over_kT, rho_new, rho_planck, rel_dev.
  std::string csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "mu_over_kT,omega_over_kT,rho_new,rho_planck,rel_dev\n";
    for (const auto& c : curves)
      for (std::size_t i = 0; i < c.x.size(); ++i)
        os << c.mu_over_kT << ',' << c.x[i] << ',' << c.rho_new[i] << ',' << c.rho_planck[i] << ',' << c.rel_dev[i]
           << '\n';
    return os.str();
  }
};

inline PlanckLimitReport planck_limit_report(double beta, const std::vector<double>& mu_over_kT,
                                             const std::vector<double>& grid, const Constants& k = {},
                                             double visibility = 0.01, double rel_tol = 1e-12) {
  if (mu_over_kT.empty()) throw std::invalid_argument("planck_limit_report: empty mu list");
  for (double m : mu_over_kT)
    if (m > 0.0) throw std::invalid_argument("planck_limit_report: mu must be <= 0");
  PlanckLimitReport r;
  r.visibility_threshold = visibility;
  for (double m : mu_over_kT) r.curves.push_back(spectral_curve(beta, m, grid, k, rel_tol));

  std::vector<const SpectralCurve*> order;
  for (const auto& c : r.curves) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->mu_over_kT > b->mu_over_kT; });
  r.monotone = true;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (order[i]->max_rel_dev > order[i - 1]->max_rel_dev) r.monotone = false;

  auto excess = [&](double m) { return spectral_curve(beta, m, grid, k, rel_tol).max_rel_dev - visibility; };
  const double lo = -60.0, hi = 0.0;
  const double f_lo = excess(lo), f_hi = excess(hi);
  if (f_lo < 0.0 && f_hi > 0.0) {
    std::uintmax_t iters = 100;
    const auto root = boost::math::tools::toms748_solve(excess, lo, hi, f_lo, f_hi,
                                                        boost::math::tools::eps_tolerance<double>(30), iters);
    r.visibility_mu_over_kT = 0.5 * (root.first + root.second);
  }
  r.planck_peak =
      find_peak([&](double x) { return planck_density(beta, x / (beta * k.hbar), k); }, grid.front(), grid.back());
  return r;
}

}  // namespace noncanon
