// experiments.hpp - batch experiments behind the command line front end.
//
// Each experiment turns a validated RunConfig into a set of checks, a text
// report and one CSV table. A run passes iff every check passes.

#pragma once

#include "noncanon/blackbody.hpp"
#include "noncanon/config.hpp"

#include <boost/math/tools/roots.hpp>

#include <filesystem>
#include <random>

namespace noncanon {

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string topics;
};

inline const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> list{
      {"algebra-check", "projector-valued ladder algebra, Heisenberg evolution, sector algebra and spectrum",
       "noncanonical commutators; time evolution; multi-oscillator resolution of identity; free generator"},
      {"fields-check", "field operators, energy-momentum identities and coherent-state averages",
       "A, E, B mode sums; translations; [E, B]; classical coherent fields"},
      {"emission", "first-order spontaneous emission rates against the canonical rate",
       "rotating-wave coupling; golden-rule rate ratio P/P_old = F(omega0); sector factor sum k c_k^2 p_k"},
      {"two-photon", "second-order two-quanta amplitudes against the canonical oracle",
       "dipole coupling at second order; three-oscillator sector identity; two-photon probability factor"},
      {"blackbody", "thermal spectral density with chemical potential against Planck",
       "two-index partition function; q_m factoring; Planck limit and peak shift"},
  };
  return list;
}

inline std::string list_experiments() {
  std::ostringstream os;
  for (const auto& e : experiment_catalog())
    os << e.name << std::string(16 - e.name.size(), ' ') << e.description << "\n" << std::string(16, ' ')
       << "covers: " << e.topics << '\n';
  return os.str();
}

struct ExperimentResult {
  std::string name;
  CheckReport checks;
  std::string report;
  std::string csv;
};

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + '"';
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string checks_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "report,check,value,relation,bound,passed\n";
  for (const auto& r : reports)
    for (const auto& e : r.entries())
      os << csv_quote(r.title()) << ',' << csv_quote(e.name) << ',' << fmt(e.value) << ',' << (e.upper ? "<=" : ">")
         << ',' << fmt(e.bound) << ',' << (e.passed ? 1 : 0) << '\n';
  return os.str();
}

inline ExperimentResult assemble(const std::string& name, const std::vector<CheckReport>& reports,
                                 const std::string& preamble, std::string csv) {
  ExperimentResult out{name, CheckReport(name), {}, std::move(csv)};
  std::ostringstream os;
  os << "experiment: " << name << "\n\n" << preamble;
  for (const auto& r : reports) {
    out.checks.merge(r);
    os << '\n' << r.to_text();
  }
  os << "\nresult: " << (out.checks.all_passed() ? "PASS" : "FAIL") << '\n';
  out.report = os.str();
  return out;
}

inline ExperimentResult run_algebra_check(const RunConfig& c) {
  const OscillatorSpace sp(c.lattice_modes(), *c.n_max);
  CheckReport single = algebra_report(sp, c.tol);

  CheckReport evolution("Heisenberg evolution of a_k (n < N_max)");
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> tdist(-10.0, 10.0);
  const DenseOp h(hamiltonian(sp));
  const auto keep = sp.valid_mask();
  double dev = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double t = tdist(rng);
    for (std::size_t k = 0; k < sp.modes().size(); ++k) {
      const DenseOp a(mode_annihilator(sp, k));
      const DenseOp expected = std::exp(-I * sp.modes()[k].omega * t) * a;
      dev = std::max(dev, restricted_deviation(heisenberg_evolve(a, h, t, sp.hbar()), expected, keep));
    }
  }
  evolution.require_at_most("e^{iHt} a_k e^{-iHt} = e^{-i omega t} a_k (10 seeded t)", dev, 1e-10);

  const MultiSpace ms(sp, c.max_sector);
  const ExtensionWeights w = c.extension_weights();
  CheckReport bold = bold_algebra_report(ms, w, c.tol);

  CheckReport spectrum("free generator spectrum on |n>^(x)m");
  std::ostringstream pre;
  pre << sp.modes().to_text() << "\nN_max = " << *c.n_max << ", M = " << c.max_sector << ", weights = " << c.weights
      << "\n\n"
      << ms.dimension_table();
  const BoldOperator gen = free_generator(ms);
  double level_dev = 0.0, residual = 0.0;
  for (int m = 1; m <= c.max_sector; ++m)
    for (int n = 0; n <= *c.n_max; ++n) {
      const SpectrumRow row = sector_level(ms, gen, 0, m, n);
      level_dev = std::max(level_dev, std::abs(row.value - level_energy(m, n, sp.modes()[0].omega, sp.hbar())));
      residual = std::max(residual, row.residual);
    }
  spectrum.require_at_most("<H> = m hbar omega (n + 1/2), m <= M, n <= N_max", level_dev, 0.0);
  spectrum.require_at_most("|H s - <H> s| (eigenvector)", residual, 0.0);
  if (c.max_sector >= 2 && *c.n_max >= 2) {
    pre << "\nstate     m  n  value\n";
    char buf[96];
    for (const auto& row : sector_energy_spectrum_demo(ms)) {
      std::snprintf(buf, sizeof buf, "%-9s %d  %d  %.6f\n", row.label.c_str(), row.oscillators, row.excitation,
                    row.value);
      pre << buf;
    }
  }
  const std::vector<CheckReport> all{single, evolution, bold, spectrum};
  return assemble("algebra-check", all, pre.str(), checks_csv(all));
}

inline ExperimentResult run_fields_check(const RunConfig& c) {
  const ModeSet modes = c.lattice_modes();
  const OscillatorSpace sp(modes, *c.n_max);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0), unit(0.0, 1.0);
  std::vector<FieldPoint> points;
  for (int i = 0; i < c.samples; ++i) {
    const double t = u(rng), x = u(rng), y = u(rng), z = u(rng);
    points.push_back({t, Vec3(x, y, z)});
  }
  CheckReport identities = energy_momentum_identity_check(sp, points);

  CheckReport operators("field operators");
  double herm = 0.0, shift = 0.0;
  for (auto kind : {FieldKind::A, FieldKind::E, FieldKind::B})
    for (int j = 0; j < 3; ++j) {
      const SparseOp f = field_operator(sp, kind, j, points[0]);
      herm = std::max(herm, max_abs(SparseOp(f - SparseOp(f.adjoint()))));
      shift = std::max(shift, max_abs(DenseOp(translate(sp, field_operator(sp, kind, j), points[0]) - DenseOp(f))));
    }
  double eb = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) eb = std::max(eb, eb_commutator(sp, a, b, points[0]).deviation);
  operators.require_at_most("field operators Hermitian", herm, 1e-14);
  operators.require_at_most("translation generates (t, x) dependence", shift, 1e-11);
  operators.require_at_most("[E_a, B_b] closed form", eb, 1e-11);

  CoherentFieldSpec spec;
  spec.phi = c.vacuum(modes).phi;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double r = c.alpha_max * unit(rng), phase = 2.0 * pi * unit(rng);
    spec.alpha.push_back(std::polar(r, phase));
  }
  const StateVector psi = coherent_state_vector(sp, spec);
  CheckReport coherent("coherent-state classical fields");
  double avg = 0.0;
  for (const auto& p : points)
    for (auto kind : {FieldKind::A, FieldKind::E, FieldKind::B}) {
      const CVec3 closed = coherent_field_average(sp, spec, kind, p);
      for (int j = 0; j < 3; ++j) avg = std::max(avg, std::abs(expectation(psi, field_operator(sp, kind, j, p)) - closed(j)));
    }
  coherent.require_at_most("<A>, <E>, <B> explicit vs closed form", avg, 1e-9);
  coherent.require_at_most("<H> = sum hbar omega |phi|^2 (|alpha|^2 + 1/2)",
                           std::abs(expectation(psi, hamiltonian(sp)).real() - coherent_energy(sp, spec)), 1e-9);

  std::ostringstream csv;
  csv << "field,t,x,y,z,re_x,im_x,re_y,im_y,re_z,im_z\n";
  const double period = 2.0 * pi / modes[0].omega;
  const char* names[] = {"A", "E", "B"};
  for (int kind = 0; kind < 3; ++kind)
    for (int i = 0; i < 64; ++i) {
      const FieldPoint p{period * i / 64.0, Vec3::Zero()};
      const CVec3 v = coherent_field_average(sp, spec, static_cast<FieldKind>(kind), p);
      csv << names[kind] << ',' << fmt(p.t) << ",0,0,0";
      for (int j = 0; j < 3; ++j) csv << ',' << fmt(v(j).real()) << ',' << fmt(v(j).imag());
      csv << '\n';
    }

  std::ostringstream pre;
  pre << modes.to_text() << "\nN_max = " << *c.n_max << ", sample points = " << points.size() << '\n';
  for (std::size_t m = 0; m < modes.size(); ++m)
    pre << "alpha[" << m << "] = " << spec.alpha[m].real() << (spec.alpha[m].imag() < 0 ? " - " : " + ")
        << std::abs(spec.alpha[m].imag()) << "i\n";
  return assemble("fields-check", {identities, operators, coherent}, pre.str(), csv.str());
}

inline ExperimentResult run_emission(const RunConfig& c) {
  const TwoLevelAtom atom = c.two_level_atom();
  const ModeSet shell = c.shell_modes();
  const auto profile = c.profile_function();
  const double t = c.duration;
  const EmissionRate flat = emission_rate(atom, [](double) { return 1.0; }, shell, t);
  const EmissionRate shaped = emission_rate(atom, profile, shell, t);
  const EmissionRate longer = emission_rate(atom, profile, shell, 2.0 * t);

  CheckReport rates("emission rate ratio");
  rates.require_at_most("|P/P_old - F(omega0)| / F(omega0)",
                        std::abs(shaped.ratio - shaped.profile_at_omega0) / shaped.profile_at_omega0, c.ratio_tol);
  rates.require_at_most("|P_old(2T)/P_old(T) - 1| (golden-rule regime)", std::abs(longer.p_old / flat.p_old - 1.0),
                        0.05);
  rates.require_above("frequency levels within 2 pi/T of omega0", static_cast<double>(shaped.levels_in_window), 7.0);

  const MultiSpace ms(OscillatorSpace(c.lattice_modes(), *c.n_max), c.max_sector);
  const ExtensionWeights w = c.extension_weights();
  const MultiFirstOrder multi = multi_first_order(atom, ms, c.vacuum(ms.single().modes()), w, t);
  CheckReport sectors("multi-oscillator rate factor");
  if (c.weights == "inverse-sqrt")
    sectors.require_at_most("sum_k k c_k^2 p_k = 1 (c_k = 1/sqrt k)", std::abs(multi.rate_factor - 1.0), 0.0);

  std::ostringstream pre;
  char buf[160];
  std::snprintf(buf, sizeof buf, "shell modes: %zu in [%.4g, %.4g], L = %.6g\nomega0 = %.6g, d = %.6g, T = %.6g\n",
                shell.size(), c.shell_omega_min, c.shell_omega_max, c.shell_length, atom.omega0, atom.d, t);
  pre << buf << "profile: " << c.profile << ", F(omega0) = " << shaped.profile_at_omega0 << '\n';
  std::snprintf(buf, sizeof buf, "P = %.10e  P_old = %.10e  ratio = %.10f\n", shaped.p, shaped.p_old, shaped.ratio);
  pre << buf;
  if (!shaped.resolved) pre << "warning: " << shaped.warning << '\n';
  pre << "\nsector  p_k  first-order probability (ground atom)\n";
  for (int k = 1; k <= c.max_sector; ++k) {
    std::snprintf(buf, sizeof buf, "%d  %.6g  %.10e\n", k, k <= static_cast<int>(c.p.size()) ? c.p[k - 1] : 0.0,
                  multi.sector_probability[static_cast<std::size_t>(k - 1)]);
    pre << buf;
  }
  pre << "rate factor sum k c_k^2 p_k = " << fmt(multi.rate_factor) << '\n';

  std::ostringstream csv;
  csv << "profile,T,p,p_old,ratio,profile_at_omega0,levels_in_window\n";
  auto row = [&](const char* name, double tt, const EmissionRate& r) {
    csv << name << ',' << fmt(tt) << ',' << fmt(r.p) << ',' << fmt(r.p_old) << ',' << fmt(r.ratio) << ','
        << fmt(r.profile_at_omega0) << ',' << r.levels_in_window << '\n';
  };
  row("flat", t, flat);
  row(c.profile.c_str(), t, shaped);
  row(c.profile.c_str(), 2.0 * t, longer);
  return assemble("emission", {rates, sectors}, pre.str(), csv.str());
}

inline ExperimentResult run_two_photon(const RunConfig& c) {
  const ModeSet modes = c.lattice_modes();
  const OscillatorSpace sp(modes, *c.n_max);
  const MultiLevelAtom atom = fixture_atom(c.fixture);
  const VacuumSpec vac = c.vacuum(modes);
  const ExtensionWeights w = c.extension_weights();
  const DipoleCoupling v(sp, atom);
  const double t = c.duration;

  CheckReport amps("two-quanta amplitudes");
  std::vector<std::pair<std::string, cplx>> rows;
  double dev = 0.0, swap = 0.0, eta_spread = 0.0;
  TwoQuantaTargets first{};
  bool have_first = false;
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      const TwoQuantaTargets tg{i, j, atom.levels() - 1, 0};
      if (!have_first) first = tg, have_first = true;
      const cplx mod = second_order_two_quanta(v, vac, w, c.max_sector, tg, t, c.eta).value;
      const cplx oracle = standard_oracle_two_photon(modes, atom, tg, t, c.eta);
      const cplx scaled = w.sq(2) * std::sqrt(vac.p_at(2)) * vac.phi[i] * vac.phi[j] * oracle;
      dev = std::max(dev, relative_difference(mod, scaled));
      const cplx swapped = second_order_two_quanta(v, vac, w, c.max_sector, {j, i, tg.initial_level, 0}, t, c.eta).value;
      swap = std::max(swap, relative_difference(mod, swapped));
      for (double f : {0.1, 10.0})
        eta_spread = std::max(
            eta_spread, relative_difference(second_order_two_quanta(v, vac, w, c.max_sector, tg, t, c.eta * f).value, mod));
      const std::string ch = "(" + std::to_string(i) + ":" + std::to_string(j) + ")";
      rows.emplace_back("modified" + ch, mod);
      rows.emplace_back("oracle" + ch, oracle);
      rows.emplace_back("scaled_oracle" + ch, scaled);
    }
  if (!have_first) throw std::invalid_argument("two-photon: needs at least two modes");
  amps.require_at_most("A = c_2^2 sqrt(p_2) phi_1 phi_2 A_std (relative)", dev, 1e-10);
  amps.require_at_most("swap symmetry (relative)", swap, 1e-12);
  amps.require_at_most("eta stability over a decade (relative)", eta_spread, 0.01);

  std::vector<CheckReport> reports{amps};
  if (c.max_sector >= 3) reports.push_back(three_oscillator_identity_check(v, vac, w, c.max_sector, first, t, c.eta).report);

  CheckReport factor("two-photon probability factor");
  const double f = two_photon_factor(vac.p, w);
  if (c.weights == "inverse-sqrt") {
    double direct = 1.0;
    for (std::size_t n = 1; n <= vac.p.size(); ++n) direct -= vac.p[n - 1] / static_cast<double>(n);
    factor.require_at_most("factor = 1 - sum p_n / n", std::abs(f - direct), 1e-14);
  }
  reports.push_back(factor);

  std::ostringstream pre;
  pre << modes.to_text() << "\natom fixture: " << c.fixture << ", T = " << t << ", eta = " << c.eta
      << ", M = " << c.max_sector << ", weights = " << c.weights << '\n';
  const cplx oracle0 = standard_oracle_two_photon(modes, atom, first, t, c.eta);
  pre << "probability factor = " << fmt(f) << "\nP(" << first.mode1 << ',' << first.mode2
      << ") / P_old = " << fmt(two_photon_probability(vac.p, w, vac.phi[first.mode1], vac.phi[first.mode2], 1.0))
      << "\nP_old(" << first.mode1 << ',' << first.mode2 << ") = " << fmt(std::norm(oracle0)) << '\n';
  return assemble("two-photon", reports, pre.str(), amplitude_csv(rows));
}

inline ExperimentResult run_blackbody(const RunConfig& c) {
  const auto grid = log_grid(c.grid_min, c.grid_max, c.grid_points);
  const PlanckLimitReport r = planck_limit_report(c.beta, c.mu_over_kT, grid, Constants{}, c.visibility, c.rel_tol);

  CheckReport checks("Planck limit");
  checks.require_at_most("deviation monotone in mu (0 = yes)", r.monotone ? 0.0 : 1.0, 0.0);
  long long terms = 0;
  double factored = 0.0;
  for (const auto& curve : r.curves) {
    terms = std::max(terms, curve.max_terms);
    const ThermalParams tp{c.beta, curve.mu_over_kT / c.beta};
    for (double x : curve.x) {
      const double omega = x / c.beta;
      const double direct = mean_excitations(tp, omega, c.rel_tol).value;
      const double q = mean_excitations_factored(tp, omega, c.rel_tol).value;
      if (direct > 0.0) factored = std::max(factored, std::abs(q / direct - 1.0));
    }
    if (curve.mu_over_kT <= -10.0)
      checks.require_at_most("max rel deviation from Planck, mu/kT = " + fmt(curve.mu_over_kT), curve.max_rel_dev,
                             c.visibility);
  }
  checks.require_at_most("series terms below the hard cap", static_cast<double>(terms),
                         static_cast<double>(series_term_cap - 1));
  checks.require_at_most("q_m-factored vs direct nbar (relative)", factored, 1e-12);

  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve([](double x) { return x - 3.0 * (1.0 - std::exp(-x)); }, 1.0,
                                                      5.0, boost::math::tools::eps_tolerance<double>(50), iters);
  const double x_star = 0.5 * (root.first + root.second);
  checks.require_at_most("Planck peak vs root of x = 3(1 - e^-x)", std::abs(r.planck_peak.x - x_star), 1e-4);

  std::ostringstream pre;
  pre << "beta = " << c.beta << ", grid " << c.grid_min << " .. " << c.grid_max << " (" << c.grid_points
      << " log-spaced points)\n\n"
      << r.table();
  if (std::find(c.mu_over_kT.begin(), c.mu_over_kT.end(), 0.0) != c.mu_over_kT.end()) {
    const ThermalParams tp0{c.beta, 0.0};
    const Peak planck = r.planck_peak;
    const Peak modified = find_peak([&](double x) { return spectral_density_new(tp0, x / c.beta, {}, c.rel_tol); },
                                    c.grid_min, c.grid_max);
    checks.require_at_most("mu = 0 peak value / Planck peak value", modified.value / planck.value, 1.0);
    checks.require_above("mu = 0 peak position - Planck peak position", modified.x - planck.x, 0.0);
    char buf[128];
    std::snprintf(buf, sizeof buf, "mu = 0 peak at beta hbar omega = %.8f (value ratio %.6f)\n", modified.x,
                  modified.value / planck.value);
    pre << buf;
  }
  return assemble("blackbody", {checks}, pre.str(), r.csv());
}

}  // namespace detail

inline ExperimentResult run_experiment(const RunConfig& c) {
  validate(c);
  if (c.experiment == "algebra-check") return detail::run_algebra_check(c);
  if (c.experiment == "fields-check") return detail::run_fields_check(c);
  if (c.experiment == "emission") return detail::run_emission(c);
  if (c.experiment == "two-photon") return detail::run_two_photon(c);
  return detail::run_blackbody(c);
}

/// Runs and writes report.txt and <experiment>.csv into `out`. Returns 0 iff every check passed.
inline int run_to_directory(const RunConfig& c, const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw std::runtime_error("output path not writable: " + out.string() + " (" + ec.message() + ")");
  const ExperimentResult r = run_experiment(c);
  auto write = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("output path not writable: " + p.string());
  };
  write(out / "report.txt", r.report);
  write(out / (c.experiment + ".csv"), r.csv);
  return r.checks.all_passed() ? 0 : 1;
}

}  // namespace noncanon
