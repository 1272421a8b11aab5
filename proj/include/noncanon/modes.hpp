// modes.hpp - the finite mode set (spectrum of the frequency operator) and
// circular polarization vectors.
//
// A mode is the pair (helicity s, wavevector kappa); its frequency is
// omega = c |kappa|. The ordering of a ModeSet is fixed at construction and
// defines every basis index downstream.

#pragma once

#include "noncanon/core.hpp"

#include <array>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace noncanon {

/// hbar, c and k_B; natural units by default.
struct Constants {
  double hbar = 1.0;
  double c_light = 1.0;
  double k_B = 1.0;
};

struct Mode {
  int s = 1;
  Vec3 kappa = Vec3::Zero();
  double omega = 0.0;

  Vec3 direction() const { return kappa / kappa.norm(); }
};

inline Mode make_mode(int s, const Vec3& kappa, double c_light = 1.0) {
  if (s != 1 && s != -1) throw std::invalid_argument("helicity must be +1 or -1");
  const double k = kappa.norm();
  if (!(k > 0.0)) throw std::invalid_argument("zero-frequency mode (|kappa| = 0) rejected");
  return Mode{s, kappa, c_light * k};
}

/// Helicity vectors (theta_hat + i s phi_hat)/sqrt(2) in the spherical frame of
/// kappa. On the z axis phi = atan2(0,0) = 0, so the frame is x-y there.
/// They satisfy n x e_s = -i s e_s and e_{-s} = conj(e_s).
inline std::pair<CVec3, CVec3> helicity_vectors(const Vec3& kappa) {
  const double k = kappa.norm();
  if (!(k > 0.0)) throw std::invalid_argument("helicity_vectors: zero wavevector");
  const Vec3 n = kappa / k;
  const double theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  const double phi = std::atan2(n(1), n(0));
  const Vec3 theta_hat(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta));
  const Vec3 phi_hat(-std::sin(phi), std::cos(phi), 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  CVec3 plus = (theta_hat.cast<cplx>() + I * phi_hat.cast<cplx>()) * r;
  CVec3 minus = (theta_hat.cast<cplx>() - I * phi_hat.cast<cplx>()) * r;
  return {plus, minus};
}

inline CVec3 polarization(const Mode& m) {
  auto [plus, minus] = helicity_vectors(m.kappa);
  return m.s == 1 ? plus : minus;
}

class ModeSet {
 public:
  ModeSet() = default;
  ModeSet(std::vector<Mode> modes, double volume, Constants constants = {})
      : modes_(std::move(modes)), volume_(volume), constants_(constants) {
    if (!(volume_ > 0.0)) throw std::invalid_argument("ModeSet: volume must be > 0");
    if (modes_.empty()) throw std::invalid_argument("ModeSet: empty spectrum");
    std::set<std::array<double, 4>> seen;
    for (auto& m : modes_) {
      if (m.s != 1 && m.s != -1) throw std::invalid_argument("ModeSet: helicity must be +1 or -1");
      if (!(m.kappa.norm() > 0.0)) throw std::invalid_argument("ModeSet: zero-frequency mode");
      m.omega = constants_.c_light * m.kappa.norm();
      if (!seen.insert({double(m.s), m.kappa(0), m.kappa(1), m.kappa(2)}).second)
        throw std::invalid_argument("ModeSet: duplicate (s, kappa)");
    }
  }

  std::size_t size() const { return modes_.size(); }
  const Mode& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<Mode>& modes() const { return modes_; }
  double volume() const { return volume_; }
  const Constants& constants() const { return constants_; }
  double hbar() const { return constants_.hbar; }

  /// Index of the mode with the same (s, kappa); throws if absent.
  std::size_t index_of(const Mode& m) const {
    for (std::size_t i = 0; i < modes_.size(); ++i)
      if (modes_[i].s == m.s && modes_[i].kappa == m.kappa) return i;
    throw std::out_of_range("mode not in ModeSet");
  }

  /// The first `count` modes, same volume and constants.
  ModeSet prefix(std::size_t count) const {
    if (count == 0 || count > modes_.size()) throw std::invalid_argument("ModeSet::prefix: bad count");
    return ModeSet(std::vector<Mode>(modes_.begin(), modes_.begin() + static_cast<long>(count)), volume_, constants_);
  }

  /// One mode per line: s kx ky kz omega.
  std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "volume = " << volume_ << '\n'
       << "hbar = " << constants_.hbar << '\n'
       << "c_light = " << constants_.c_light << '\n'
       << "k_B = " << constants_.k_B << '\n'
       << "modes = " << modes_.size() << '\n';
    for (const auto& m : modes_)
      os << "mode = " << m.s << ' ' << m.kappa(0) << ' ' << m.kappa(1) << ' ' << m.kappa(2) << ' ' << m.omega << '\n';
    return os.str();
  }

 private:
  std::vector<Mode> modes_;
  double volume_ = 1.0;
  Constants constants_;
};

namespace detail {
inline bool lattice_less(const std::array<int, 3>& a, int sa, const std::array<int, 3>& b, int sb) {
  const int na = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
  const int nb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
  return std::tie(na, a[0], a[1], a[2], sb) < std::tie(nb, b[0], b[1], b[2], sa);
}

template <class Accept>
std::vector<Mode> lattice_modes(double box_length, int max_index, double c_light, Accept accept) {
  struct Entry {
    std::array<int, 3> n;
    int s;
  };
  std::vector<Entry> entries;
  for (int i = -max_index; i <= max_index; ++i)
    for (int j = -max_index; j <= max_index; ++j)
      for (int k = -max_index; k <= max_index; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        if (!accept(i * i + j * j + k * k)) continue;
        entries.push_back({{i, j, k}, 1});
        entries.push_back({{i, j, k}, -1});
      }
  // |n|^2 ascending, then lexicographic n, then s = +1 before s = -1.
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return lattice_less(a.n, a.s, b.n, b.s); });
  const double unit = 2.0 * pi / box_length;
  std::vector<Mode> modes;
  modes.reserve(entries.size());
  for (const auto& e : entries) {
    const Vec3 kappa(unit * e.n[0], unit * e.n[1], unit * e.n[2]);
    modes.push_back(Mode{e.s, kappa, c_light * kappa.norm()});
  }
  return modes;
}
}  // namespace detail

/// All periodic-box modes kappa = (2 pi / L) n with n in [-max_index, max_index]^3,
/// n != 0, both helicities.
inline ModeSet make_cubic_modeset(double box_length, int max_index, double volume, Constants constants = {}) {
  if (!(box_length > 0.0)) throw std::invalid_argument("make_cubic_modeset: box_length must be > 0");
  if (max_index < 1) throw std::invalid_argument("make_cubic_modeset: max_index must be >= 1");
  return ModeSet(detail::lattice_modes(box_length, max_index, constants.c_light, [](int) { return true; }), volume,
                 constants);
}

/// Periodic-box modes whose frequency lies in [omega_min, omega_max].
inline ModeSet make_shell_modeset(double box_length, double omega_min, double omega_max, double volume,
                                  Constants constants = {}) {
  if (!(box_length > 0.0) || !(omega_min > 0.0) || !(omega_max > omega_min))
    throw std::invalid_argument("make_shell_modeset: need L > 0 and 0 < omega_min < omega_max");
  const double unit = 2.0 * pi / box_length * constants.c_light;
  const int max_index = static_cast<int>(std::ceil(omega_max / unit));
  const double lo = (omega_min / unit) * (omega_min / unit);
  const double hi = (omega_max / unit) * (omega_max / unit);
  return ModeSet(detail::lattice_modes(box_length, max_index, constants.c_light,
                                       [&](int n2) { return n2 >= lo && n2 <= hi; }),
                 volume, constants);
}

}  // namespace noncanon
