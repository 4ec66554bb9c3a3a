#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace oamcrypt {

/// Thrown when the LP dispersion relation cannot be bracketed or refined.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Geometry and optical constants of a weakly guiding step-index fiber.
/// All lengths in meters.
struct FiberSpec {
  double core_radius = 5e-6;
  double numerical_aperture = 0.1;
  double wavelength = 633e-9;
  double length = 1.0;
  double n_core = 1.457;  // fused silica near 633 nm

  void validate() const {
    if (!(core_radius > 0.0)) throw std::invalid_argument("FiberSpec: core_radius must be > 0");
    if (!(wavelength > 0.0)) throw std::invalid_argument("FiberSpec: wavelength must be > 0");
    if (!(length > 0.0)) throw std::invalid_argument("FiberSpec: length must be > 0");
    if (!(numerical_aperture > 0.0) || !(numerical_aperture < n_core))
      throw std::invalid_argument("FiberSpec: numerical aperture must satisfy 0 < NA < n_core");
  }

  double n_cladding() const {
    return std::sqrt(n_core * n_core - numerical_aperture * numerical_aperture);
  }
  double k0() const { return 2.0 * std::numbers::pi / wavelength; }

  /// A fiber of the default family scaled to the requested V-number by
  /// choosing the core radius.
  static FiberSpec with_v_number(double v, FiberSpec base) {
    base.core_radius = v * base.wavelength / (2.0 * std::numbers::pi * base.numerical_aperture);
    return base;
  }
  static FiberSpec with_v_number(double v) { return with_v_number(v, FiberSpec{}); }
};

/// V = (2*pi*a/lambda0) * NA.
inline double v_number(const FiberSpec& spec) {
  spec.validate();
  return 2.0 * std::numbers::pi * spec.core_radius / spec.wavelength * spec.numerical_aperture;
}

// Integer-order Bessel helpers accepting negative orders.
inline double bessel_j(int n, double x) {
  if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * std::cyl_bessel_j(static_cast<double>(-n), x);
  return std::cyl_bessel_j(static_cast<double>(n), x);
}
inline double bessel_k(int n, double x) {
  return std::cyl_bessel_k(static_cast<double>(n < 0 ? -n : n), x);
}

struct ModeLabel {
  int l = 0;  // azimuthal index
  int p = 1;  // radial index, 1-based
  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

/// One guided LP solution. The radial profile is core_norm * J_|l|(u r/a)
/// inside the core and cladding_norm * K_|l|(w r/a) outside; the two norms
/// make the field continuous at r = a and give unit power over the plane.
struct LPMode {
  int azimuthal_index = 0;
  int radial_index = 1;
  double propagation_constant = 0.0;  // beta, rad/m
  double core_argument = 0.0;         // u = kappa_T * a
  double cladding_argument = 0.0;     // w = gamma * a
  double core_norm = 0.0;
  double cladding_norm = 0.0;

  ModeLabel label() const { return {azimuthal_index, radial_index}; }

  double radial(double r, double core_radius) const {
    const int order = std::abs(azimuthal_index);
    const double rho = r / core_radius;
    if (rho < 1.0) return core_norm * bessel_j(order, core_argument * rho);
    return cladding_norm * bessel_k(order, cladding_argument * rho);
  }
};

namespace detail {

/// u*J_{l+1}(u)/J_l(u) - w*K_{l+1}(w)/K_l(w) with w = sqrt(V^2 - u^2).
inline double lp_characteristic(int l, double u, double v) {
  const double w = std::sqrt(std::max(v * v - u * u, 0.0));
  const double lhs = u * bessel_j(l + 1, u) / bessel_j(l, u);
  const double rhs = w * bessel_k(l + 1, w) / bessel_k(l, w);
  return lhs - rhs;
}

template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Zeros of J_l in (0, v), ascending.
inline std::vector<double> bessel_zeros(int l, double v, double step) {
  std::vector<double> zeros;
  auto j = [l](double x) { return bessel_j(l, x); };
  double prev_x = step * 1e-3;
  double prev = j(prev_x);
  for (double x = step; x < v; x += step) {
    const double cur = j(x);
    if ((cur < 0.0) != (prev < 0.0)) zeros.push_back(bisect(j, prev_x, x, 1e-14));
    prev_x = x;
    prev = cur;
  }
  return zeros;
}

/// Unit-power normalization for the continuous two-branch profile, using the
/// closed-form Bessel integrals over [0, a] and [a, inf).
inline void set_norms(LPMode& m, double a) {
  const int l = std::abs(m.azimuthal_index);
  const double u = m.core_argument;
  const double w = m.cladding_argument;
  const double jl = bessel_j(l, u);
  const double kl = bessel_k(l, w);
  const double match = jl / kl;
  const double core = 0.5 * a * a * (jl * jl - bessel_j(l - 1, u) * bessel_j(l + 1, u));
  const double clad =
      match * match * 0.5 * a * a * (bessel_k(l - 1, w) * bessel_k(l + 1, w) - kl * kl);
  const double n = 1.0 / std::sqrt(2.0 * std::numbers::pi * (core + clad));
  m.core_norm = n;
  m.cladding_norm = n * match;
}

}  // namespace detail

/// Roots u in (0, V) of the weakly guiding LP dispersion relation for one
/// non-negative azimuthal order, ascending. Scan intervals are split at the
/// zeros of J_l so that no sign change across a pole is mistaken for a root.
inline std::vector<double> lp_roots(int l, double v) {
  const double step = 1e-3 * v;
  const double edge = 1e-10 * v;
  std::vector<double> bounds{0.0};
  for (double z : detail::bessel_zeros(l, v, step)) bounds.push_back(z);
  bounds.push_back(v);

  auto f = [l, v](double u) { return detail::lp_characteristic(l, u, v); };
  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    const double lo = bounds[k] + edge;
    const double hi = bounds[k + 1] - edge;
    if (!(hi > lo)) continue;
    double prev_u = lo;
    double prev = f(lo);
    for (double u = lo + step;; u += step) {
      const bool last = u >= hi;
      if (last) u = hi;
      const double cur = f(u);
      if (std::isfinite(prev) && std::isfinite(cur) && (cur < 0.0) != (prev < 0.0)) {
        const double root = detail::bisect(f, prev_u, u, 1e-12);
        const double w = std::sqrt(v * v - root * root);
        const double lhs = root * bessel_j(l + 1, root) / bessel_j(l, root);
        const double rhs = w * bessel_k(l + 1, w) / bessel_k(l, w);
        if (!std::isfinite(lhs) || std::abs(lhs - rhs) > 1e-6 * std::max(1.0, std::abs(lhs)))
          throw SolverError("lp_roots: sign change at u=" + std::to_string(root) + " for l=" +
                            std::to_string(l) + " is not a root of the dispersion relation");
        roots.push_back(root);
      }
      if (last) break;
      prev_u = u;
      prev = cur;
    }
  }
  return roots;
}

/// All guided LP modes, +-l duplicated for l != 0, sorted by descending beta
/// then ascending l.
inline std::vector<LPMode> solve_lp_modes(const FiberSpec& spec) {
  const double v = v_number(spec);
  const double a = spec.core_radius;
  const double k_core = spec.n_core * spec.k0();
  std::vector<LPMode> modes;
  for (int l = 0;; ++l) {
    const auto roots = lp_roots(l, v);
    if (roots.empty()) break;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      LPMode m;
      m.azimuthal_index = l;
      m.radial_index = static_cast<int>(i) + 1;
      m.core_argument = roots[i];
      m.cladding_argument = std::sqrt(v * v - roots[i] * roots[i]);
      const double kappa = roots[i] / a;
      m.propagation_constant = std::sqrt(k_core * k_core - kappa * kappa);
      detail::set_norms(m, a);
      if (l == 0) {
        modes.push_back(m);
      } else {
        m.azimuthal_index = -l;
        modes.push_back(m);
        m.azimuthal_index = l;
        modes.push_back(m);
      }
    }
  }
  std::stable_sort(modes.begin(), modes.end(), [](const LPMode& x, const LPMode& y) {
    if (x.propagation_constant != y.propagation_constant)
      return x.propagation_constant > y.propagation_constant;
    return x.azimuthal_index < y.azimuthal_index;
  });
  return modes;
}

}  // namespace oamcrypt
