#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "oamcrypt/mode/fiber.hpp"

namespace oamcrypt {

using cplx = std::complex<double>;

/// Uniform sample grid centered on the origin. Sample (i, j) sits at the
/// midpoint of its cell; rows run along y.
struct Grid {
  int width = 0;
  int height = 0;
  double extent_x = 0.0;  // meters
  double extent_y = 0.0;

  static Grid square(int n, double extent) { return {n, n, extent, extent}; }

  void validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("Grid: sample counts must be > 0");
    if (!(extent_x > 0.0) || !(extent_y > 0.0))
      throw std::invalid_argument("Grid: physical extent must be > 0");
  }

  double dx() const { return extent_x / width; }
  double dy() const { return extent_y / height; }
  double cell_area() const { return dx() * dy(); }
  double x(int i) const { return (i + 0.5 - 0.5 * width) * dx(); }
  double y(int j) const { return (j + 0.5 - 0.5 * height) * dy(); }
  std::size_t size() const { return static_cast<std::size_t>(width) * height; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Complex amplitude sampled on a Grid, row-major.
struct ComplexField {
  Grid grid;
  std::vector<cplx> values;

  ComplexField() = default;
  explicit ComplexField(const Grid& g) : grid(g), values(g.size(), cplx{}) { g.validate(); }

  cplx& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.width + i]; }
  const cplx& at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.width + i]; }

  /// Midpoint-rule power, sum |psi|^2 dA.
  double power() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * grid.cell_area();
  }

  ComplexField& operator*=(cplx k) {
    for (auto& v : values) v *= k;
    return *this;
  }
  ComplexField& operator+=(const ComplexField& o) {
    if (!(o.grid == grid)) throw std::invalid_argument("ComplexField: grid mismatch");
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
    return *this;
  }

  bool all_finite() const {
    for (const auto& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

/// <a|b> = sum conj(a) * b dA on a shared grid.
inline cplx inner_product(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("inner_product: grid mismatch");
  cplx s{};
  for (std::size_t k = 0; k < a.values.size(); ++k) s += std::conj(a.values[k]) * b.values[k];
  return s * a.grid.cell_area();
}

inline void normalize_power(ComplexField& f) {
  const double p = f.power();
  if (p > 0.0) f *= cplx(1.0 / std::sqrt(p), 0.0);
}

enum class Normalization {
  grid,      // rescale so the midpoint quadrature on this grid gives unit power
  analytic,  // closed-form unit power over the infinite plane
};

struct Placement {
  double center_x = 0.0;  // position of the beam/fiber axis on the grid, meters
  double center_y = 0.0;
};

/// LP_{l,p}(r, phi) = radial(r) * exp(-i l phi), continuous at r = a.
inline ComplexField lp_field(const LPMode& mode, const FiberSpec& spec, const Grid& grid,
                             Normalization norm = Normalization::grid, Placement at = {}) {
  grid.validate();
  const double a = spec.core_radius;
  if (grid.extent_x < 2.0 * a || grid.extent_y < 2.0 * a)
    throw std::invalid_argument("lp_field: grid extent smaller than the core diameter");
  ComplexField f(grid);
  const int l = mode.azimuthal_index;
  for (int j = 0; j < grid.height; ++j) {
    const double y = grid.y(j) - at.center_y;
    for (int i = 0; i < grid.width; ++i) {
      const double x = grid.x(i) - at.center_x;
      const double r = std::hypot(x, y);
      const double phi = std::atan2(y, x);
      const double amp = mode.radial(r, a);
      f.at(i, j) = amp * cplx(std::cos(l * phi), -std::sin(l * phi));
    }
  }
  if (norm == Normalization::grid) normalize_power(f);
  return f;
}

/// Laguerre-Gaussian beam carrying OAM charge l with radial index p_r.
struct LGBeam {
  int charge = 0;
  int radial_index = 0;
  double waist = 1.0;  // meters

  void validate() const {
    if (!(waist > 0.0)) throw std::invalid_argument("LGBeam: waist must be > 0");
    if (radial_index < 0) throw std::invalid_argument("LGBeam: radial index must be >= 0");
  }
};

/// Unit-power (grid quadrature) LG field. Only the amplitude depends on |l|;
/// the sign of l enters through sin(l phi), so |LG_l|^2 == |LG_-l|^2 exactly.
inline ComplexField lg_field(const LGBeam& beam, const Grid& grid, Placement at = {}) {
  beam.validate();
  ComplexField f(grid);
  const int m = std::abs(beam.charge);
  const double w0 = beam.waist;
  for (int j = 0; j < grid.height; ++j) {
    const double y = grid.y(j) - at.center_y;
    for (int i = 0; i < grid.width; ++i) {
      const double x = grid.x(i) - at.center_x;
      const double r2 = (x * x + y * y) / (w0 * w0);
      const double phi = std::atan2(y, x);
      const double amp = std::pow(std::sqrt(2.0 * r2), m) *
                         std::assoc_laguerre(static_cast<unsigned>(beam.radial_index),
                                             static_cast<unsigned>(m), 2.0 * r2) *
                         std::exp(-r2);
      f.at(i, j) = amp * cplx(std::cos(beam.charge * phi), std::sin(beam.charge * phi));
    }
  }
  normalize_power(f);
  return f;
}

/// Complex coefficients over an ordered list of LP modes.
struct ModalVector {
  std::vector<ModeLabel> labels;
  Eigen::VectorXcd coeffs;

  std::size_t size() const { return labels.size(); }
  double power() const { return coeffs.squaredNorm(); }
};

/// The fiber's LP fields sampled on one grid, in solver order.
class ModeBasis {
 public:
  ModeBasis(FiberSpec spec, std::vector<LPMode> modes, const Grid& grid,
            Normalization norm = Normalization::grid, Placement at = {})
      : spec_(spec), modes_(std::move(modes)), grid_(grid), placement_(at) {
    fields_.reserve(modes_.size());
    for (const auto& m : modes_) fields_.push_back(lp_field(m, spec_, grid_, norm, at));
  }

  const FiberSpec& spec() const { return spec_; }
  const std::vector<LPMode>& modes() const { return modes_; }
  const Grid& grid() const { return grid_; }
  const Placement& placement() const { return placement_; }
  const ComplexField& field(std::size_t k) const { return fields_[k]; }
  std::size_t size() const { return modes_.size(); }

  std::vector<ModeLabel> labels() const {
    std::vector<ModeLabel> out;
    for (const auto& m : modes_) out.push_back(m.label());
    return out;
  }

 private:
  FiberSpec spec_;
  std::vector<LPMode> modes_;
  Grid grid_;
  Placement placement_;
  std::vector<ComplexField> fields_;
};

/// c_{l,p} = <LP_{l,p} | field> by midpoint quadrature.
inline ModalVector decompose(const ComplexField& field, const ModeBasis& basis) {
  if (!(field.grid == basis.grid())) throw std::invalid_argument("decompose: grid mismatch");
  ModalVector out{basis.labels(), Eigen::VectorXcd(static_cast<Eigen::Index>(basis.size()))};
  for (std::size_t k = 0; k < basis.size(); ++k)
    out.coeffs[static_cast<Eigen::Index>(k)] = inner_product(basis.field(k), field);
  return out;
}

inline ModalVector decompose(const ComplexField& field, const std::vector<LPMode>& modes,
                             const FiberSpec& spec) {
  return decompose(field, ModeBasis(spec, modes, field.grid));
}

/// sum_k c_k LP_k on the basis grid.
inline ComplexField synthesize(const ModalVector& coeffs, const ModeBasis& basis) {
  if (coeffs.size() != basis.size() ||
      static_cast<std::size_t>(coeffs.coeffs.size()) != basis.size())
    throw std::invalid_argument("synthesize: coefficient count does not match mode count");
  const auto labels = basis.labels();
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (!(labels[k] == coeffs.labels[k]))
      throw std::invalid_argument("synthesize: coefficient ordering does not match modes");
  ComplexField out(basis.grid());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const cplx c = coeffs.coeffs[static_cast<Eigen::Index>(k)];
    if (c == cplx{}) continue;
    const auto& src = basis.field(k).values;
    for (std::size_t n = 0; n < src.size(); ++n) out.values[n] += c * src[n];
  }
  return out;
}

inline ComplexField synthesize(const ModalVector& coeffs, const std::vector<LPMode>& modes,
                               const FiberSpec& spec, const Grid& grid) {
  return synthesize(coeffs, ModeBasis(spec, modes, grid));
}

}  // namespace oamcrypt
