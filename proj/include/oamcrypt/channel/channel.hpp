#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oamcrypt/channel/camera.hpp"
#include "oamcrypt/common/rng.hpp"
#include "oamcrypt/mode/field.hpp"
#include "oamcrypt/mode/fiber.hpp"

namespace oamcrypt {

/// Coupling geometry and stochastic parameters of the strained fiber link.
struct ChannelSpec {
  FiberSpec fiber;
  double lateral_offset = 8e-6;  // meters, beam axis relative to fiber axis
  double waist = 3e-6;           // meters
  double theta_a = std::numbers::pi;
  double theta_b = std::numbers::pi;
  double jitter = 0.05;
  double max_displacement_mm = 50.0;
  std::uint64_t seed = 42;

  /// Default coupling: offset 1.6 a, waist 0.6 a.
  static ChannelSpec for_fiber(const FiberSpec& fiber, std::uint64_t seed = 42) {
    ChannelSpec c;
    c.fiber = fiber;
    c.lateral_offset = 1.6 * fiber.core_radius;
    c.waist = 0.6 * fiber.core_radius;
    c.seed = seed;
    return c;
  }

  void validate() const {
    fiber.validate();
    if (!(theta_a >= 0.0) || !(theta_b >= 0.0))
      throw std::invalid_argument("ChannelSpec: mixing strengths must be >= 0");
    if (!(jitter >= 0.0) || !(jitter < 1.0))
      throw std::invalid_argument("ChannelSpec: jitter must be in [0, 1)");
    if (!(max_displacement_mm > 0.0))
      throw std::invalid_argument("ChannelSpec: max displacement must be > 0");
    if (!(waist > 0.0)) throw std::invalid_argument("ChannelSpec: waist must be > 0");
  }
};

using CMatrix = Eigen::MatrixXcd;

/// Hermitian (G + G^H)/2 from standard complex Gaussian entries, scaled to
/// unit spectral radius.
inline CMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CMatrix g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
  CMatrix h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  if (radius > 0.0) h /= radius;
  return h;
}

/// exp(i H) for Hermitian H via its spectral decomposition.
inline CMatrix expi_hermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const auto& vecs = es.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const double lam = es.eigenvalues()[k];
    phases[k] = cplx(std::cos(lam), std::sin(lam));
  }
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

/// The simulated link: free-space injection into the fiber, strain-dependent
/// unitary mode mixing, and camera capture of the output face.
///
/// U(d, w) = exp(i (D + theta_a A + (d/d_max) theta_b B + eps R_w)), where D
/// holds the propagation phases beta*L wrapped to [-pi, pi), A and B are
/// fixed Hermitian matrices drawn from the master seed and R_w is drawn per
/// frame.
class FiberChannel {
 public:
  static constexpr std::string_view kJitterTag = "channel/jitter";
  static constexpr std::string_view kNoiseTag = "camera/noise";

  FiberChannel(ChannelSpec spec, CameraSpec camera, int coupling_samples = 512)
      : spec_(spec), camera_(camera) {
    spec_.validate();
    camera_.validate();
    modes_ = solve_lp_modes(spec_.fiber);
    const double a = spec_.fiber.core_radius;
    const double extent = std::max(6.0 * a, 2.0 * (std::abs(spec_.lateral_offset) + 3.0 * a));
    coupling_ = std::make_shared<ModeBasis>(spec_.fiber, modes_,
                                            Grid::square(coupling_samples, extent),
                                            Normalization::grid,
                                            Placement{-spec_.lateral_offset, 0.0});
    output_ = std::make_shared<ModeBasis>(spec_.fiber, modes_, camera_.grid(),
                                          Normalization::analytic);
    const auto n = static_cast<Eigen::Index>(modes_.size());
    phases_.resize(n);
    for (Eigen::Index k = 0; k < n; ++k)
      phases_[k] = std::remainder(modes_[static_cast<std::size_t>(k)].propagation_constant *
                                      spec_.fiber.length,
                                  2.0 * std::numbers::pi);
    auto rng_a = make_stream(spec_.seed, {"channel/mixing-a", 0, 0});
    auto rng_b = make_stream(spec_.seed, {"channel/mixing-b", 0, 0});
    mix_a_ = random_hermitian(n, rng_a);
    mix_b_ = random_hermitian(n, rng_b);
  }

  const ChannelSpec& spec() const { return spec_; }
  const CameraSpec& camera() const { return camera_; }
  const std::vector<LPMode>& modes() const { return modes_; }
  const ModeBasis& coupling_basis() const { return *coupling_; }
  const ModeBasis& output_basis() const { return *output_; }
  const Grid& coupling_grid() const { return coupling_->grid(); }
  const Eigen::VectorXd& propagation_phases() const { return phases_; }

  /// Equal-amplitude, zero-phase, unit-power superposition of centered LG
  /// beams with the channel waist. An empty charge list gives a zero field.
  ComplexField input_field(const std::vector<int>& charges, const Grid& grid) const {
    ComplexField f(grid);
    for (int l : charges) f += lg_field({l, 0, spec_.waist}, grid);
    normalize_power(f);
    return f;
  }
  ComplexField input_field(const std::vector<int>& charges) const {
    return input_field(charges, coupling_grid());
  }

  /// Shifts the beam by the lateral offset and projects onto the LP basis.
  ModalVector couple(const ComplexField& field) const {
    if (field.grid == coupling_->grid()) return decompose(field, *coupling_);
    return decompose(field, ModeBasis(spec_.fiber, modes_, field.grid, Normalization::grid,
                                      Placement{-spec_.lateral_offset, 0.0}));
  }

  /// The channel unitary at displacement d (mm) with jitter drawn from rng.
  CMatrix unitary(double displacement_mm, Rng& rng) const {
    if (!(displacement_mm >= 0.0) || !(displacement_mm <= spec_.max_displacement_mm))
      throw std::out_of_range("propagate: displacement " + std::to_string(displacement_mm) +
                              " mm outside [0, " + std::to_string(spec_.max_displacement_mm) +
                              "]");
    const auto n = static_cast<Eigen::Index>(modes_.size());
    CMatrix h = CMatrix(phases_.cast<cplx>().asDiagonal());
    h += spec_.theta_a * mix_a_;
    h += (displacement_mm / spec_.max_displacement_mm) * spec_.theta_b * mix_b_;
    if (spec_.jitter > 0.0) h += spec_.jitter * random_hermitian(n, rng);
    return expi_hermitian(h);
  }

  ModalVector propagate(const ModalVector& c, double displacement_mm, Rng& rng) const {
    if (static_cast<std::size_t>(c.coeffs.size()) != modes_.size())
      throw std::invalid_argument("propagate: modal vector length does not match mode count");
    return {c.labels, unitary(displacement_mm, rng) * c.coeffs};
  }

  /// Output-face field (camera grid) for a coupled modal vector.
  ComplexField output_field(const ModalVector& c, double displacement_mm,
                            const StreamKey& key) const {
    auto rng = make_stream(derive_seed(spec_.seed, key), {kJitterTag, 0, 0});
    return synthesize(propagate(c, displacement_mm, rng), *output_);
  }

  /// capture(synthesize(propagate(c, d))). The key's tag names the domain
  /// (dataset, transmission, ...) and (class id, frame index) the frame; the
  /// jitter and sensor-noise streams are derived from it.
  CameraFrame transmit_coupled(const ModalVector& c, double displacement_mm,
                               const StreamKey& key) const {
    const auto out = output_field(c, displacement_mm, key);
    auto noise = make_stream(derive_seed(spec_.seed, key), {kNoiseTag, 0, 0});
    auto frame = capture(out, camera_, noise);
    frame.meta = {static_cast<int>(key.class_id), displacement_mm, key.frame_index, spec_.seed};
    return frame;
  }

  CameraFrame transmit(const ComplexField& field, double displacement_mm,
                       const StreamKey& key) const {
    return transmit_coupled(couple(field), displacement_mm, key);
  }

 private:
  ChannelSpec spec_;
  CameraSpec camera_;
  std::vector<LPMode> modes_;
  std::shared_ptr<const ModeBasis> coupling_;
  std::shared_ptr<const ModeBasis> output_;
  Eigen::VectorXd phases_;
  CMatrix mix_a_;
  CMatrix mix_b_;
};

}  // namespace oamcrypt
