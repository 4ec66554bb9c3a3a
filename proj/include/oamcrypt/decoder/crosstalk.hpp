#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oamcrypt/channel/channel.hpp"
#include "oamcrypt/channel/dataset.hpp"
#include "oamcrypt/common/rng.hpp"
#include "oamcrypt/mode/field.hpp"

namespace oamcrypt {

struct CrosstalkOptions {
  std::vector<int> inputs;     // transmitted LG charges (rows)
  std::vector<int> receivers;  // centered receiver LG charges (columns)
  double step_mm = 0.1;
  int grid_samples = 512;

  static CrosstalkOptions range(int l_min, int l_max, double step_mm = 0.1) {
    CrosstalkOptions o;
    for (int l = l_min; l <= l_max; ++l) {
      o.inputs.push_back(l);
      o.receivers.push_back(l);
    }
    o.step_mm = step_mm;
    return o;
  }
};

/// Modal-projection cross-talk: entry (i, j) is the mean over the strain
/// sweep of |<LG_j | Psi_out(LG_i)>|^2 on the pre-camera field, each row then
/// normalized to sum 1. Receiver beams are centered on the fiber axis with
/// the channel waist.
inline Eigen::MatrixXd raw_crosstalk(const FiberChannel& channel, const CrosstalkOptions& opt) {
  const double a = channel.spec().fiber.core_radius;
  const auto grid = Grid::square(opt.grid_samples, 8.0 * a);
  const ModeBasis out_basis(channel.spec().fiber, channel.modes(), grid);

  // <LG_j | LP_k> so that <LG_j | Psi> = overlap * c
  const auto nr = static_cast<Eigen::Index>(opt.receivers.size());
  const auto nm = static_cast<Eigen::Index>(out_basis.size());
  Eigen::MatrixXcd overlap(nr, nm);
  for (Eigen::Index j = 0; j < nr; ++j) {
    const auto lg = lg_field({opt.receivers[static_cast<std::size_t>(j)], 0, channel.spec().waist}, grid);
    for (Eigen::Index k = 0; k < nm; ++k)
      overlap(j, k) = inner_product(lg, out_basis.field(static_cast<std::size_t>(k)));
  }

  const auto sweep = displacement_sweep(opt.step_mm, channel.spec().max_displacement_mm);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(opt.inputs.size()), nr);
  for (std::size_t i = 0; i < opt.inputs.size(); ++i) {
    const auto coupled = channel.couple(channel.input_field({opt.inputs[i]}));
    for (std::size_t k = 0; k < sweep.size(); ++k) {
      auto rng = make_stream(channel.spec().seed, {"crosstalk/jitter", i, k});
      const auto out = channel.propagate(coupled, sweep[k], rng);
      m.row(static_cast<Eigen::Index>(i)) += (overlap * out.coeffs).cwiseAbs2().transpose();
    }
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double s = m.row(r).sum();
    if (s > 0.0) m.row(r) /= s;
  }
  return m;
}

}  // namespace oamcrypt
