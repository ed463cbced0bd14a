#include <cmath>

#include "nlab/kernels.hpp"
#include "nlab/norm_engine.hpp"

namespace nlab {

namespace {

constexpr std::size_t kZoomPoints = 11;

double ratio(const OperatorMatrix& t, const Eigen::VectorXd& x, double p) {
  const CVector xc = x.cast<Scalar>();
  const CVector y = t.entries() * xc;
  const auto w = t.grid()->weights();
  const auto n = static_cast<std::size_t>(x.size());
  return lp_norm(std::span<const Scalar>(y.data(), n), w, p) / lp_norm(std::span<const Scalar>(xc.data(), n), w, p);
}

}  // namespace

NormEstimate brute_force_norm(const OperatorMatrix& t, const Exponent& p, Extremum mode, std::size_t resolution,
                              int zoom_rounds) {
  const std::size_t n = t.size();
  if (n > 6) throw Error("brute_force_norm supports at most 6 cells");
  const bool maximize = mode == Extremum::Max;
  kernels::SphereSampleProblem problem{&t.entries(), t.grid()->weights(), p.value(), maximize, resolution};
  auto coarse = kernels::parallel::sample_sphere(problem);

  Eigen::VectorXd x = coarse.direction;
  double best = coarse.value;
  Eigen::Index pinned = 0;
  x.cwiseAbs().maxCoeff(&pinned);
  double h = 2.0 / static_cast<double>(resolution - 1);
  // Zoom: a local grid of kZoomPoints per free coordinate around the best
  // direction. The box shrinks by a factor 5 unless the best point sits on
  // its boundary, in which case it is re-centred at the same size.
  std::size_t per_round = 1;
  for (std::size_t i = 1; i < n; ++i) per_round *= kZoomPoints;
  for (int round = 0; round < zoom_rounds && n > 1; ++round) {
    const Eigen::VectorXd center = x;
    std::size_t best_idx = per_round;
    for (std::size_t idx = 0; idx < per_round; ++idx) {
      Eigen::VectorXd trial = center;
      std::size_t r = idx;
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        if (i == pinned) continue;
        const auto digit = static_cast<double>(r % kZoomPoints);
        r /= kZoomPoints;
        trial[i] += h * (2.0 * digit / static_cast<double>(kZoomPoints - 1) - 1.0);
      }
      const double v = ratio(t, trial, p.value());
      if (maximize ? v > best : v < best) {
        best = v;
        x = trial;
        best_idx = idx;
      }
    }
    bool on_edge = false;
    for (std::size_t r = best_idx, i = 1; best_idx < per_round && i < n; ++i, r /= kZoomPoints) {
      const std::size_t digit = r % kZoomPoints;
      on_edge = on_edge || digit == 0 || digit == kZoomPoints - 1;
    }
    if (!on_edge) h /= 5.0;
  }
  CVector w = x.cast<Scalar>();
  LpVector witness(t.grid(), w);
  witness = witness * (1.0 / lp_norm(witness, p));
  const double value = rayleigh_value(t, witness, p);
  return {value, maximize ? BoundKind::LowerBound : BoundKind::UpperBound, witness, "brute", 0};
}

}  // namespace nlab
