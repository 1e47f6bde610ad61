#include "synloc/gaussian.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace synloc {

Gaussian1D product(std::span<const Gaussian1D> msgs) {
  if (msgs.empty()) {
    throw std::invalid_argument("product: empty message list");
  }
  double prec = 0.0;
  double weighted = 0.0;
  for (const auto& g : msgs) {
    if (!(g.variance > 0.0)) {
      throw std::invalid_argument("product: non-positive variance");
    }
    prec += 1.0 / g.variance;
    weighted += g.mean / g.variance;
  }
  const double var = 1.0 / prec;
  return {var * weighted, var};
}

Gaussian1D product(std::initializer_list<Gaussian1D> msgs) {
  return product(std::span<const Gaussian1D>(msgs.begin(), msgs.size()));
}

std::optional<Gaussian1D> divide(const Gaussian1D& belief,
                                 const Gaussian1D& factor_msg) {
  const double extrinsic_prec = 1.0 / belief.variance - 1.0 / factor_msg.variance;
  if (!(extrinsic_prec > 0.0) || !std::isfinite(extrinsic_prec)) {
    return std::nullopt;
  }
  const double var = 1.0 / extrinsic_prec;
  const double mean =
      var * (belief.mean / belief.variance - factor_msg.mean / factor_msg.variance);
  if (!std::isfinite(var) || !std::isfinite(mean)) {
    return std::nullopt;
  }
  return Gaussian1D{mean, var};
}

Gaussian1D moment_match(const MomentIntegrand& fn) {
  namespace bq = boost::math::quadrature;
  const double lo = fn.center - 10.0 * fn.scale;
  const double hi = fn.center + 10.0 * fn.scale;
  if (!(fn.scale > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw MomentMatchFailure("moment_match: bad support window");
  }
  const auto& f = fn.density;
  auto integrate = [&](auto&& g) {
    double err = 0.0;
    return bq::gauss_kronrod<double, 61>::integrate(g, lo, hi, 15, 1e-8, &err);
  };
  const double m0 = integrate([&](double x) { return f(x); });
  const double m1 = integrate([&](double x) { return x * f(x); });
  const double m2 = integrate([&](double x) { return x * x * f(x); });
  if (!(m0 > 0.0) || !std::isfinite(m0) || !std::isfinite(m1) || !std::isfinite(m2)) {
    throw MomentMatchFailure("moment_match: non-finite or vanishing moments");
  }
  const double mean = m1 / m0;
  double var = m2 / m0 - mean * mean;
  if (!std::isfinite(mean) || !std::isfinite(var)) {
    throw MomentMatchFailure("moment_match: non-finite result");
  }
  // tolerate rounding-level negative variance from nearly-degenerate inputs
  if (var < 0.0) {
    if (var < -1e-10 * fn.scale * fn.scale) {
      throw MomentMatchFailure("moment_match: negative variance");
    }
    var = 0.0;
  }
  return {mean, var};
}

}  // namespace synloc
