#ifndef SYNLOC_GAUSSIAN_HPP
#define SYNLOC_GAUSSIAN_HPP

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

namespace synloc {

// Scalar Gaussian message/belief. Variance 0 is reserved for exact
// (anchor/Dirac) quantities and never appears in engine-produced messages.
struct Gaussian1D {
  double mean = 0.0;
  double variance = 0.0;

  double precision() const { return 1.0 / variance; }
};

// Floor applied to engine-produced message variances so downstream
// divisions stay finite.
inline constexpr double kVarianceFloor = 1e-12;

struct MomentMatchFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Precision-weighted product of Gaussian densities. All variances must be
// strictly positive; callers substitute exact constants instead of passing
// Dirac factors.
Gaussian1D product(std::span<const Gaussian1D> msgs);
Gaussian1D product(std::initializer_list<Gaussian1D> msgs);

// Extrinsic division: belief with one factor message removed. Empty when
// the factor message carries at least as much precision as the belief.
std::optional<Gaussian1D> divide(const Gaussian1D& belief,
                                 const Gaussian1D& factor_msg);

inline double mmse_estimate(const Gaussian1D& belief) { return belief.mean; }

// Nonnegative integrable function together with the window the quadrature
// runs on: [center - 10*scale, center + 10*scale].
struct MomentIntegrand {
  std::function<double(double)> density;
  double center = 0.0;
  double scale = 1.0;
};

// First two moments of the (unnormalized) integrand, by adaptive
// Gauss-Kronrod quadrature to relative tolerance 1e-8.
Gaussian1D moment_match(const MomentIntegrand& fn);

}  // namespace synloc

#endif
