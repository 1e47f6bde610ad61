#ifndef SYNLOC_GEOMETRY_HPP
#define SYNLOC_GEOMETRY_HPP

#include <optional>

namespace synloc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

// First-order expansion of the range ||x_i - x_j|| around the estimates
// (x_i_hat, x_j_hat): d_hat plus directional derivatives (lambda, gamma)
// with respect to node i's coordinates. lambda^2 + gamma^2 = 1.
struct LinearizedRange {
  double d_hat = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
};

// Estimates closer than this are treated as coincident (no direction).
inline constexpr double kMinSeparation = 1e-6;

// Empty on singular geometry (points closer than kMinSeparation); the
// caller skips the link for the iteration.
std::optional<LinearizedRange> linearize(const Vec2& xi_hat, const Vec2& xj_hat);

}  // namespace synloc

#endif
