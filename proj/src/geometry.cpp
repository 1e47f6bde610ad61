#include "synloc/geometry.hpp"

#include <cmath>

namespace synloc {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::optional<LinearizedRange> linearize(const Vec2& xi_hat, const Vec2& xj_hat) {
  const double d = distance(xi_hat, xj_hat);
  if (d <= kMinSeparation) {
    return std::nullopt;
  }
  return LinearizedRange{d, (xi_hat.x - xj_hat.x) / d, (xi_hat.y - xj_hat.y) / d};
}

}  // namespace synloc
