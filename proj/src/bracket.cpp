#include "semiflow/bracket.hpp"

#include <algorithm>
#include <cmath>

#include "semiflow/errors.hpp"

namespace semiflow {

namespace {
constexpr double kTieTol = 1e-12;
}

double bracket(const GridFunction& x, const GridFunction& y, BracketSide side) {
  require_compatible(x, y, "bracket");

  if (x.geometry().norm_tag == NormTag::l2) {
    double nx = x.l2_norm();
    if (nx == 0.0) return side == BracketSide::plus ? y.l2_norm() : -y.l2_norm();
    return dot(x, y) / nx;
  }

  double nx = x.sup_norm();
  if (nx <= kTieTol) return side == BracketSide::plus ? y.sup_norm() : -y.sup_norm();

  bool first = true;
  double extremum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::fabs(x[i]) < nx - kTieTol) continue;
    double candidate = (x[i] > 0.0 ? 1.0 : -1.0) * y[i];
    if (first) {
      extremum = candidate;
      first = false;
    } else if (side == BracketSide::plus) {
      extremum = std::max(extremum, candidate);
    } else {
      extremum = std::min(extremum, candidate);
    }
  }
  return extremum;
}

}  // namespace semiflow
