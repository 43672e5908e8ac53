#include "ign/diagnostics.hpp"

#include <sstream>

namespace ign {

std::vector<GradientMismatch> check_gradients(const ResidualSystem& sys,
                                              const std::vector<Vector>& points, double rtol) {
  std::vector<GradientMismatch> out;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t i = 0; i < sys.components(); ++i) {
      const Vector analytic = sys.gradient(i, points[p]);
      const Vector numeric = finite_diff_gradient(sys, i, points[p]);
      const double err = (analytic - numeric).norm();
      const double allowed = rtol * (1.0 + analytic.norm());
      if (!(err <= allowed)) out.push_back({i, p, err, allowed});
    }
  }
  return out;
}

std::string describe(const GradientMismatch& m) {
  std::ostringstream os;
  os << "component " << m.component << " at point " << m.point << ": |g - fd| = " << m.error
     << " > " << m.allowed;
  return os.str();
}

}  // namespace ign
