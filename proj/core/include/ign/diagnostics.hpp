#pragma once

#include <string>
#include <vector>

#include "ign/residual_system.hpp"

namespace ign {

struct GradientMismatch {
  std::size_t component = 0;
  std::size_t point = 0;  // index into the checked points
  double error = 0.0;     // ||g - g_fd||
  double allowed = 0.0;   // rtol * (1 + ||g||)
};

/// Compares every component gradient with central differences at each
/// point; reports the pairs where ||g_i - fd_i|| > rtol (1 + ||g_i||).
std::vector<GradientMismatch> check_gradients(const ResidualSystem& sys,
                                              const std::vector<Vector>& points,
                                              double rtol = 1e-5);

std::string describe(const GradientMismatch& m);

}  // namespace ign
