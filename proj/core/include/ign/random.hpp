#pragma once

#include <cstdint>
#include <random>

#include "ign/linalg.hpp"

namespace ign {

/// Seeded generator used for every synthetic dataset and random fixture.
///
/// Engine: std::mt19937_64 (fully specified by the standard). Uniforms map
/// the top 53 bits of one draw onto [0, 1); normals use the Box-Muller
/// transform. Both mappings are written out here instead of using the
/// std:: distributions, whose algorithms are implementation-defined, so a
/// seed reproduces the same data on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// [0, 1)
  double canonical();
  /// [lo, hi)
  double uniform(double lo, double hi);
  double normal();
  std::uint64_t next() { return engine_(); }

  Vector uniform_vector(Index n, double lo, double hi);
  Matrix uniform_matrix(Index rows, Index cols, double lo, double hi);
  Matrix normal_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ign
