#pragma once

// Dense kernel for the Gram machinery: Gram construction and inversion,
// SPD solves, Sherman-Morrison-Woodbury inverse updates and the smallest
// singular value. Storage is Eigen's default column-major layout; all
// routines are single-threaded so results are bit-reproducible per build.

#include <Eigen/Dense>

#include <span>

namespace ign {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Rank deficiency threshold for Gram matrices, relative to ||H||_2.
inline constexpr double kGramSingularRtol = 1e-12;
/// Nonsingularity guard for the SMW inner matrix, relative to max(1, ||M||_2).
inline constexpr double kInnerSingularRtol = 1e-10;
/// Symmetry tolerance for matrices passed as SPD, relative to max |H_ij|.
inline constexpr double kSymmetryRtol = 1e-12;

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

struct GramInverse {
  Matrix gram;     // J^T J, exactly symmetric
  Matrix inverse;  // (J^T J)^{-1}, exactly symmetric
};

/// H = J^T J and G = H^{-1}. Throws SingularGram when J (n x d) does not have
/// full column rank, i.e. sigma_min(H) <= rtol * ||H||.
GramInverse gram_and_inverse(const Eigen::Ref<const Matrix>& jacobian,
                             double rtol = kGramSingularRtol);

/// Same as gram_and_inverse but from gradients stored as the columns of a
/// d x n matrix (the layout the solvers keep). H = A A^T.
GramInverse gram_and_inverse_from_columns(const Eigen::Ref<const Matrix>& gradients,
                                          double rtol = kGramSingularRtol);

/// Inverse of a symmetric positive definite matrix, with the same
/// singularity test as gram_and_inverse.
Matrix invert_spd(const Eigen::Ref<const Matrix>& h, double rtol = kGramSingularRtol);

/// G' = G - G U (I + V^T G U)^{-1} V^T G, i.e. (G^{-1} + U V^T)^{-1}.
/// Throws InnerMatrixSingular when sigma_min(I + V^T G U) < guard_rtol * max(1, ||M||).
Matrix smw_update(const Eigen::Ref<const Matrix>& g, const Eigen::Ref<const Matrix>& u,
                  const Eigen::Ref<const Matrix>& v, double guard_rtol = kInnerSingularRtol);

/// Symmetric form used by the incremental solvers, where U = V diag(signs)
/// and G is symmetric:  G' = (G^{-1} + V S V^T)^{-1} = G - W (S + V^T W)^{-1} W^T
/// with W = G V. S + V^T W has the singular values of I + V^T G U (S is
/// orthogonal), so the guard is identical to smw_update. Result is exactly
/// symmetric.
Matrix smw_update_signed(const Eigen::Ref<const Matrix>& g, const Eigen::Ref<const Matrix>& v,
                         std::span<const double> signs, double guard_rtol = kInnerSingularRtol);

/// Solve H x = b for symmetric positive definite H. Throws NotSPD.
Vector solve_spd(const Eigen::Ref<const Matrix>& h, const Eigen::Ref<const Vector>& b);

/// sigma_min(M) over the min(rows, cols) singular values; 0 for empty input.
double smallest_singular_value(const Eigen::Ref<const Matrix>& m);

/// Largest eigenvalue of a symmetric positive semidefinite matrix from a
/// Lanczos run with full reorthogonalization (deterministic start vector),
/// O(krylov_dim d^2). Never exceeds the true value; exact once
/// krylov_dim >= d, otherwise an estimate (about 1e-4 relative on dense
/// spectra at the default size). Only used for singularity thresholds.
double spd_spectral_norm(const Eigen::Ref<const Matrix>& h, int krylov_dim = 40,
                         double rtol = 1e-13);

/// max_ij |(G H - I)_ij|
double inverse_drift(const Eigen::Ref<const Matrix>& g, const Eigen::Ref<const Matrix>& h);

/// Copies the lower triangle onto the upper one.
void symmetrize_from_lower(Matrix& m);

}  // namespace ign
