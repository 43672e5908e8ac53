#include "ign/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ign/error.hpp"

namespace ign {

namespace {

void require_square(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << " must be square and nonempty, got " << m.rows() << "x" << m.cols();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

bool symmetric_within(const Eigen::Ref<const Matrix>& h, double rtol) {
  const double scale = h.cwiseAbs().maxCoeff();
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  return asym <= rtol * scale;
}

Matrix inverse_with_threshold(const Matrix& h, double rtol) {
  const Index d = h.rows();
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::SingularGram, "Cholesky factorization of the Gram matrix failed");
  }
  Matrix g = llt.solve(Matrix::Identity(d, d));
  g = (0.5 * (g + g.transpose())).eval();
  if (!all_finite(g)) {
    fail(ErrorCode::SingularGram, "Gram inverse is not finite");
  }
  const double norm_h = spd_spectral_norm(h);
  const double norm_g = spd_spectral_norm(g);
  if (norm_h <= 0.0 || norm_g <= 0.0 || 1.0 / norm_g <= rtol * norm_h) {
    std::ostringstream os;
    os << "sigma_min(H) ~ " << (norm_g > 0.0 ? 1.0 / norm_g : 0.0) << " <= " << rtol
       << " * ||H|| = " << rtol * norm_h;
    fail(ErrorCode::SingularGram, os.str());
  }
  return g;
}

}  // namespace

void symmetrize_from_lower(Matrix& m) {
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
}

GramInverse gram_and_inverse_from_columns(const Eigen::Ref<const Matrix>& gradients,
                                          double rtol) {
  const Index d = gradients.rows();
  const Index n = gradients.cols();
  if (d == 0) fail(ErrorCode::DimensionMismatch, "empty Jacobian");
  if (!all_finite(gradients)) fail(ErrorCode::NonFinite, "Jacobian has non-finite entries");
  if (n < d) {
    std::ostringstream os;
    os << "Jacobian has " << n << " rows for " << d << " unknowns; Gram matrix is singular";
    fail(ErrorCode::SingularGram, os.str());
  }
  GramInverse out;
  out.gram = Matrix::Zero(d, d);
  out.gram.selfadjointView<Eigen::Lower>().rankUpdate(gradients);
  symmetrize_from_lower(out.gram);
  out.inverse = inverse_with_threshold(out.gram, rtol);
  return out;
}

GramInverse gram_and_inverse(const Eigen::Ref<const Matrix>& jacobian, double rtol) {
  return gram_and_inverse_from_columns(jacobian.transpose(), rtol);
}

Matrix invert_spd(const Eigen::Ref<const Matrix>& h, double rtol) {
  require_square(h, "Gram matrix");
  if (!all_finite(h)) fail(ErrorCode::NonFinite, "Gram matrix has non-finite entries");
  Matrix sym = 0.5 * (h + h.transpose());
  return inverse_with_threshold(sym, rtol);
}

Matrix smw_update(const Eigen::Ref<const Matrix>& g, const Eigen::Ref<const Matrix>& u,
                  const Eigen::Ref<const Matrix>& v, double guard_rtol) {
  require_square(g, "G");
  if (u.rows() != g.rows() || v.rows() != g.rows() || u.cols() != v.cols()) {
    fail(ErrorCode::DimensionMismatch, "U and V must both be d x p");
  }
  const Index p = u.cols();
  if (p == 0) return g;

  const Matrix gu = g * u;
  const Matrix vtg = v.transpose() * g;
  Matrix inner = Matrix::Identity(p, p);
  inner.noalias() += v.transpose() * gu;

  const Vector sv = Eigen::BDCSVD<Matrix>(inner).singularValues();
  const double norm_m = sv.maxCoeff();
  const double smin = sv.minCoeff();
  if (!(smin >= guard_rtol * std::max(1.0, norm_m))) {
    std::ostringstream os;
    os << "sigma_min(I + V^T G U) = " << smin << " with ||M|| = " << norm_m;
    fail(ErrorCode::InnerMatrixSingular, os.str());
  }
  Matrix out = g;
  out.noalias() -= gu * inner.partialPivLu().solve(vtg);
  return out;
}

Matrix smw_update_signed(const Eigen::Ref<const Matrix>& g, const Eigen::Ref<const Matrix>& v,
                         std::span<const double> signs, double guard_rtol) {
  require_square(g, "G");
  const Index p = v.cols();
  if (v.rows() != g.rows() || static_cast<Index>(signs.size()) != p) {
    fail(ErrorCode::DimensionMismatch, "V must be d x p with p signs");
  }
  if (p == 0) return g;

  const Matrix w = g * v;
  Matrix inner = v.transpose() * w;
  inner = (0.5 * (inner + inner.transpose())).eval();
  for (Index j = 0; j < p; ++j) inner(j, j) += signs[static_cast<std::size_t>(j)];

  const Vector sv = Eigen::BDCSVD<Matrix>(inner).singularValues();
  const double norm_m = sv.maxCoeff();
  const double smin = sv.minCoeff();
  if (!(smin >= guard_rtol * std::max(1.0, norm_m))) {
    std::ostringstream os;
    os << "sigma_min(I + V^T G U) = " << smin << " with ||M|| = " << norm_m;
    fail(ErrorCode::InnerMatrixSingular, os.str());
  }
  const Matrix z = inner.partialPivLu().solve(Matrix(w.transpose()));
  Matrix out = g;
  out.noalias() -= w * z;
  out = (0.5 * (out + out.transpose())).eval();
  return out;
}

Vector solve_spd(const Eigen::Ref<const Matrix>& h, const Eigen::Ref<const Vector>& b) {
  require_square(h, "H");
  if (b.size() != h.rows()) fail(ErrorCode::DimensionMismatch, "right-hand side length");
  if (!all_finite(h) || !all_finite(b)) fail(ErrorCode::NonFinite, "non-finite input to solve_spd");
  if (!symmetric_within(h, kSymmetryRtol)) fail(ErrorCode::NotSPD, "matrix is not symmetric");
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotSPD, "Cholesky factorization failed");
  return llt.solve(b);
}

double smallest_singular_value(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return Eigen::BDCSVD<Matrix>(m).singularValues().minCoeff();
}

double spd_spectral_norm(const Eigen::Ref<const Matrix>& h, int krylov_dim, double rtol) {
  const Index d = h.rows();
  if (d == 0) return 0.0;
  const Index m = std::min<Index>(d, std::max(krylov_dim, 1));
  Matrix q(d, m);
  Vector alpha = Vector::Zero(m);
  Vector beta = Vector::Zero(m);
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = 1.0 + 0.1 * static_cast<double>(i % 7);
  q.col(0) = v.normalized();
  Index used = 0;
  for (Index j = 0; j < m; ++j) {
    Vector w = h * q.col(j);
    alpha(j) = q.col(j).dot(w);
    // two Gram-Schmidt sweeps keep the basis orthogonal in floating point
    for (int sweep = 0; sweep < 2; ++sweep) {
      w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
    }
    used = j + 1;
    const double b = w.norm();
    if (j + 1 == m || b <= rtol * std::max(std::abs(alpha(j)), 1e-300)) break;
    beta(j) = b;
    q.col(j + 1) = w / b;
  }
  if (alpha.head(used).cwiseAbs().maxCoeff() == 0.0 && beta.head(used).maxCoeff() == 0.0) {
    return 0.0;
  }
  Matrix t = Matrix::Zero(used, used);
  t.diagonal() = alpha.head(used);
  if (used > 1) {
    t.diagonal(1) = beta.head(used - 1);
    t.diagonal(-1) = beta.head(used - 1);
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> es(t, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues()(used - 1));
}

double inverse_drift(const Eigen::Ref<const Matrix>& g, const Eigen::Ref<const Matrix>& h) {
  Matrix gh = g * h;
  gh.diagonal().array() -= 1.0;
  return gh.cwiseAbs().maxCoeff();
}

}  // namespace ign
