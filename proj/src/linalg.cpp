// betaflow: Eigen-backed spectral routines with the phase conventions the
// path-valued simulations rely on.

#include "betaflow/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace betaflow {

namespace {

void check_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
  if (!m.allFinite())
    throw std::invalid_argument(std::string(who) + ": matrix has NaN or Inf entries");
}

// Rotate column j of `frame` by a unit phase. In the symmetric sector only
// +-1 is allowed so real frames stay real.
void apply_phase(Matrix& frame, int j, Complex z, Sector sector) {
  double mag = std::abs(z);
  if (mag < 1e-300) return;
  if (sector == Sector::symmetric) {
    if (z.real() < 0.0) frame.col(j) *= -1.0;
  } else {
    frame.col(j) *= std::conj(z) / mag;
  }
}

}  // namespace

SpectralDecomp spectral_decompose(const Matrix& m, Sector sector, const Matrix* prev_frame) {
  check_square(m, "spectral_decompose");
  Matrix h = 0.5 * (m + m.adjoint());

  SpectralDecomp out;
  if (sector == Sector::symmetric) {
    // The complex solver returns arbitrarily-phased columns even for real
    // input, and sign flips cannot undo a phase. Solve in real arithmetic,
    // which also yields a real orthonormal basis on degenerate spectra.
    if (h.imag().cwiseAbs().maxCoeff() > 1e-12 * (1.0 + h.norm()))
      throw std::invalid_argument("spectral_decompose: symmetric sector requires a real matrix");
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.real());
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("spectral_decompose: eigensolver failed to converge");
    out.lambda = solver.eigenvalues();
    out.frame = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("spectral_decompose: eigensolver failed to converge");
    out.lambda = solver.eigenvalues();
    out.frame = solver.eigenvectors();
  }
  int d = static_cast<int>(m.rows());

  if (prev_frame != nullptr) {
    if (prev_frame->rows() != d || prev_frame->cols() != d)
      throw std::invalid_argument("spectral_decompose: previous frame shape mismatch");
    for (int j = 0; j < d; ++j) {
      Complex overlap = (prev_frame->col(j).adjoint() * out.frame.col(j))(0, 0);
      // Maximizing Re<prev, cur * z> over unit z picks z = conj(overlap)/|overlap|.
      apply_phase(out.frame, j, overlap, sector);
    }
  } else {
    for (int j = 0; j < d; ++j) {
      int k = 0;
      out.frame.col(j).cwiseAbs().maxCoeff(&k);
      apply_phase(out.frame, j, out.frame(k, j), sector);
    }
  }

  double residual = (h - out.frame * out.lambda.asDiagonal() * out.frame.adjoint()).norm();
  if (residual > 1e-10 * (1.0 + h.norm()))
    throw std::runtime_error("spectral_decompose: reconstruction residual too large");
  return out;
}

std::vector<Matrix> spectral_projectors(const SpectralDecomp& decomp) {
  int d = static_cast<int>(decomp.frame.cols());
  std::vector<Matrix> proj;
  proj.reserve(d);
  for (int i = 0; i < d; ++i) {
    proj.push_back(decomp.frame.col(i) * decomp.frame.col(i).adjoint());
  }
  return proj;
}

Matrix reorthonormalize(const Matrix& q) {
  check_square(q, "reorthonormalize");
  Eigen::JacobiSVD<Matrix> svd(q, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 0.1)
    throw std::runtime_error("reorthonormalize: frame collapsed (singular value below 0.1)");
  return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix conjugate(const Matrix& m, const Matrix& q) {
  check_square(m, "conjugate");
  check_square(q, "conjugate");
  if (q.rows() != m.rows()) throw std::invalid_argument("conjugate: shape mismatch");
  return q * m * q.adjoint();
}

}  // namespace betaflow
