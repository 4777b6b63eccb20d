// betaflow: shared scalar/matrix types and the symmetry-sector tag.
#pragma once

#include <Eigen/Core>
#include <complex>
#include <stdexcept>

namespace betaflow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Symmetry class of the matrix ensemble: real symmetric or complex Hermitian.
enum class Sector { symmetric, hermitian };

inline double beta_of(Sector s) { return s == Sector::symmetric ? 1.0 : 2.0; }

inline const char* sector_name(Sector s) {
  return s == Sector::symmetric ? "symmetric" : "hermitian";
}

// Average a matrix with its adjoint. Keeps roundoff from drifting a state
// matrix off the Hermitian manifold over long paths.
inline void hermitize(Matrix& m) {
  m = 0.5 * (m + m.adjoint()).eval();
}

}  // namespace betaflow
