// betaflow: spectral decompositions with path-continuity conventions, frame
// re-orthonormalization, and conjugation helpers.
#pragma once

#include "betaflow/types.hpp"

#include <optional>
#include <vector>

namespace betaflow {

struct SpectralDecomp {
  RealVector lambda;  // ascending
  Matrix frame;       // unitary/orthogonal, columns are eigenvectors
};

// Eigendecomposition of a Hermitian (or real symmetric) matrix.
//
// Eigenvalues come back ascending. Column phases follow the previous frame
// when one is given: each column is rotated (sign-flipped in the symmetric
// sector) to maximize the real part of its overlap with the matching previous
// column. Without a previous frame, the entry of largest magnitude in each
// column is made real and positive. Throws on NaN or non-square input, and if
// the reconstruction residual exceeds 1e-10 * (1 + ||M||_F).
SpectralDecomp spectral_decompose(const Matrix& m, Sector sector,
                                  const Matrix* prev_frame = nullptr);

// Rank-one spectral projectors v_i v_i^* in eigenvalue order.
std::vector<Matrix> spectral_projectors(const SpectralDecomp& decomp);

// Nearest unitary/orthogonal matrix (polar factor via SVD). Throws if the
// frame has collapsed (smallest singular value below 0.1).
Matrix reorthonormalize(const Matrix& q);

// Q M Q^*. Throws if shapes disagree.
Matrix conjugate(const Matrix& m, const Matrix& q);

}  // namespace betaflow
