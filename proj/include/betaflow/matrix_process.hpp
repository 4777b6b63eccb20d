// betaflow: the coin-switched matrix diffusion and its eigenvalue/eigenframe
// extraction.
//
// Between block boundaries k/n the process takes m Euler substeps of
//   M' = e^{-gamma*dt} M + increment,
// where the increment is a full Hermitian Gaussian increment on blocks whose
// coin is 1 and a frozen-frame diagonal increment (noise commuting with the
// spectral projectors computed at the block start) on blocks whose coin is 0.
#pragma once

#include "betaflow/linalg.hpp"
#include "betaflow/noise.hpp"
#include "betaflow/types.hpp"

#include <cstdint>
#include <vector>

namespace betaflow {

struct MatrixProcessConfig {
  int d = 2;
  Sector sector = Sector::hermitian;
  double p = 0.5;      // coin probability per block
  double gamma = 1.0;  // OU damping rate
  double n = 100.0;    // block rate: blocks are [k/n, (k+1)/n)
  int m = 10;          // substeps per block, dt = 1/(n*m)
  double T = 1.0;      // horizon; n*T must be an integer count of blocks
  Matrix M0;           // start matrix; empty means zero
  std::uint64_t subtag = 0;

  // Raw matrix states kept every k-th block boundary (0: endpoints only).
  std::size_t state_stride_blocks = 0;
  // Spectral snapshots kept every k-th block boundary (0: endpoints only).
  std::size_t snapshot_stride_blocks = 1;
  bool snapshot_frames = false;  // keep continuity-selected frames in snapshots
};

struct MatrixStateRecord {
  double time = 0.0;
  Matrix M;
};

struct MatrixSnapshot {
  double time = 0.0;
  RealVector lambda;  // ascending
  Matrix frame;       // empty unless snapshot_frames was set
};

struct MatrixPathResult {
  std::vector<MatrixStateRecord> states;
  std::vector<MatrixSnapshot> snapshots;
  std::vector<std::uint8_t> coins;  // one per block
  Matrix final_matrix;
  // Gap bookkeeping over every internal decomposition (snapshots and frozen
  // frames). Gaps below 1e-14 are counted, never dropped.
  double min_gap_seen = 0.0;
  std::size_t tiny_gap_events = 0;
};

// One substep of the damped diffusion: e^{-gamma*dt} M + increment.
Matrix step_matrix(const Matrix& M, double gamma, double dt, const Matrix& increment);

// Runs ceil(n*T) blocks from M0. Coins come from the stream's coin source;
// Gaussian increments from matrix_gauss (coin 1) and eigen_gauss (coin 0)
// substreams indexed by global substep. Decomposition failures are rethrown
// with the block index attached.
MatrixPathResult simulate_matrix_path(const MatrixProcessConfig& cfg,
                                      const NoiseStream& stream);

struct EigenFramePath {
  std::vector<double> times;
  std::vector<RealVector> lambdas;  // ascending at every time
  std::vector<Matrix> frames;       // empty when frames were not requested
  double min_gap = 0.0;
};

// Ordered eigenvalues (and optionally continuity-selected frames, each phased
// against the previous one) along a sequence of stored matrix states.
EigenFramePath extract_eigen_path(const std::vector<MatrixStateRecord>& states,
                                  Sector sector, bool with_frames = true);

}  // namespace betaflow
