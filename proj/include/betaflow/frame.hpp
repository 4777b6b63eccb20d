// betaflow: eigenvector frame flow conditional on an eigenvalue path, the
// collision time change, and the planar rotation law at collisions.
#pragma once

#include "betaflow/linalg.hpp"
#include "betaflow/noise.hpp"
#include "betaflow/particle.hpp"
#include "betaflow/types.hpp"

#include <cstdint>
#include <vector>

namespace betaflow {

// One step of the frame flow at fixed eigenvalues.
//
// Draws dw_ij ~ N(0, weight*dt) per pair (complex in the hermitian sector,
// conjugate-paired), assembles the skew generator R with R(j,i) =
// dw_ij/(lambda_i-lambda_j), subtracts the diagonal correction
// (beta/2)*weight*dt*sum_j 1/(lambda_i-lambda_j)^2, and returns the polar
// re-projection of O*exp(R - correction). `weight` is the block coin for
// pre-limit runs and p for limit runs; weight 0 returns O bit-identically.
// When given, ito_accum(i) accumulates the correction applied to column i.
// Throws when the smallest gap is below 10*sqrt(dt) (shrink dt or hand off
// to the planar collision model).
Matrix step_frame(const Matrix& O, const RealVector& lambda, Sector sector, double weight,
                  double dt, Draw& g, RealVector* ito_accum = nullptr);

struct FrameSimConfig {
  Sector sector = Sector::hermitian;
  double weight = 1.0;                   // constant weight; p for limit runs
  std::vector<std::uint8_t> cell_coins;  // per-cell weights for pre-limit runs (optional)
  Matrix O0;                             // start frame; empty means identity
  NoiseSource source = NoiseSource::frame_gauss;
  std::uint64_t subtag = 0;
  double stiffness_factor = 10.0;          // require gap >= factor*sqrt(substep)
  std::size_t max_substeps_per_cell = 65536;
  std::size_t record_stride = 1;  // keep every k-th grid point (first/last always)
};

enum class FrameEndCause { horizon, stiffness, collision };

struct FramePath {
  std::vector<double> times;
  std::vector<Matrix> frames;
  RealVector ito_correction;  // accumulated diagonal correction per column
  double max_group_residual = 0.0;
  FrameEndCause end_cause = FrameEndCause::horizon;
  double end_time = 0.0;
};

// Integrates the frame flow along lambda_path (eigenvalues held constant on
// each grid cell, frame noise independent of the eigenvalue noise). Each cell
// gets its own draw substream indexed by cell; cells subdivide as needed to
// keep substeps below (gap/stiffness_factor)^2 and the run ends early, with
// the cause marked, when a cell would need more than max_substeps_per_cell
// substeps or the eigenvalues stop being strictly increasing.
FramePath simulate_frame_path(const FrameSimConfig& cfg, const ParticlePath& lambda_path,
                              const NoiseStream& stream);

// Cumulative clock phi(t) = integral of gap^{-2} ds, by trapezoid on the
// sample grid. Throws on nonpositive gaps or a non-monotone grid.
struct TimeChange {
  std::vector<double> times;
  std::vector<double> phi;  // phi.front() == 0, nondecreasing

  double phi_at(double t) const;    // linear interpolation
  double inverse(double v) const;   // bisection + linear interpolation
};

TimeChange time_change(const std::vector<double>& times, const std::vector<double>& gaps);

// Planar rotation by angle sqrt(p)*B_s with B_s ~ N(0, s):
// [[cos, sin], [-sin, cos]]. s = 0 gives the identity.
RealMatrix collision_rotation_sample(double p, double s, Draw& g);

struct CollisionFrameStats {
  std::vector<double> etas;               // the sweep, decreasing
  std::vector<double> cauchy_increments;  // per consecutive eta pair, max over stable columns
  Matrix stable_basis;                    // stabilized columns at the smallest eta
  Matrix plane_basis;                     // orthonormal basis of the leftover plane
  double plane_residual = 0.0;  // norm of the colliding column's component along stable_basis
  double angle = 0.0;           // in-plane angle of the colliding column, in [0, 2*pi)
};

// Evaluates the frame path at times T1 - eta for a decreasing eta sweep,
// where T1 is lambda_path's first collision and (i_star, i_star+1) the
// colliding pair. Records the Cauchy increments of the non-colliding columns,
// the plane they leave behind, and the in-plane angle of column i_star at the
// smallest eta (real parts of the coordinates; meaningful for the symmetric
// sector). Throws when the path has no collision or the sweep leaves the
// frame grid.
CollisionFrameStats collision_subspace_stats(const FramePath& frames,
                                             const ParticlePath& lambda_path, int i_star,
                                             const std::vector<double>& eta_sweep);

}  // namespace betaflow
