// betaflow: interacting-particle SDE integrators: the limiting system, the
// coin-switched pre-limit system, and the restart scheme, plus the collision
// bookkeeping shared by the experiments.
#pragma once

#include "betaflow/noise.hpp"
#include "betaflow/types.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace betaflow {

// Drift of the limiting system at coupling c (= p*beta in the limit, or
// beta*eps for the pre-limit system): -gamma*lambda_i + c * sum_j 1/(l_i-l_j).
// Throws if two coordinates coincide exactly.
RealVector dyson_drift(const RealVector& lambda, double coupling, double gamma);

// Pair-spread statistic over an index subset: sum over ordered pairs (both
// orders) of (lambda_i - lambda_j)^2. Throws unless the subset has at least
// two distinct indices. The one-argument form uses every coordinate.
double s_statistic(const RealVector& lambda, const std::vector<int>& indices);
double s_statistic(const RealVector& lambda);

double min_adjacent_gap(const RealVector& lambda);

// Index i of the smallest adjacent gap lambda_{i+1}-lambda_i, provided that
// gap is below tol; -1 otherwise. Ties break toward the smallest index.
int detect_collision(const RealVector& lambda, double tol);

// Constant in the restart-scheme coupling bound: sqrt(d(d+1)(2d+1)/6).
double delta_coupling_constant(int d);

struct StepControl {
  double safety = 0.25;   // require |drift_i|*dt <= safety * min adjacent gap
  int max_halvings = 10;  // dt floor = dt / 2^max_halvings
};

struct StepOutcome {
  int deepest = 0;          // deepest halving level used
  bool underflow = false;   // floor reached with the bound still violated
  double clock = 0.0;       // accumulated sum of dt_exec / min_gap^2
  int tight_index = -1;     // location of the tight gap when underflow fired
};

// One adaptive macro step of length dt. Noise comes sequentially from `g`:
// d gaussians for the whole-step increment, then d more per bridge split, in
// a fixed order. The state is sorted after every substep. On underflow the
// substep is executed at the floor size anyway, so a genuine collision shows
// up as a crossing/reflection rather than a blowup.
RealVector step_particles(RealVector lambda, double coupling, double gamma, double dt,
                          Draw& g, const StepControl& ctl, StepOutcome* out = nullptr);

// How macro-step noise is addressed. `sequential` draws in execution order
// (one substream per macro step). `addressed` allocates increments on the
// dyadic tree of each macro step with bridge splitting, so runs that halve
// differently (different coupling, different restart times) still consume
// identical Brownian paths.
enum class NoiseMode { sequential, addressed };

struct ParticleSimConfig {
  int d = 2;
  double gamma = 1.0;
  double T = 1.0;
  double dt = 1e-3;  // macro grid step
  RealVector lambda0;
  StepControl ctl;
  NoiseSource source = NoiseSource::particle_gauss;
  std::uint64_t subtag = 0;
  NoiseMode mode = NoiseMode::sequential;
  std::size_t record_stride = 1;  // keep every k-th grid point (first/last always)
  // When > 0, the first macro step whose state has a gap below this tolerance
  // (or that bottomed out the step-size floor) is recorded as the first
  // collision; with stop_at_collision the path then ends there.
  double collision_tol = 0.0;
  bool stop_at_collision = false;
};

struct ParticlePath {
  std::vector<double> times;
  std::vector<RealVector> states;  // sorted ascending at every point
  // Cumulative time-change integral sum dt_exec / min_gap^2 at the executed
  // substep resolution, one entry per recorded time (0 at the start).
  std::vector<double> clock;
  // Smallest adjacent gap over every executed substep state, not just the
  // recorded ones.
  double min_gap_seen = std::numeric_limits<double>::infinity();
  bool any_underflow = false;
  int deepest_halving = 0;
  double first_collision_time = -1.0;  // negative: no collision detected
  int first_collision_index = -1;
  bool stopped_at_collision = false;

  bool collided() const { return first_collision_index >= 0; }
};

ParticlePath simulate_limit_path(const ParticleSimConfig& cfg, double coupling,
                                 const NoiseStream& stream);

// Pre-limit system: drift coupling is base_beta * eps(t) with eps from the
// block-switched coin schedule. cfg.dt must divide the block length 1/n.
ParticlePath simulate_prelimit_path(const ParticleSimConfig& cfg, double base_beta,
                                    const CoinSchedule& coins, const NoiseStream& stream);

struct CollisionEvent {
  double time = 0.0;
  int index = -1;  // colliding adjacent pair (index, index+1)
  std::size_t ordinal = 0;
  enum class Kind { gap_below_tol, dt_underflow } kind = Kind::gap_below_tol;
  double shift = 0.0;  // restart delta (0 when no restart was applied)
};

struct DeltaPathResult {
  ParticlePath path;
  std::vector<CollisionEvent> events;
};

// Restart scheme: runs the limiting dynamics and, whenever a collision is
// detected (gap below collision_tol, or step-size underflow at the floor),
// shifts lambda_i by (i+1)*delta (1-based index times delta), which widens
// every adjacent gap by exactly delta. Aborts past max_restarts. The config's
// own collision_tol/stop_at_collision must be left disabled; detection here
// is driven by the explicit collision_tol argument.
DeltaPathResult simulate_delta_process(const ParticleSimConfig& cfg, double coupling,
                                       double delta, double collision_tol,
                                       std::size_t max_restarts, const NoiseStream& stream);

struct CoupledErrorResult {
  double sup_error = 0.0;        // sup over compared grid points of max_i |a_i - b_i|
  std::size_t cutoff_index = 0;  // number of grid points compared
  bool bound_checked = false;
  bool bound_ok = true;
  double worst_ratio = 0.0;  // max over grid of error / (c * delta_scale * (ell+1))
};

// Sup-distance between two paths on the same grid, truncated at the first
// point where either path has a gap below collision_tol (tol <= 0 disables
// truncation). When delta_scale > 0 and event lists are given, also checks the
// restart coupling bound c(d) * delta_scale * (ell+1) with ell the combined
// number of restarts so far.
CoupledErrorResult coupled_error(const ParticlePath& a, const ParticlePath& b,
                                 double collision_tol,
                                 const std::vector<CollisionEvent>* events_a = nullptr,
                                 const std::vector<CollisionEvent>* events_b = nullptr,
                                 double delta_scale = 0.0);

}  // namespace betaflow
