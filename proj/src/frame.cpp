// betaflow: frame flow integration and collision-frame statistics.

#include "betaflow/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace betaflow {

namespace {

constexpr double kTwoPi = 6.283185307179586;

void check_skew(const Matrix& r) {
  double scale = 1.0 + r.norm();
  if ((r + r.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::logic_error("step_frame: noise generator lost skew-hermitian symmetry");
}

}  // namespace

Matrix step_frame(const Matrix& O, const RealVector& lambda, Sector sector, double weight,
                  double dt, Draw& g, RealVector* ito_accum) {
  int d = static_cast<int>(O.rows());
  if (O.cols() != d || d < 1) throw std::invalid_argument("step_frame: frame must be square");
  if (lambda.size() != d) throw std::invalid_argument("step_frame: eigenvalue count mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("step_frame: dt must be positive");
  if (!(weight >= 0.0 && weight <= 1.0))
    throw std::invalid_argument("step_frame: weight must lie in [0,1]");
  if (weight == 0.0) return O;
  if (d == 1) return O;

  for (int i = 0; i + 1 < d; ++i) {
    if (!(lambda(i + 1) > lambda(i)))
      throw std::invalid_argument("step_frame: eigenvalues must be strictly increasing");
  }
  double gmin = min_adjacent_gap(lambda);
  if (gmin < 10.0 * std::sqrt(dt))
    throw std::runtime_error(
        "step_frame: smallest gap below 10*sqrt(dt); shrink dt or hand off to the planar "
        "collision model");

  double beta = static_cast<double>(beta_of(sector));
  double v = weight * dt;
  double sd = std::sqrt(v);

  Matrix r = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Complex dw = sector == Sector::hermitian ? sd * g.gaussian_complex()
                                               : Complex(sd * g.gaussian(), 0.0);
      double den = lambda(i) - lambda(j);
      Complex entry = dw / den;
      r(j, i) = entry;
      r(i, j) = -std::conj(entry);
    }
  }
  check_skew(r);

  for (int i = 0; i < d; ++i) {
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      double gap = lambda(i) - lambda(j);
      sum += 1.0 / (gap * gap);
    }
    double corr = 0.5 * beta * v * sum;
    r(i, i) = Complex(-corr, 0.0);
    if (ito_accum != nullptr) {
      if (ito_accum->size() != d)
        throw std::invalid_argument("step_frame: accumulator size mismatch");
      (*ito_accum)(i) += corr;
    }
  }

  Matrix update = r.exp();
  return reorthonormalize(O * update);
}

FramePath simulate_frame_path(const FrameSimConfig& cfg, const ParticlePath& lambda_path,
                              const NoiseStream& stream) {
  if (lambda_path.times.size() < 2 || lambda_path.states.size() != lambda_path.times.size())
    throw std::invalid_argument("simulate_frame_path: eigenvalue path needs at least two points");
  int d = static_cast<int>(lambda_path.states.front().size());
  std::size_t cells = lambda_path.times.size() - 1;
  if (!cfg.cell_coins.empty() && cfg.cell_coins.size() < cells)
    throw std::invalid_argument("simulate_frame_path: cell_coins shorter than the grid");

  Matrix O;
  if (cfg.O0.size() == 0) {
    O = Matrix::Identity(d, d);
  } else {
    if (cfg.O0.rows() != d || cfg.O0.cols() != d)
      throw std::invalid_argument("simulate_frame_path: O0 shape mismatch");
    O = cfg.O0;
  }

  FramePath out;
  out.ito_correction = RealVector::Zero(d);
  out.times.push_back(lambda_path.times.front());
  out.frames.push_back(O);
  out.end_time = lambda_path.times.front();

  auto residual = [&](const Matrix& q) {
    return (q.adjoint() * q - Matrix::Identity(d, d)).norm();
  };
  out.max_group_residual = residual(O);

  for (std::size_t k = 0; k < cells; ++k) {
    double h = lambda_path.times[k + 1] - lambda_path.times[k];
    if (!(h > 0.0)) throw std::invalid_argument("simulate_frame_path: grid must increase");
    const RealVector& lam = lambda_path.states[k];
    double w = cfg.cell_coins.empty() ? cfg.weight
                                      : static_cast<double>(cfg.cell_coins[k]) * cfg.weight;

    if (w > 0.0 && d > 1) {
      double gmin = min_adjacent_gap(lam);
      if (!(gmin > 0.0)) {
        out.end_cause = FrameEndCause::collision;
        return out;
      }
      // Substeps small enough that step_frame's stiffness guard holds.
      double dt_max = (gmin / cfg.stiffness_factor) * (gmin / cfg.stiffness_factor);
      std::size_t nsub = 1;
      if (dt_max < h) {
        double need = std::ceil(h / (0.99 * dt_max));
        if (need > static_cast<double>(cfg.max_substeps_per_cell)) {
          out.end_cause = FrameEndCause::stiffness;
          return out;
        }
        nsub = static_cast<std::size_t>(need);
      }
      double dt_s = h / static_cast<double>(nsub);
      Draw g = stream.open(cfg.source, cfg.subtag, k);
      for (std::size_t s = 0; s < nsub; ++s)
        O = step_frame(O, lam, cfg.sector, w, dt_s, g, &out.ito_correction);
      out.max_group_residual = std::max(out.max_group_residual, residual(O));
    }

    out.end_time = lambda_path.times[k + 1];
    bool record = cfg.record_stride > 0 && ((k + 1) % cfg.record_stride == 0);
    if (record || k + 1 == cells) {
      out.times.push_back(lambda_path.times[k + 1]);
      out.frames.push_back(O);
    }
  }
  return out;
}

double TimeChange::phi_at(double t) const {
  if (times.empty()) throw std::logic_error("TimeChange: empty");
  if (t <= times.front()) return phi.front();
  if (t >= times.back()) return phi.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times.begin());
  std::size_t lo = hi - 1;
  double frac = (t - times[lo]) / (times[hi] - times[lo]);
  return phi[lo] + frac * (phi[hi] - phi[lo]);
}

double TimeChange::inverse(double v) const {
  if (times.empty()) throw std::logic_error("TimeChange: empty");
  if (v <= phi.front()) return times.front();
  if (v >= phi.back()) return times.back();
  std::size_t lo = 0;
  std::size_t hi = phi.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (phi[mid] <= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double span = phi[hi] - phi[lo];
  double frac = span > 0.0 ? (v - phi[lo]) / span : 0.0;
  return times[lo] + frac * (times[hi] - times[lo]);
}

TimeChange time_change(const std::vector<double>& times, const std::vector<double>& gaps) {
  if (times.size() != gaps.size() || times.size() < 2)
    throw std::invalid_argument("time_change: need matching grids with at least two points");
  TimeChange out;
  out.times = times;
  out.phi.resize(times.size());
  out.phi[0] = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(gaps[k] > 0.0)) throw std::invalid_argument("time_change: gaps must be positive");
    if (k > 0) {
      double h = times[k] - times[k - 1];
      if (!(h > 0.0)) throw std::invalid_argument("time_change: times must increase");
      double a = 1.0 / (gaps[k - 1] * gaps[k - 1]);
      double b = 1.0 / (gaps[k] * gaps[k]);
      out.phi[k] = out.phi[k - 1] + 0.5 * h * (a + b);
    }
  }
  return out;
}

RealMatrix collision_rotation_sample(double p, double s, Draw& g) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("collision_rotation_sample: p must lie in [0,1]");
  if (!(s >= 0.0)) throw std::invalid_argument("collision_rotation_sample: s must be >= 0");
  double theta = s > 0.0 ? std::sqrt(p) * std::sqrt(s) * g.gaussian() : 0.0;
  RealMatrix rot(2, 2);
  rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return rot;
}

CollisionFrameStats collision_subspace_stats(const FramePath& frames,
                                             const ParticlePath& lambda_path, int i_star,
                                             const std::vector<double>& eta_sweep) {
  if (!lambda_path.collided())
    throw std::invalid_argument("collision_subspace_stats: path has no collision");
  if (frames.times.empty() || frames.frames.size() != frames.times.size())
    throw std::invalid_argument("collision_subspace_stats: malformed frame path");
  int d = static_cast<int>(frames.frames.front().rows());
  if (i_star < 0 || i_star + 1 >= d)
    throw std::invalid_argument("collision_subspace_stats: colliding pair out of range");
  if (eta_sweep.size() < 2)
    throw std::invalid_argument("collision_subspace_stats: sweep needs at least two etas");
  for (std::size_t k = 0; k + 1 < eta_sweep.size(); ++k) {
    if (!(eta_sweep[k] > eta_sweep[k + 1]) || !(eta_sweep.back() > 0.0))
      throw std::invalid_argument("collision_subspace_stats: etas must decrease and stay positive");
  }

  double t1 = lambda_path.first_collision_time;
  auto frame_before = [&](double t) -> const Matrix& {
    if (t < frames.times.front())
      throw std::invalid_argument("collision_subspace_stats: sweep leaves the frame grid");
    auto it = std::upper_bound(frames.times.begin(), frames.times.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - frames.times.begin());
    return frames.frames[idx - 1];
  };

  CollisionFrameStats out;
  out.etas = eta_sweep;
  std::vector<Matrix> snaps;
  snaps.reserve(eta_sweep.size());
  for (double eta : eta_sweep) snaps.push_back(frame_before(t1 - eta));

  std::vector<int> stable;
  for (int j = 0; j < d; ++j) {
    if (j != i_star && j != i_star + 1) stable.push_back(j);
  }

  for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
    double worst = 0.0;
    for (int j : stable)
      worst = std::max(worst, (snaps[k + 1].col(j) - snaps[k].col(j)).norm());
    out.cauchy_increments.push_back(worst);
  }

  const Matrix& last = snaps.back();
  Matrix v(d, static_cast<int>(stable.size()));
  for (std::size_t c = 0; c < stable.size(); ++c) v.col(c) = last.col(stable[c]);
  out.stable_basis = v;

  if (stable.empty()) {
    // d == 2: the plane is the whole space.
    out.plane_basis = Matrix::Identity(d, 2);
  } else {
    // Orthonormal basis of the leftover plane: trailing columns of a full QR
    // of the stabilized columns.
    Eigen::HouseholderQR<Matrix> qr(v);
    Matrix q = qr.householderQ();
    out.plane_basis = q.rightCols(2);
  }

  Eigen::VectorXcd phi = last.col(i_star);
  out.plane_residual = v.size() > 0 ? (v.adjoint() * phi).norm() : 0.0;
  Complex c1 = (out.plane_basis.col(0).adjoint() * phi)(0, 0);
  Complex c2 = (out.plane_basis.col(1).adjoint() * phi)(0, 0);
  double angle = std::atan2(c2.real(), c1.real());
  if (angle < 0.0) angle += kTwoPi;
  out.angle = angle;
  return out;
}

}  // namespace betaflow
