// betaflow: integration of the coin-switched matrix diffusion.

#include "betaflow/matrix_process.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace betaflow {

namespace {

constexpr double kTinyGap = 1e-14;

void track_gaps(const RealVector& lambda, MatrixPathResult& out) {
  int d = static_cast<int>(lambda.size());
  for (int i = 0; i + 1 < d; ++i) {
    double g = lambda(i + 1) - lambda(i);
    out.min_gap_seen = std::min(out.min_gap_seen, g);
    if (g < kTinyGap) ++out.tiny_gap_events;
  }
}

}  // namespace

Matrix step_matrix(const Matrix& M, double gamma, double dt, const Matrix& increment) {
  if (M.rows() != M.cols() || M.rows() < 1)
    throw std::invalid_argument("step_matrix: matrix must be square");
  if (increment.rows() != M.rows() || increment.cols() != M.cols())
    throw std::invalid_argument("step_matrix: increment shape mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("step_matrix: dt must be positive");
  return std::exp(-gamma * dt) * M + increment;
}

MatrixPathResult simulate_matrix_path(const MatrixProcessConfig& cfg,
                                      const NoiseStream& stream) {
  if (cfg.d < 1) throw std::invalid_argument("matrix sim: d must be >= 1");
  if (cfg.p < 0.0 || cfg.p > 1.0) throw std::invalid_argument("matrix sim: p must be in [0,1]");
  if (!(cfg.gamma >= 0.0)) throw std::invalid_argument("matrix sim: gamma must be >= 0");
  if (!(cfg.n > 0.0) || cfg.m < 1 || !(cfg.T > 0.0))
    throw std::invalid_argument("matrix sim: n, m, T must be positive");
  double blocks_real = cfg.n * cfg.T;
  auto blocks = static_cast<std::size_t>(std::llround(blocks_real));
  if (blocks == 0 || std::abs(blocks_real - static_cast<double>(blocks)) > 1e-9)
    throw std::invalid_argument("matrix sim: n*T must be a positive integer block count");

  Matrix M;
  if (cfg.M0.size() == 0) {
    M = Matrix::Zero(cfg.d, cfg.d);
  } else {
    if (cfg.M0.rows() != cfg.d || cfg.M0.cols() != cfg.d)
      throw std::invalid_argument("matrix sim: M0 shape mismatch");
    M = cfg.M0;
    hermitize(M);
    if (cfg.sector == Sector::symmetric &&
        M.imag().cwiseAbs().maxCoeff() > 1e-12 * (1.0 + M.norm()))
      throw std::invalid_argument("matrix sim: symmetric sector needs a real M0");
  }

  double dt = 1.0 / (cfg.n * static_cast<double>(cfg.m));
  double decay = std::exp(-cfg.gamma * dt);

  MatrixPathResult out;
  out.min_gap_seen = std::numeric_limits<double>::infinity();
  CoinSchedule sched = make_coin_schedule(stream, cfg.p, cfg.n, cfg.T, cfg.subtag);
  out.coins.assign(sched.coins.begin(), sched.coins.begin() + blocks);

  Matrix frozen_frame;
  Matrix last_frame;  // previous decomposition's frame, for continuity phases
  bool have_last_frame = false;

  auto decompose_here = [&](std::size_t block) -> SpectralDecomp {
    try {
      SpectralDecomp dec =
          spectral_decompose(M, cfg.sector, have_last_frame ? &last_frame : nullptr);
      track_gaps(dec.lambda, out);
      last_frame = dec.frame;
      have_last_frame = true;
      return dec;
    } catch (const std::exception& e) {
      throw std::runtime_error("matrix sim: decomposition failed at block " +
                               std::to_string(block) + ": " + e.what());
    }
  };

  // Handles the boundary at b/n: records state/snapshot as configured and
  // freezes the frame when the upcoming block runs diagonal noise. At most
  // one decomposition per boundary.
  auto boundary = [&](std::size_t b, bool freeze) {
    double t = static_cast<double>(b) / cfg.n;
    bool endpoint = (b == 0) || (b == blocks);
    bool want_state =
        endpoint || (cfg.state_stride_blocks > 0 && b % cfg.state_stride_blocks == 0);
    bool want_snapshot =
        endpoint || (cfg.snapshot_stride_blocks > 0 && b % cfg.snapshot_stride_blocks == 0);
    if (want_state) out.states.push_back({t, M});
    if (want_snapshot || freeze) {
      SpectralDecomp dec = decompose_here(b);
      if (freeze) frozen_frame = dec.frame;
      if (want_snapshot) {
        MatrixSnapshot snap;
        snap.time = t;
        snap.lambda = std::move(dec.lambda);
        if (cfg.snapshot_frames) snap.frame = std::move(dec.frame);
        out.snapshots.push_back(std::move(snap));
      }
    }
  };

  for (std::size_t b = 0; b < blocks; ++b) {
    bool coin = out.coins[b] != 0;
    boundary(b, !coin);
    for (int s = 0; s < cfg.m; ++s) {
      std::uint64_t g = static_cast<std::uint64_t>(b) * cfg.m + s;
      Matrix inc;
      if (coin) {
        Draw draw = stream.open(NoiseSource::matrix_gauss, cfg.subtag, g);
        inc = hermitian_increment(draw, cfg.d, cfg.sector, dt);
      } else {
        Draw draw = stream.open(NoiseSource::eigen_gauss, cfg.subtag, g);
        inc = eigen_noise_increment(draw, frozen_frame, dt);
      }
      M *= decay;
      M += inc;
    }
  }
  boundary(blocks, false);
  out.final_matrix = M;
  return out;
}

EigenFramePath extract_eigen_path(const std::vector<MatrixStateRecord>& states,
                                  Sector sector, bool with_frames) {
  if (states.empty()) throw std::invalid_argument("extract_eigen_path: no states");
  EigenFramePath out;
  out.min_gap = std::numeric_limits<double>::infinity();
  out.times.reserve(states.size());
  out.lambdas.reserve(states.size());
  if (with_frames) out.frames.reserve(states.size());
  const Matrix* prev = nullptr;
  for (const auto& rec : states) {
    SpectralDecomp dec = spectral_decompose(rec.M, sector, prev);
    int d = static_cast<int>(dec.lambda.size());
    for (int i = 0; i + 1 < d; ++i)
      out.min_gap = std::min(out.min_gap, dec.lambda(i + 1) - dec.lambda(i));
    out.times.push_back(rec.time);
    out.lambdas.push_back(std::move(dec.lambda));
    if (with_frames) {
      out.frames.push_back(std::move(dec.frame));
      prev = &out.frames.back();
    }
  }
  return out;
}

}  // namespace betaflow
