// betaflow: adaptive Euler integration of the particle systems.

#include "betaflow/particle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace betaflow {

namespace {

void dyson_drift_into(const RealVector& lambda, double coupling, double gamma,
                      RealVector& out) {
  int d = static_cast<int>(lambda.size());
  for (int i = 0; i < d; ++i) {
    double acc = -gamma * lambda(i);
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      double gap = lambda(i) - lambda(j);
      if (gap == 0.0) throw std::domain_error("dyson_drift: coinciding coordinates");
      acc += coupling / gap;
    }
    out(i) = acc;
  }
}

}  // namespace

RealVector dyson_drift(const RealVector& lambda, double coupling, double gamma) {
  RealVector drift(lambda.size());
  dyson_drift_into(lambda, coupling, gamma, drift);
  return drift;
}

double s_statistic(const RealVector& lambda, const std::vector<int>& indices) {
  if (indices.size() < 2)
    throw std::invalid_argument("s_statistic: index set needs at least two entries");
  int d = static_cast<int>(lambda.size());
  double s = 0.0;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      int i = indices[a];
      int j = indices[b];
      if (i < 0 || i >= d || j < 0 || j >= d || i == j)
        throw std::invalid_argument("s_statistic: index out of range or repeated");
      double diff = lambda(i) - lambda(j);
      s += 2.0 * diff * diff;
    }
  }
  return s;
}

double s_statistic(const RealVector& lambda) {
  std::vector<int> all(lambda.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return s_statistic(lambda, all);
}

double min_adjacent_gap(const RealVector& lambda) {
  int d = static_cast<int>(lambda.size());
  if (d < 2) return std::numeric_limits<double>::infinity();
  double g = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < d; ++i) g = std::min(g, lambda(i + 1) - lambda(i));
  return g;
}

int detect_collision(const RealVector& lambda, double tol) {
  int d = static_cast<int>(lambda.size());
  double gmin = std::numeric_limits<double>::infinity();
  int idx = -1;
  for (int i = 0; i + 1 < d; ++i) {
    double g = lambda(i + 1) - lambda(i);
    if (g < gmin) {
      gmin = g;
      idx = i;
    }
  }
  return (idx >= 0 && gmin < tol) ? idx : -1;
}

double delta_coupling_constant(int d) {
  return std::sqrt(d * (d + 1) * (2.0 * d + 1) / 6.0);
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct StepperState {
  double coupling = 0.0;
  double gamma = 1.0;
  double safety = 0.25;
  int max_halvings = 10;
  // scratch, sized once per run
  RealVector drift;
  RealVector xi;
  // outcome accumulation
  int deepest = 0;
  bool underflow = false;       // any underflow so far on this path
  bool step_underflow = false;  // underflow within the current macro step
  int tight_index = -1;
  double clock = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
};

void euler_apply(RealVector& lambda, StepperState& st, double dt, const RealVector& dw) {
  int d = static_cast<int>(lambda.size());
  double gmin = min_adjacent_gap(lambda);
  if (d >= 2 && gmin > 0.0) st.clock += dt / (gmin * gmin);
  for (int i = 0; i < d; ++i) lambda(i) += st.drift(i) * dt + kSqrt2 * dw(i);
  std::sort(lambda.data(), lambda.data() + d);
  // Exact ties would make the drift singular on the next substep; separate
  // them by one ulp, which is far below every tolerance in use.
  for (int i = 0; i + 1 < d; ++i) {
    if (lambda(i + 1) <= lambda(i))
      lambda(i + 1) = std::nextafter(lambda(i), std::numeric_limits<double>::infinity());
  }
  if (d >= 2) st.min_gap = std::min(st.min_gap, min_adjacent_gap(lambda));
}

// Fills st.drift and reports whether max |drift_i| * dt exceeds the safety
// fraction of the smallest adjacent gap.
bool needs_halving(const RealVector& lambda, StepperState& st, double dt, int* tight) {
  int d = static_cast<int>(lambda.size());
  dyson_drift_into(lambda, st.coupling, st.gamma, st.drift);
  if (d < 2) return false;
  double gmin = std::numeric_limits<double>::infinity();
  int gidx = -1;
  for (int i = 0; i + 1 < d; ++i) {
    double g = lambda(i + 1) - lambda(i);
    if (g < gmin) {
      gmin = g;
      gidx = i;
    }
  }
  if (tight) *tight = gidx;
  double worst = st.drift.cwiseAbs().maxCoeff();
  return worst * dt > st.safety * gmin;
}

template <class Noise>
void step_node(RealVector& lambda, StepperState& st, Noise& noise, std::size_t k,
               std::uint64_t node, int depth, double dt, RealVector dw) {
  int tight = -1;
  bool violated = needs_halving(lambda, st, dt, &tight);
  if (violated && depth < st.max_halvings) {
    st.deepest = std::max(st.deepest, depth + 1);
    noise.split(k, node, st.xi);
    // Brownian bridge split: the halves sum to dw and each carries the
    // conditional variance dt/2 given that sum.
    double half_sd = 0.5 * std::sqrt(dt);
    RealVector left = 0.5 * dw + half_sd * st.xi;
    RealVector right = dw - left;
    step_node(lambda, st, noise, k, 2 * node, depth + 1, 0.5 * dt, std::move(left));
    step_node(lambda, st, noise, k, 2 * node + 1, depth + 1, 0.5 * dt, std::move(right));
    return;
  }
  if (violated) {
    st.underflow = true;
    st.step_underflow = true;
    st.tight_index = tight;
  }
  euler_apply(lambda, st, dt, dw);
}

template <class Noise>
void macro_step(RealVector& lambda, StepperState& st, Noise& noise, std::size_t k, double dt) {
  st.step_underflow = false;
  RealVector dw(lambda.size());
  noise.root(k, dw);
  step_node(lambda, st, noise, k, 1, 0, dt, std::move(dw));
}

// Draws in execution order from one substream per macro step: first the d
// gaussians of the whole-step increment, then d more per bridge split as the
// splits happen.
struct SequentialRunNoise {
  const NoiseStream* stream = nullptr;
  NoiseSource source = NoiseSource::particle_gauss;
  std::uint64_t subtag = 0;
  double sqrt_dt = 0.0;
  std::unique_ptr<Draw> g;
  std::size_t current = ~std::size_t{0};
  void ensure(std::size_t k) {
    if (current != k) {
      g = std::make_unique<Draw>(stream->open(source, subtag, k));
      current = k;
    }
  }
  void root(std::size_t k, RealVector& out) {
    ensure(k);
    for (int i = 0; i < out.size(); ++i) out(i) = sqrt_dt * g->gaussian();
  }
  void split(std::size_t k, std::uint64_t, RealVector& out) {
    ensure(k);
    for (int i = 0; i < out.size(); ++i) out(i) = g->gaussian();
  }
};

// Draws addressed by (macro step, dyadic node): runs that halve differently
// still consume identical Brownian paths. Node ids need 26 bits, so the
// halving depth is capped at 24 in this mode.
struct AddressedRunNoise {
  const NoiseStream* stream = nullptr;
  NoiseSource source = NoiseSource::particle_gauss;
  std::uint64_t subtag = 0;
  double sqrt_dt = 0.0;
  static std::uint64_t index(std::size_t k, bool is_split, std::uint64_t node) {
    return (static_cast<std::uint64_t>(k) << 27) |
           (static_cast<std::uint64_t>(is_split) << 26) | node;
  }
  void root(std::size_t k, RealVector& out) {
    Draw g = stream->open(source, subtag, index(k, false, 1));
    for (int i = 0; i < out.size(); ++i) out(i) = sqrt_dt * g.gaussian();
  }
  void split(std::size_t k, std::uint64_t node, RealVector& out) {
    Draw g = stream->open(source, subtag, index(k, true, node));
    for (int i = 0; i < out.size(); ++i) out(i) = g.gaussian();
  }
};

void check_config(const ParticleSimConfig& cfg) {
  if (cfg.d < 1) throw std::invalid_argument("particle sim: d must be >= 1");
  if (cfg.lambda0.size() != cfg.d)
    throw std::invalid_argument("particle sim: lambda0 size must equal d");
  if (!(cfg.T > 0.0) || !(cfg.dt > 0.0))
    throw std::invalid_argument("particle sim: T and dt must be positive");
  if (!std::is_sorted(cfg.lambda0.data(), cfg.lambda0.data() + cfg.d))
    throw std::invalid_argument("particle sim: lambda0 must be sorted ascending");
  if (cfg.mode == NoiseMode::addressed && cfg.ctl.max_halvings > 24)
    throw std::invalid_argument("particle sim: addressed noise caps max_halvings at 24");
}

template <class CouplingAt, class AfterStep>
ParticlePath run_path(const ParticleSimConfig& cfg, const NoiseStream& stream,
                      CouplingAt coupling_at, AfterStep after_step) {
  check_config(cfg);
  std::size_t steps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
  if (steps == 0) throw std::invalid_argument("particle sim: T/dt below one step");

  StepperState st;
  st.gamma = cfg.gamma;
  st.safety = cfg.ctl.safety;
  st.max_halvings = cfg.ctl.max_halvings;
  st.drift.resize(cfg.d);
  st.xi.resize(cfg.d);

  ParticlePath path;
  RealVector lambda = cfg.lambda0;
  path.times.push_back(0.0);
  path.states.push_back(lambda);
  path.clock.push_back(0.0);
  st.min_gap = min_adjacent_gap(lambda);

  auto run_steps = [&](auto& noise) {
    for (std::size_t k = 0; k < steps; ++k) {
      st.coupling = coupling_at(k);
      macro_step(lambda, st, noise, k, cfg.dt);
      double t = static_cast<double>(k + 1) * cfg.dt;
      after_step(lambda, t, st);
      bool stop = false;
      if (cfg.collision_tol > 0.0 && path.first_collision_index < 0) {
        int idx = detect_collision(lambda, cfg.collision_tol);
        if (idx < 0 && st.step_underflow) idx = st.tight_index;
        if (idx >= 0) {
          path.first_collision_time = t;
          path.first_collision_index = idx;
          stop = cfg.stop_at_collision;
        }
      }
      bool record = cfg.record_stride > 0 && ((k + 1) % cfg.record_stride == 0);
      if (record || k + 1 == steps || stop) {
        path.times.push_back(t);
        path.states.push_back(lambda);
        path.clock.push_back(st.clock);
      }
      if (stop) {
        path.stopped_at_collision = true;
        break;
      }
    }
  };

  if (cfg.mode == NoiseMode::sequential) {
    SequentialRunNoise noise{&stream, cfg.source, cfg.subtag, std::sqrt(cfg.dt), nullptr,
                             ~std::size_t{0}};
    run_steps(noise);
  } else {
    AddressedRunNoise noise{&stream, cfg.source, cfg.subtag, std::sqrt(cfg.dt)};
    run_steps(noise);
  }

  path.any_underflow = st.underflow;
  path.deepest_halving = st.deepest;
  path.min_gap_seen = st.min_gap;
  return path;
}

}  // namespace

RealVector step_particles(RealVector lambda, double coupling, double gamma, double dt,
                          Draw& g, const StepControl& ctl, StepOutcome* out) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_particles: dt must be positive");
  StepperState st;
  st.coupling = coupling;
  st.gamma = gamma;
  st.safety = ctl.safety;
  st.max_halvings = ctl.max_halvings;
  st.drift.resize(lambda.size());
  st.xi.resize(lambda.size());
  struct DirectNoise {
    Draw* g;
    double sqrt_dt;
    void root(std::size_t, RealVector& out) {
      for (int i = 0; i < out.size(); ++i) out(i) = sqrt_dt * g->gaussian();
    }
    void split(std::size_t, std::uint64_t, RealVector& out) {
      for (int i = 0; i < out.size(); ++i) out(i) = g->gaussian();
    }
  } noise{&g, std::sqrt(dt)};
  macro_step(lambda, st, noise, 0, dt);
  if (out) {
    out->deepest = st.deepest;
    out->underflow = st.underflow;
    out->clock = st.clock;
    out->tight_index = st.tight_index;
  }
  return lambda;
}

ParticlePath simulate_limit_path(const ParticleSimConfig& cfg, double coupling,
                                 const NoiseStream& stream) {
  return run_path(
      cfg, stream, [&](std::size_t) { return coupling; },
      [](RealVector&, double, StepperState&) {});
}

ParticlePath simulate_prelimit_path(const ParticleSimConfig& cfg, double base_beta,
                                    const CoinSchedule& coins, const NoiseStream& stream) {
  double block_steps = 1.0 / (coins.n * cfg.dt);
  double rounded = std::round(block_steps);
  if (std::abs(block_steps - rounded) > 1e-9 || rounded < 1.0)
    throw std::invalid_argument("simulate_prelimit_path: dt must divide the block length 1/n");
  std::size_t per_block = static_cast<std::size_t>(rounded);
  return run_path(
      cfg, stream,
      [&, per_block](std::size_t k) {
        std::size_t block = k / per_block;
        return base_beta * static_cast<double>(coins.at_block(block));
      },
      [](RealVector&, double, StepperState&) {});
}

DeltaPathResult simulate_delta_process(const ParticleSimConfig& cfg, double coupling,
                                       double delta, double collision_tol,
                                       std::size_t max_restarts, const NoiseStream& stream) {
  if (!(delta > 0.0)) throw std::invalid_argument("simulate_delta_process: delta must be positive");
  if (!(collision_tol >= 0.0))
    throw std::invalid_argument("simulate_delta_process: collision_tol must be >= 0");
  if (cfg.collision_tol > 0.0 || cfg.stop_at_collision)
    throw std::invalid_argument(
        "simulate_delta_process: disable the config-level collision detection");

  DeltaPathResult result;
  auto& events = result.events;
  result.path = run_path(
      cfg, stream, [&](std::size_t) { return coupling; },
      [&](RealVector& lambda, double t, StepperState& st) {
        int idx = detect_collision(lambda, collision_tol);
        auto kind = CollisionEvent::Kind::gap_below_tol;
        if (idx < 0 && st.step_underflow && st.tight_index >= 0) {
          idx = st.tight_index;
          kind = CollisionEvent::Kind::dt_underflow;
        }
        if (idx < 0) return;
        if (events.size() >= max_restarts)
          throw std::runtime_error("simulate_delta_process: restart cap exceeded at t=" +
                                   std::to_string(t));
        CollisionEvent ev;
        ev.time = t;
        ev.index = idx;
        ev.ordinal = events.size() + 1;
        ev.kind = kind;
        ev.shift = delta;
        events.push_back(ev);
        for (int i = 0; i < lambda.size(); ++i) lambda(i) += (i + 1) * delta;
      });
  return result;
}

CoupledErrorResult coupled_error(const ParticlePath& a, const ParticlePath& b,
                                 double collision_tol,
                                 const std::vector<CollisionEvent>* events_a,
                                 const std::vector<CollisionEvent>* events_b,
                                 double delta_scale) {
  if (a.times.size() != b.times.size() || a.times.empty())
    throw std::invalid_argument("coupled_error: paths must share a non-empty grid");
  CoupledErrorResult res;
  res.bound_checked = delta_scale > 0.0;
  int d = static_cast<int>(a.states.front().size());
  double c = delta_coupling_constant(d);
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    if (std::abs(a.times[k] - b.times[k]) > 1e-12)
      throw std::invalid_argument("coupled_error: grids differ");
    if (collision_tol > 0.0 && (min_adjacent_gap(a.states[k]) < collision_tol ||
                                min_adjacent_gap(b.states[k]) < collision_tol)) {
      break;
    }
    double err = (a.states[k] - b.states[k]).cwiseAbs().maxCoeff();
    res.sup_error = std::max(res.sup_error, err);
    res.cutoff_index = k + 1;
    if (res.bound_checked) {
      std::size_t ell = 0;
      double t = a.times[k];
      if (events_a) {
        for (const auto& ev : *events_a)
          if (ev.time <= t + 1e-12) ++ell;
      }
      if (events_b) {
        for (const auto& ev : *events_b)
          if (ev.time <= t + 1e-12) ++ell;
      }
      double bound = c * delta_scale * static_cast<double>(ell + 1);
      double ratio = bound > 0.0 ? err / bound : 0.0;
      res.worst_ratio = std::max(res.worst_ratio, ratio);
      if (err > bound) res.bound_ok = false;
    }
  }
  return res;
}

}  // namespace betaflow
