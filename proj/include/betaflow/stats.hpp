// betaflow: empirical-distribution distances, drift/diffusion estimators, and
// the stopped-moment check used by the scale-statistic experiments.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace betaflow {

// Compensated (Neumaier) accumulator. Summation is deterministic for a fixed
// input order, and reductions in this codebase always run in path order.
class CompensatedSum {
 public:
  void add(double x);
  double total() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_mean = 0.0;
};

SummaryStats summarize(const std::vector<double>& values);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// One-sample KS against a continuous CDF.
double ks_statistic_cdf(std::vector<double> sample, const std::function<double(double)>& cdf);

// First Wasserstein distance: integral of |F_a - F_b|.
double wasserstein1(std::vector<double> a, std::vector<double> b);

enum class DistanceKind { ks, wasserstein1 };

double distribution_distance(DistanceKind kind, std::vector<double> a, std::vector<double> b);

struct DriftDiffusion {
  std::size_t n = 0;
  double drift = 0.0;
  double drift_stderr = 0.0;
  double diffusion_rate = 0.0;  // quadratic-variation rate, centered estimator
  double diffusion_stderr = 0.0;
};

// Per-path increments over a window of length h: start values s0, end values s1.
DriftDiffusion empirical_drift_diffusion(const std::vector<double>& s0,
                                         const std::vector<double>& s1, double h);

// Stopped-moment check for the pair-spread statistic S_t of the limiting
// system: with a = 2d(d-1)(2 + pbeta*d) and alpha = 2 - a/(4d), the quantity
// rho^alpha * exp(alpha*gamma*t) evaluated at t ^ tau (tau = first time S
// reaches floor_eps) has constant expectation. Paths are stored on a shared
// grid; crossing times are linearly interpolated. A path may be a proper
// prefix of the grid (stopped early at a collision); it then counts as frozen
// at its last sample.
struct RhoAlphaResult {
  double alpha = 0.0;
  double reference = 0.0;  // rho(0)^alpha
  std::vector<double> times;
  std::vector<double> estimates;
  std::vector<double> stderrs;
  double max_abs_sigma = 0.0;  // worst |estimate - reference| / stderr
  std::size_t stopped_paths = 0;
  bool pass = false;  // all check times within 3 standard errors
};

double spread_coefficient_a(int d, double pbeta);
double spread_alpha(int d, double pbeta);

RhoAlphaResult rho_alpha_check(const std::vector<std::vector<double>>& s_paths,
                               const std::vector<double>& grid, double pbeta, double gamma,
                               int d, double floor_eps, const std::vector<double>& check_times);

}  // namespace betaflow
