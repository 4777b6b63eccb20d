// betaflow: independent reference laws the simulations are tested against:
// exact Gibbs samplers, the gap first-passage density, and scalar OU moments.
#pragma once

#include "betaflow/noise.hpp"
#include "betaflow/types.hpp"

#include <cstddef>
#include <vector>

namespace betaflow {

// Target law on ordered vectors lambda_1 <= ... <= lambda_d:
//   density proportional to  prod_{i<j} |lambda_i - lambda_j|^beta_eff
//                            * exp(-sum lambda_i^2 / 2).
struct GibbsSpec {
  int d = 2;
  double beta_eff = 1.0;
};

// Exact rejection sampler. Proposal: i.i.d. N(0, 2) coordinates; the
// interaction-times-Gaussian-remainder ratio is bounded by a closed-form
// per-pair envelope, so accepted draws follow the target exactly. Feasible for
// d <= 4 at moderate beta_eff; throws if the measured acceptance rate falls
// below 1e-6.
std::vector<RealVector> rejection_sample_gibbs(const GibbsSpec& spec, std::size_t count,
                                               const NoiseStream& stream,
                                               std::uint64_t subtag = 0);

// Tridiagonal beta-ensemble sampler: diagonal N(0,1), off-diagonal
// chi_{beta_eff*(d-k)}/sqrt(2). Targets the same law as rejection_sample_gibbs;
// the scale convention is validated against it in the test suite before any
// experiment uses this as an oracle.
std::vector<RealVector> sample_tridiagonal_beta(int d, double beta_eff, std::size_t count,
                                                const NoiseStream& stream,
                                                std::uint64_t subtag = 0);

// First-passage density of the squared-gap comparison process started at
// delta, in the unit-noise convention:
//   p_delta(t) = 1/Gamma(k) * (1/t) * (delta^2/(2t))^k * exp(-delta^2/(2t)),
// with k = (1 - pbeta)/2. Requires pbeta < 1.
double bessel_fp_pdf(double pbeta, double delta, double t);

// CDF of the same law (regularized upper incomplete gamma).
double bessel_fp_cdf(double pbeta, double delta, double t);

// Variance-rescaled variant: the law of T/4, i.e. 4*p_delta(4t), which equals
// p_{delta/2}(t). This is the candidate matching a gap SDE whose noise has
// quadratic variation 4dt.
double bessel_fp_pdf_rescaled(double pbeta, double delta, double t);
double bessel_fp_cdf_rescaled(double pbeta, double delta, double t);

// Mean and variance of d x = -gamma x dt + sqrt(2) db started at x0.
struct OuMoments {
  double mean = 0.0;
  double variance = 0.0;
};

OuMoments ou_moments(double x0, double gamma, double t);

}  // namespace betaflow
