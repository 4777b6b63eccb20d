// betaflow: reference-law implementations.

#include "betaflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

namespace betaflow {

namespace {
constexpr double kProposalVariance = 2.0;

// log of the envelope bound for prod |dlam|^beta * exp(-c*sum lam^2) under the
// widened proposal: each pair contributes at most
// sup_s [beta*ln s - c/(2(d-1)) * s^2] = (beta/2)*(ln(beta*(d-1)/c) - 1).
double log_envelope(int d, double beta_eff, double c) {
  if (d < 2 || beta_eff <= 0.0) return 0.0;
  double pairs = 0.5 * d * (d - 1);
  return pairs * 0.5 * beta_eff * (std::log(beta_eff * (d - 1) / c) - 1.0);
}
}  // namespace

std::vector<RealVector> rejection_sample_gibbs(const GibbsSpec& spec, std::size_t count,
                                               const NoiseStream& stream, std::uint64_t subtag) {
  if (spec.d < 1 || spec.d > 4)
    throw std::invalid_argument("rejection_sample_gibbs: d must be in [1,4]");
  if (!(spec.beta_eff >= 0.0))
    throw std::invalid_argument("rejection_sample_gibbs: beta_eff must be >= 0");

  // Remainder Gaussian weight after widening the proposal to variance 2:
  // exp(-(1/2 - 1/(2*var)) * sum lam^2).
  double c = 0.5 - 0.5 / kProposalVariance;
  double log_bound = log_envelope(spec.d, spec.beta_eff, c);
  double proposal_sd = std::sqrt(kProposalVariance);

  std::vector<RealVector> out;
  out.reserve(count);
  RealVector lam(spec.d);
  std::uint64_t attempts = 0;
  for (std::size_t k = 0; k < count; ++k) {
    Draw g = stream.open(NoiseSource::gibbs_proposal, subtag, k);
    for (;;) {
      ++attempts;
      if (attempts > 1000000 && attempts / (k + 1) > 1000000)
        throw std::runtime_error("rejection_sample_gibbs: acceptance rate below 1e-6");
      double log_ratio = 0.0;
      for (int i = 0; i < spec.d; ++i) lam(i) = proposal_sd * g.gaussian();
      for (int i = 0; i < spec.d; ++i) {
        for (int j = i + 1; j < spec.d; ++j) {
          double gap = std::abs(lam(i) - lam(j));
          if (gap <= 0.0) {
            log_ratio = -1e300;
            break;
          }
          log_ratio += spec.beta_eff * std::log(gap);
        }
      }
      log_ratio -= c * lam.squaredNorm();
      if (std::log(g.uniform_pos()) < log_ratio - log_bound) break;
    }
    std::sort(lam.data(), lam.data() + spec.d);
    out.push_back(lam);
  }
  return out;
}

std::vector<RealVector> sample_tridiagonal_beta(int d, double beta_eff, std::size_t count,
                                                const NoiseStream& stream, std::uint64_t subtag) {
  if (d < 1) throw std::invalid_argument("sample_tridiagonal_beta: d must be >= 1");
  if (!(beta_eff > 0.0))
    throw std::invalid_argument("sample_tridiagonal_beta: beta_eff must be positive");

  std::vector<RealVector> out;
  out.reserve(count);
  RealMatrix t = RealMatrix::Zero(d, d);
  for (std::size_t k = 0; k < count; ++k) {
    Draw g = stream.open(NoiseSource::tridiag, subtag, k);
    t.setZero();
    for (int i = 0; i < d; ++i) t(i, i) = g.gaussian();
    for (int i = 0; i < d - 1; ++i) {
      double off = g.chi(beta_eff * (d - 1 - i)) / std::sqrt(2.0);
      t(i, i + 1) = off;
      t(i + 1, i) = off;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(t, Eigen::EigenvaluesOnly);
    out.push_back(solver.eigenvalues());
  }
  return out;
}

namespace {
void check_fp_args(double pbeta, double delta, double t) {
  if (!(pbeta >= 0.0 && pbeta < 1.0))
    throw std::invalid_argument("bessel first passage: requires 0 <= pbeta < 1");
  if (!(delta > 0.0)) throw std::invalid_argument("bessel first passage: delta must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("bessel first passage: t must be positive");
}
}  // namespace

double bessel_fp_pdf(double pbeta, double delta, double t) {
  check_fp_args(pbeta, delta, t);
  double k = 0.5 * (1.0 - pbeta);
  double z = delta * delta / (2.0 * t);
  return std::exp(-std::lgamma(k) + k * std::log(z) - z) / t;
}

double bessel_fp_cdf(double pbeta, double delta, double t) {
  check_fp_args(pbeta, delta, t);
  double k = 0.5 * (1.0 - pbeta);
  double z = delta * delta / (2.0 * t);
  return boost::math::gamma_q(k, z);
}

double bessel_fp_pdf_rescaled(double pbeta, double delta, double t) {
  return 4.0 * bessel_fp_pdf(pbeta, delta, 4.0 * t);
}

double bessel_fp_cdf_rescaled(double pbeta, double delta, double t) {
  return bessel_fp_cdf(pbeta, delta, 4.0 * t);
}

OuMoments ou_moments(double x0, double gamma, double t) {
  if (!(gamma > 0.0)) throw std::invalid_argument("ou_moments: gamma must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("ou_moments: t must be >= 0");
  OuMoments m;
  m.mean = x0 * std::exp(-gamma * t);
  m.variance = (1.0 - std::exp(-2.0 * gamma * t)) / gamma;
  return m;
}

}  // namespace betaflow
