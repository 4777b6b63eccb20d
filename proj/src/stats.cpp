// betaflow: statistics kernels shared by tests and experiments.

#include "betaflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace betaflow {

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

SummaryStats summarize(const std::vector<double>& values) {
  SummaryStats s;
  s.n = values.size();
  if (s.n == 0) return s;
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  s.mean = acc.total() / static_cast<double>(s.n);
  if (s.n < 2) return s;
  CompensatedSum sq;
  for (double v : values) {
    double dev = v - s.mean;
    sq.add(dev * dev);
  }
  s.variance = sq.total() / static_cast<double>(s.n - 1);
  s.stderr_mean = std::sqrt(s.variance / static_cast<double>(s.n));
  return s;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Consume every sample tied at the next jump point before comparing the
    // empirical cdfs, so ties move both sides together.
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_statistic_cdf(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic_cdf: empty sample");
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein1: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // Integrate |F_a - F_b| across the merged jump points.
  std::size_t i = 0, j = 0;
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  double prev = std::min(a[0], b[0]);
  CompensatedSum area;
  while (i < a.size() || j < b.size()) {
    double next;
    if (i < a.size() && (j >= b.size() || a[i] <= b[j])) {
      next = a[i];
    } else {
      next = b[j];
    }
    double fa = static_cast<double>(i) / na;
    double fb = static_cast<double>(j) / nb;
    area.add(std::abs(fa - fb) * (next - prev));
    prev = next;
    if (i < a.size() && (j >= b.size() || a[i] <= b[j])) {
      ++i;
    } else {
      ++j;
    }
  }
  return area.total();
}

double distribution_distance(DistanceKind kind, std::vector<double> a, std::vector<double> b) {
  return kind == DistanceKind::ks ? ks_statistic(std::move(a), std::move(b))
                                  : wasserstein1(std::move(a), std::move(b));
}

DriftDiffusion empirical_drift_diffusion(const std::vector<double>& s0,
                                         const std::vector<double>& s1, double h) {
  if (s0.size() != s1.size() || s0.empty())
    throw std::invalid_argument("empirical_drift_diffusion: mismatched or empty samples");
  if (!(h > 0.0)) throw std::invalid_argument("empirical_drift_diffusion: h must be positive");
  std::vector<double> inc(s0.size());
  for (std::size_t k = 0; k < s0.size(); ++k) inc[k] = s1[k] - s0[k];
  SummaryStats si = summarize(inc);
  DriftDiffusion out;
  out.n = si.n;
  out.drift = si.mean / h;
  out.drift_stderr = si.stderr_mean / h;
  // Centered second moment removes the drift^2*h bias from the rate estimate.
  std::vector<double> sq(inc.size());
  for (std::size_t k = 0; k < inc.size(); ++k) {
    double dev = inc[k] - si.mean;
    sq[k] = dev * dev;
  }
  SummaryStats ss = summarize(sq);
  out.diffusion_rate = ss.mean / h;
  out.diffusion_stderr = ss.stderr_mean / h;
  return out;
}

double spread_coefficient_a(int d, double pbeta) {
  return 2.0 * d * (d - 1) * (2.0 + pbeta * d);
}

double spread_alpha(int d, double pbeta) {
  return 2.0 - spread_coefficient_a(d, pbeta) / (4.0 * d);
}

RhoAlphaResult rho_alpha_check(const std::vector<std::vector<double>>& s_paths,
                               const std::vector<double>& grid, double pbeta, double gamma,
                               int d, double floor_eps, const std::vector<double>& check_times) {
  if (s_paths.empty()) throw std::invalid_argument("rho_alpha_check: no paths");
  if (grid.size() < 2) throw std::invalid_argument("rho_alpha_check: grid too short");
  if (!(floor_eps > 0.0)) throw std::invalid_argument("rho_alpha_check: floor must be positive");

  RhoAlphaResult res;
  res.alpha = spread_alpha(d, pbeta);
  double s0 = s_paths.front().at(0);
  res.reference = std::pow(s0, 0.5 * res.alpha);
  res.times = check_times;

  // Per path: stopping time tau (linear interpolation to the floor crossing),
  // then the stopped value at each check time. A path shorter than the grid
  // was stopped early (collision detection); it counts as frozen at its last
  // sample from then on, which is itself a stopping time.
  std::vector<double> tau(s_paths.size(), -1.0);
  for (std::size_t pth = 0; pth < s_paths.size(); ++pth) {
    const auto& s = s_paths[pth];
    if (s.empty() || s.size() > grid.size())
      throw std::invalid_argument("rho_alpha_check: path must be a nonempty grid prefix");
    for (std::size_t k = 1; k < s.size(); ++k) {
      if (s[k] <= floor_eps) {
        double frac = (s[k - 1] - floor_eps) / (s[k - 1] - s[k]);
        tau[pth] = grid[k - 1] + frac * (grid[k] - grid[k - 1]);
        ++res.stopped_paths;
        break;
      }
    }
  }

  res.max_abs_sigma = 0.0;
  for (double t : check_times) {
    // Locate the grid index of the check time (grid is uniform in practice;
    // pick the nearest point).
    std::size_t idx = 0;
    double best = std::abs(grid[0] - t);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      double dd = std::abs(grid[k] - t);
      if (dd < best) {
        best = dd;
        idx = k;
      }
    }
    std::vector<double> vals(s_paths.size());
    for (std::size_t pth = 0; pth < s_paths.size(); ++pth) {
      const auto& s = s_paths[pth];
      double value;
      if (tau[pth] >= 0.0 && tau[pth] <= grid[idx]) {
        value = std::pow(floor_eps, 0.5 * res.alpha) * std::exp(res.alpha * gamma * tau[pth]);
      } else if (s.size() <= idx) {
        value = std::pow(s.back(), 0.5 * res.alpha) *
                std::exp(res.alpha * gamma * grid[s.size() - 1]);
      } else {
        value = std::pow(s[idx], 0.5 * res.alpha) * std::exp(res.alpha * gamma * grid[idx]);
      }
      vals[pth] = value;
    }
    SummaryStats st = summarize(vals);
    res.estimates.push_back(st.mean);
    res.stderrs.push_back(st.stderr_mean);
    double sigma = st.stderr_mean > 0.0 ? std::abs(st.mean - res.reference) / st.stderr_mean : 0.0;
    res.max_abs_sigma = std::max(res.max_abs_sigma, sigma);
  }
  res.pass = res.max_abs_sigma <= 3.0;
  return res;
}

}  // namespace betaflow
