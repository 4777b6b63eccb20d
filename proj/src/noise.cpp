// betaflow: Philox-based counter streams and Gaussian/Haar noise builders.

#include "betaflow/noise.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace betaflow {

namespace detail {

namespace {
constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(prod >> 64);
  lo = static_cast<std::uint64_t>(prod);
}
}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 2>& key,
                                        const std::array<std::uint64_t, 4>& counter) {
  std::array<std::uint64_t, 4> x = counter;
  std::uint64_t k0 = key[0];
  std::uint64_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kMul0, x[0], hi0, lo0);
    mul_hi_lo(kMul1, x[2], hi1, lo1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return x;
}

}  // namespace detail

Draw::Draw(const std::array<std::uint64_t, 2>& key, std::uint64_t source,
           std::uint64_t subtag, std::uint64_t index)
    : key_(key), counter_{source, subtag, index, 0} {}

void Draw::refill() {
  buffer_ = detail::philox4x64(key_, counter_);
  ++counter_[3];
  buffered_ = 4;
}

std::uint64_t Draw::bits() {
  if (buffered_ == 0) refill();
  return buffer_[4 - buffered_--];
}

double Draw::uniform() {
  return static_cast<double>(bits() >> 11) * 0x1.0p-53;
}

double Draw::uniform_pos() {
  return static_cast<double>((bits() >> 11) + 1) * 0x1.0p-53;
}

void Draw::gaussian_pair(double& a, double& b) {
  double u1 = uniform_pos();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  a = r * std::cos(theta);
  b = r * std::sin(theta);
}

double Draw::gaussian() {
  if (have_spare_gauss_) {
    have_spare_gauss_ = false;
    return spare_gauss_;
  }
  double a, b;
  gaussian_pair(a, b);
  spare_gauss_ = b;
  have_spare_gauss_ = true;
  return a;
}

Complex Draw::gaussian_complex() {
  double a, b;
  gaussian_pair(a, b);
  return {a, b};
}

double Draw::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost small shapes up by one and correct with a power of a uniform.
    double u = uniform_pos();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = gaussian();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform_pos();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Draw::chi(double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi: dof must be positive");
  return std::sqrt(2.0 * gamma(0.5 * dof));
}

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint64_t path_index)
    : master_seed_(master_seed), path_index_(path_index), key_{master_seed, path_index} {}

Draw NoiseStream::open(NoiseSource source, std::uint64_t subtag, std::uint64_t index) const {
  return Draw(key_, static_cast<std::uint64_t>(source), subtag, index);
}

std::vector<std::uint8_t> bernoulli_stream(const NoiseStream& stream, double p,
                                           std::size_t count, std::uint64_t subtag) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli_stream: p outside [0,1]");
  std::vector<std::uint8_t> coins(count);
  for (std::size_t k = 0; k < count; ++k) {
    Draw g = stream.open(NoiseSource::coins, subtag, k);
    coins[k] = g.uniform() < p ? 1 : 0;
  }
  return coins;
}

std::uint8_t CoinSchedule::at_time(double t) const {
  if (t < 0.0) throw std::invalid_argument("CoinSchedule: negative time");
  std::size_t k = static_cast<std::size_t>(n * t);
  if (k >= coins.size()) k = coins.size() - 1;
  return coins[k];
}

CoinSchedule make_coin_schedule(const NoiseStream& stream, double p, double n,
                                double horizon, std::uint64_t subtag) {
  if (!(n > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("make_coin_schedule: n and horizon must be positive");
  std::size_t count = static_cast<std::size_t>(std::ceil(n * horizon)) + 1;
  CoinSchedule sched;
  sched.n = n;
  sched.coins = bernoulli_stream(stream, p, count, subtag);
  return sched;
}

Matrix hermitian_increment(Draw& g, int d, Sector sector, double dt) {
  if (d < 1) throw std::invalid_argument("hermitian_increment: d must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("hermitian_increment: dt must be positive");
  double sd = std::sqrt(dt);
  Matrix h = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      double re = sd * g.gaussian();
      double im = sector == Sector::hermitian ? sd * g.gaussian() : 0.0;
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  for (int i = 0; i < d; ++i) h(i, i) = Complex(std::sqrt(2.0) * sd * g.gaussian(), 0.0);
  return h;
}

Matrix eigen_noise_increment(Draw& g, const Matrix& frame, double dt) {
  if (frame.rows() != frame.cols() || frame.rows() < 1)
    throw std::invalid_argument("eigen_noise_increment: frame must be square");
  if (!(dt > 0.0)) throw std::invalid_argument("eigen_noise_increment: dt must be positive");
  int d = static_cast<int>(frame.rows());
  double sd = std::sqrt(dt);
  Eigen::VectorXcd diag(d);
  for (int i = 0; i < d; ++i) diag(i) = Complex(std::sqrt(2.0) * sd * g.gaussian(), 0.0);
  Matrix out = frame * diag.asDiagonal() * frame.adjoint();
  hermitize(out);
  return out;
}

Matrix haar_sample(Draw& g, int d, Sector sector) {
  if (d < 1) throw std::invalid_argument("haar_sample: d must be >= 1");
  Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (sector == Sector::hermitian) {
        a(i, j) = g.gaussian_complex();
      } else {
        a(i, j) = Complex(g.gaussian(), 0.0);
      }
    }
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase so the result is Haar rather than biased by QR's sign choices.
  for (int j = 0; j < d; ++j) {
    Complex rjj = r(j, j);
    double mag = std::abs(rjj);
    Complex phase = mag > 0.0 ? rjj / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

}  // namespace betaflow
