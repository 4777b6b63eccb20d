// betaflow: counter-based random streams and the noise primitives built on them.
//
// Every random number is addressed by (master_seed, path_index, source, subtag,
// index, draw). Two streams with the same address produce the same bits no
// matter which thread asks first, which makes parallel runs reproducible and
// lets coupled experiments share Brownian increments across simulations by
// construction.
#pragma once

#include "betaflow/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace betaflow {

// Stable tags for independent substreams. Values are part of the on-disk
// reproducibility contract; append only.
enum class NoiseSource : std::uint64_t {
  coins = 1,
  matrix_gauss = 2,
  eigen_gauss = 3,
  particle_gauss = 4,
  frame_gauss = 5,
  haar = 6,
  gibbs_proposal = 7,
  tridiag = 8,
  bessel_gauss = 9,
  scratch = 10,
};

namespace detail {
// Philox4x64-10 block cipher (counter-based generator, Random123 family).
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 2>& key,
                                        const std::array<std::uint64_t, 4>& counter);
}  // namespace detail

class NoiseStream;

// Cursor over one addressed substream. Cheap to construct; holds a 4-word
// buffer and walks the trailing counter word as values are consumed.
class Draw {
 public:
  std::uint64_t bits();
  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1]
  double gaussian();     // N(0, 1)
  void gaussian_pair(double& a, double& b);
  Complex gaussian_complex();  // independent N(0,1) real and imaginary parts
  double gamma(double shape);  // Gamma(shape, 1), shape > 0
  double chi(double dof);      // chi distribution, dof > 0 (not necessarily integer)

 private:
  friend class NoiseStream;
  Draw(const std::array<std::uint64_t, 2>& key, std::uint64_t source,
       std::uint64_t subtag, std::uint64_t index);
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buffer_;
  int buffered_ = 0;
  bool have_spare_gauss_ = false;
  double spare_gauss_ = 0.0;
};

class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint64_t path_index);

  Draw open(NoiseSource source, std::uint64_t subtag, std::uint64_t index) const;

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t path_index() const { return path_index_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t path_index_;
  std::array<std::uint64_t, 2> key_;
};

// One coin per block: coin k is 1 with probability p. Throws on p outside [0,1].
std::vector<std::uint8_t> bernoulli_stream(const NoiseStream& stream, double p,
                                           std::size_t count, std::uint64_t subtag = 0);

// Block-indexed coin sequence for a path switched at rate n: eps(t) = coin
// floor(n*t), constant on [k/n, (k+1)/n).
struct CoinSchedule {
  double n = 1.0;
  std::vector<std::uint8_t> coins;

  std::uint8_t at_block(std::size_t k) const { return coins.at(k); }
  std::uint8_t at_time(double t) const;
};

CoinSchedule make_coin_schedule(const NoiseStream& stream, double p, double n,
                                double horizon, std::uint64_t subtag = 0);

// Gaussian Hermitian increment over a step of length dt.
// Off-diagonal (i<j): real part N(0,dt); hermitian sector adds an independent
// imaginary N(0,dt). Diagonal: real sqrt(2)*N(0,dt). Exactly Hermitian by
// construction; real in the symmetric sector.
Matrix hermitian_increment(Draw& g, int d, Sector sector, double dt);

// Increment of the frozen-frame diagonal noise: sqrt(2) * sum_i dB_i P_i with
// P_i the projector on column i of `frame`. Commutes with every projector of
// the frame it was built from.
Matrix eigen_noise_increment(Draw& g, const Matrix& frame, double dt);

// Haar-distributed orthogonal (symmetric sector) or unitary (hermitian sector)
// matrix, via QR of a Gaussian matrix with the R-diagonal phase fix.
Matrix haar_sample(Draw& g, int d, Sector sector);

}  // namespace betaflow
