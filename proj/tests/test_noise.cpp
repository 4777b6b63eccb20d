#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betaflow/noise.hpp"
#include "betaflow/stats.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace betaflow;

namespace {

std::vector<double> gaussians(Draw& g, std::size_t count) {
  std::vector<double> out(count);
  for (auto& x : out) x = g.gaussian();
  return out;
}

double variance_of(const std::vector<double>& xs) { return summarize(xs).variance; }

}  // namespace

TEST_CASE("draws are addressed: same address same bits, any other address different") {
  NoiseStream s(42, 7);
  Draw a = s.open(NoiseSource::particle_gauss, 3, 11);
  Draw b = s.open(NoiseSource::particle_gauss, 3, 11);
  for (int i = 0; i < 64; ++i) CHECK(a.bits() == b.bits());

  Draw c = s.open(NoiseSource::particle_gauss, 3, 12);
  Draw d = s.open(NoiseSource::particle_gauss, 4, 11);
  Draw e = s.open(NoiseSource::frame_gauss, 3, 11);
  Draw f = NoiseStream(42, 8).open(NoiseSource::particle_gauss, 3, 11);
  Draw g = NoiseStream(43, 7).open(NoiseSource::particle_gauss, 3, 11);
  std::uint64_t first = s.open(NoiseSource::particle_gauss, 3, 11).bits();
  CHECK(c.bits() != first);
  CHECK(d.bits() != first);
  CHECK(e.bits() != first);
  CHECK(f.bits() != first);
  CHECK(g.bits() != first);
}

TEST_CASE("draw order does not matter") {
  NoiseStream s(1729, 0);
  Draw a1 = s.open(NoiseSource::coins, 0, 5);
  Draw a2 = s.open(NoiseSource::coins, 0, 6);
  std::uint64_t x1 = a1.bits();
  std::uint64_t x2 = a2.bits();

  // Opposite interleaving from fresh cursors.
  Draw b2 = s.open(NoiseSource::coins, 0, 6);
  Draw b1 = s.open(NoiseSource::coins, 0, 5);
  CHECK(b2.bits() == x2);
  CHECK(b1.bits() == x1);
}

TEST_CASE("uniform and gaussian sanity") {
  NoiseStream s(9, 1);
  Draw g = s.open(NoiseSource::scratch, 0, 0);
  const std::size_t n = 100000;
  std::vector<double> us(n);
  for (auto& u : us) {
    u = g.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  SummaryStats ust = summarize(us);
  CHECK(ust.mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(ust.variance == doctest::Approx(1.0 / 12.0).epsilon(0.02));

  Draw g2 = s.open(NoiseSource::scratch, 1, 0);
  std::vector<double> gs = gaussians(g2, n);
  SummaryStats gst = summarize(gs);
  CHECK(std::abs(gst.mean) < 0.01);
  CHECK(gst.variance == doctest::Approx(1.0).epsilon(0.02));

  Draw g3 = s.open(NoiseSource::scratch, 2, 0);
  for (int i = 0; i < 1000; ++i) CHECK(g3.uniform_pos() > 0.0);
}

TEST_CASE("gaussian_pair matches two sequential gaussians in law") {
  NoiseStream s(5, 0);
  Draw g = s.open(NoiseSource::scratch, 3, 0);
  std::vector<double> xs;
  xs.reserve(40000);
  for (int i = 0; i < 20000; ++i) {
    double a, b;
    g.gaussian_pair(a, b);
    xs.push_back(a);
    xs.push_back(b);
  }
  SummaryStats st = summarize(xs);
  CHECK(std::abs(st.mean) < 0.02);
  CHECK(st.variance == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("gamma and chi guards and moments") {
  NoiseStream s(77, 0);
  Draw g = s.open(NoiseSource::scratch, 4, 0);
  CHECK_THROWS_AS(g.gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(g.chi(-1.0), std::invalid_argument);

  // Gamma(shape, 1) has mean == variance == shape.
  const double shape = 2.5;
  std::vector<double> xs(50000);
  for (auto& x : xs) x = g.gamma(shape);
  SummaryStats st = summarize(xs);
  CHECK(st.mean == doctest::Approx(shape).epsilon(0.02));
  CHECK(st.variance == doctest::Approx(shape).epsilon(0.05));

  // chi_k^2 is Gamma(k/2, 2): mean k.
  const double dof = 3.0;
  std::vector<double> cs(50000);
  for (auto& x : cs) {
    double c = g.chi(dof);
    x = c * c;
  }
  CHECK(summarize(cs).mean == doctest::Approx(dof).epsilon(0.02));
}

TEST_CASE("bernoulli_stream edge probabilities and mean") {
  NoiseStream s(1729, 0);
  auto ones = bernoulli_stream(s, 1.0, 1000);
  auto zeros = bernoulli_stream(s, 0.0, 1000);
  for (auto c : ones) CHECK(c == 1);
  for (auto c : zeros) CHECK(c == 0);

  auto coins = bernoulli_stream(s, 0.5, 100000);
  double mean = 0.0;
  for (auto c : coins) mean += c;
  mean /= coins.size();
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));

  CHECK_THROWS_AS(bernoulli_stream(s, 1.5, 10), std::invalid_argument);
  CHECK_THROWS_AS(bernoulli_stream(s, -0.1, 10), std::invalid_argument);
}

TEST_CASE("coin schedule is block constant") {
  NoiseStream s(3, 0);
  CoinSchedule sched = make_coin_schedule(s, 0.5, 10.0, 1.0);
  // ceil(n*T) blocks plus one pad coin so at_time(horizon) stays in range.
  REQUIRE(sched.coins.size() == 11);
  CHECK(sched.at_time(1.0) == sched.coins[10]);
  for (std::size_t k = 0; k < 10; ++k) {
    double t0 = k / 10.0;
    CHECK(sched.at_time(t0) == sched.at_block(k));
    CHECK(sched.at_time(t0 + 0.05) == sched.at_block(k));
    CHECK(sched.at_time(t0 + 0.0999) == sched.at_block(k));
  }
  CHECK_THROWS_AS(sched.at_time(-0.1), std::invalid_argument);
}

TEST_CASE("hermitian_increment symmetry and entry variances") {
  NoiseStream s(11, 0);
  const int d = 3;
  const double dt = 1.0;
  const std::size_t n = 100000;

  SUBCASE("symmetric sector") {
    std::vector<double> off, diag;
    off.reserve(n);
    diag.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Draw g = s.open(NoiseSource::matrix_gauss, 0, i);
      Matrix h = hermitian_increment(g, d, Sector::symmetric, dt);
      CHECK((h - h.adjoint()).norm() == 0.0);
      CHECK(h.imag().norm() == 0.0);
      off.push_back(h(0, 1).real());
      diag.push_back(h(0, 0).real());
    }
    CHECK(variance_of(off) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(variance_of(diag) == doctest::Approx(2.0).epsilon(0.02));
  }

  SUBCASE("hermitian sector") {
    std::vector<double> re, im, diag;
    for (std::size_t i = 0; i < n; ++i) {
      Draw g = s.open(NoiseSource::matrix_gauss, 1, i);
      Matrix h = hermitian_increment(g, d, Sector::hermitian, dt);
      CHECK((h - h.adjoint()).norm() == 0.0);
      CHECK(h(1, 1).imag() == 0.0);
      re.push_back(h(0, 1).real());
      im.push_back(h(0, 1).imag());
      diag.push_back(h(2, 2).real());
    }
    CHECK(variance_of(re) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(variance_of(im) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(variance_of(diag) == doctest::Approx(2.0).epsilon(0.02));
  }

  SUBCASE("variance scales linearly in dt") {
    // Sum of two increments over dt and an increment over 2*dt have the same
    // entry law; compare variances.
    std::vector<double> split, whole;
    for (std::size_t i = 0; i < 40000; ++i) {
      Draw g1 = s.open(NoiseSource::matrix_gauss, 2, i);
      Draw g2 = s.open(NoiseSource::matrix_gauss, 3, i);
      Matrix h = hermitian_increment(g1, 2, Sector::symmetric, 0.3) +
                 hermitian_increment(g2, 2, Sector::symmetric, 0.7);
      split.push_back(h(0, 1).real());
      Draw g3 = s.open(NoiseSource::matrix_gauss, 4, i);
      whole.push_back(hermitian_increment(g3, 2, Sector::symmetric, 1.0)(0, 1).real());
    }
    CHECK(variance_of(split) == doctest::Approx(1.0).epsilon(0.04));
    CHECK(variance_of(whole) == doctest::Approx(1.0).epsilon(0.04));
  }

  Draw g = s.open(NoiseSource::matrix_gauss, 5, 0);
  CHECK_THROWS_AS(hermitian_increment(g, 2, Sector::symmetric, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hermitian_increment(g, 0, Sector::symmetric, 0.1), std::invalid_argument);
}

TEST_CASE("eigen_noise_increment is diagonal in its frame") {
  NoiseStream s(23, 0);
  const double dt = 0.5;

  SUBCASE("identity frame") {
    Matrix frame = Matrix::Identity(3, 3);
    std::vector<double> diag;
    for (std::size_t i = 0; i < 20000; ++i) {
      Draw g = s.open(NoiseSource::eigen_gauss, 0, i);
      Matrix inc = eigen_noise_increment(g, frame, dt);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          if (r != c) CHECK(std::abs(inc(r, c)) < 1e-15);
      diag.push_back(inc(0, 0).real());
    }
    CHECK(variance_of(diag) == doctest::Approx(2.0 * dt).epsilon(0.05));
  }

  SUBCASE("rotated frame: commutes with the projectors") {
    Draw hg = s.open(NoiseSource::haar, 0, 0);
    Matrix q = haar_sample(hg, 3, Sector::hermitian);
    Draw g = s.open(NoiseSource::eigen_gauss, 1, 0);
    Matrix inc = eigen_noise_increment(g, q, dt);
    CHECK((inc - inc.adjoint()).norm() < 1e-12);
    // Diagonal in the frame basis.
    Matrix in_frame = q.adjoint() * inc * q;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (r != c) CHECK(std::abs(in_frame(r, c)) < 1e-10);
    // Explicit commutation with each rank-one projector.
    for (int k = 0; k < 3; ++k) {
      Matrix pk = q.col(k) * q.col(k).adjoint();
      CHECK((inc * pk - pk * inc).norm() < 1e-10);
    }
  }
}

TEST_CASE("haar_sample lies on the group") {
  NoiseStream s(31, 0);
  for (int d = 1; d <= 4; ++d) {
    Draw g = s.open(NoiseSource::haar, 10, static_cast<std::uint64_t>(d));
    Matrix o = haar_sample(g, d, Sector::symmetric);
    CHECK(o.imag().norm() == 0.0);
    CHECK((o.adjoint() * o - Matrix::Identity(d, d)).norm() < 1e-12);

    Draw g2 = s.open(NoiseSource::haar, 11, static_cast<std::uint64_t>(d));
    Matrix u = haar_sample(g2, d, Sector::hermitian);
    CHECK((u.adjoint() * u - Matrix::Identity(d, d)).norm() < 1e-12);
  }
}

TEST_CASE("haar d=1 symmetric is a fair sign") {
  NoiseStream s(37, 0);
  int plus = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Draw g = s.open(NoiseSource::haar, 20, static_cast<std::uint64_t>(i));
    double v = haar_sample(g, 1, Sector::symmetric)(0, 0).real();
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-14);
    if (v > 0) ++plus;
  }
  // 3 sigma around n/2 for a fair coin.
  double sigma = 0.5 * std::sqrt(static_cast<double>(n));
  CHECK(std::abs(plus - n / 2.0) < 3.0 * sigma);
}

TEST_CASE("haar d=2 column angle is uniform on the circle") {
  NoiseStream s(41, 0);
  const int n = 10000;
  std::vector<double> us(n);
  for (int i = 0; i < n; ++i) {
    Draw g = s.open(NoiseSource::haar, 30, static_cast<std::uint64_t>(i));
    Matrix o = haar_sample(g, 2, Sector::symmetric);
    double theta = std::atan2(o(1, 0).real(), o(0, 0).real());
    us[i] = (theta + M_PI) / (2.0 * M_PI);
  }
  double ks = ks_statistic_cdf(us, [](double x) {
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
  });
  CHECK(ks < 0.02);
}
