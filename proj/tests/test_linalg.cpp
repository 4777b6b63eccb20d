#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betaflow/linalg.hpp"
#include "betaflow/noise.hpp"

#include <cmath>
#include <limits>

using namespace betaflow;

namespace {

Matrix random_hermitian(int d, Sector sector, std::uint64_t tag) {
  NoiseStream s(271828, 0);
  Draw g = s.open(NoiseSource::scratch, tag, 0);
  return hermitian_increment(g, d, sector, 1.0);
}

}  // namespace

TEST_CASE("spectral_decompose basic spectra") {
  SUBCASE("identity") {
    SpectralDecomp dec = spectral_decompose(Matrix::Identity(3, 3), Sector::hermitian);
    REQUIRE(dec.lambda.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(dec.lambda(i) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((dec.frame.adjoint() * dec.frame - Matrix::Identity(3, 3)).norm() < 1e-12);
  }

  SUBCASE("diagonal comes back sorted with basis-vector columns") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    m(2, 2) = 2.0;
    SpectralDecomp dec = spectral_decompose(m, Sector::symmetric);
    CHECK(dec.lambda(0) == doctest::Approx(1.0));
    CHECK(dec.lambda(1) == doctest::Approx(2.0));
    CHECK(dec.lambda(2) == doctest::Approx(3.0));
    // Columns are permuted standard basis vectors with positive pivot.
    CHECK(std::abs(dec.frame(1, 0).real() - 1.0) < 1e-12);
    CHECK(std::abs(dec.frame(2, 1).real() - 1.0) < 1e-12);
    CHECK(std::abs(dec.frame(0, 2).real() - 1.0) < 1e-12);
  }
}

TEST_CASE("spectral_decompose reconstructs the input") {
  for (auto sector : {Sector::symmetric, Sector::hermitian}) {
    Matrix m = random_hermitian(5, sector, sector == Sector::symmetric ? 1 : 2);
    SpectralDecomp dec = spectral_decompose(m, sector);
    Matrix rebuilt = dec.frame * dec.lambda.asDiagonal().toDenseMatrix().cast<Complex>() *
                     dec.frame.adjoint();
    CHECK((rebuilt - m).norm() < 1e-10 * (1.0 + m.norm()));
    for (int i = 0; i + 1 < 5; ++i) CHECK(dec.lambda(i) <= dec.lambda(i + 1));
  }
}

TEST_CASE("spectral_decompose rejects bad input") {
  Matrix bad = Matrix::Zero(2, 3);
  CHECK_THROWS_AS(spectral_decompose(bad, Sector::hermitian), std::invalid_argument);

  Matrix nan_m = Matrix::Zero(2, 2);
  nan_m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(spectral_decompose(nan_m, Sector::hermitian), std::invalid_argument);

  // Symmetric sector refuses a genuinely complex matrix.
  Matrix cplx = Matrix::Zero(2, 2);
  cplx(0, 1) = Complex(0.0, 1.0);
  cplx(1, 0) = Complex(0.0, -1.0);
  CHECK_THROWS_AS(spectral_decompose(cplx, Sector::symmetric), std::invalid_argument);
}

TEST_CASE("frame continuity follows the previous frame") {
  // A slowly rotating 2x2 family; with prev_frame handed along, consecutive
  // columns keep positive real overlap even where the raw eigensolver flips
  // signs.
  Matrix prev;
  for (int k = 0; k <= 50; ++k) {
    double t = 0.02 * k;
    double c = std::cos(t), s = std::sin(t);
    Matrix rot(2, 2);
    rot << c, -s, s, c;
    Matrix m = rot * Eigen::Vector2d(1.0, 3.0).asDiagonal().toDenseMatrix().cast<Complex>() *
               rot.adjoint();
    SpectralDecomp dec =
        spectral_decompose(m, Sector::symmetric, prev.size() ? &prev : nullptr);
    if (prev.size()) {
      for (int i = 0; i < 2; ++i) {
        Complex ov = (prev.col(i).adjoint() * dec.frame.col(i))(0, 0);
        CHECK(ov.real() > 0.0);
      }
    }
    prev = dec.frame;
  }
}

TEST_CASE("spectral_projectors are a resolution of the identity") {
  Matrix m = random_hermitian(4, Sector::hermitian, 5);
  SpectralDecomp dec = spectral_decompose(m, Sector::hermitian);
  auto projs = spectral_projectors(dec);
  REQUIRE(projs.size() == 4);

  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& p : projs) sum += p;
  CHECK((sum - Matrix::Identity(4, 4)).norm() < 1e-12);

  for (std::size_t i = 0; i < projs.size(); ++i) {
    CHECK((projs[i] * projs[i] - projs[i]).norm() < 1e-12);
    CHECK((projs[i] - projs[i].adjoint()).norm() < 1e-12);
    for (std::size_t j = i + 1; j < projs.size(); ++j)
      CHECK((projs[i] * projs[j]).norm() < 1e-12);
  }
}

TEST_CASE("reorthonormalize") {
  SUBCASE("orthogonal input is a fixed point") {
    NoiseStream s(99, 0);
    Draw g = s.open(NoiseSource::haar, 0, 0);
    Matrix q = haar_sample(g, 3, Sector::hermitian);
    CHECK((reorthonormalize(q) - q).norm() < 1e-12);
  }

  SUBCASE("scaling is projected out") {
    Matrix two_i = 2.0 * Matrix::Identity(3, 3);
    CHECK((reorthonormalize(two_i) - Matrix::Identity(3, 3)).norm() < 1e-12);
  }

  SUBCASE("small perturbation stays close") {
    Matrix near_i = Matrix::Identity(3, 3);
    near_i(0, 1) += 1e-3;
    near_i(2, 0) -= 1e-3;
    Matrix r = reorthonormalize(near_i);
    CHECK((r.adjoint() * r - Matrix::Identity(3, 3)).norm() < 1e-12);
    CHECK((r - near_i).norm() < 2e-3);
  }

  SUBCASE("collapsed frame throws") {
    Matrix degenerate = Matrix::Zero(2, 2);
    degenerate(0, 0) = 1.0;
    degenerate(1, 1) = 1e-3;
    CHECK_THROWS_AS(reorthonormalize(degenerate), std::runtime_error);
  }
}

TEST_CASE("conjugate preserves the spectrum") {
  Matrix m = random_hermitian(4, Sector::symmetric, 7);
  NoiseStream s(100, 0);
  Draw g = s.open(NoiseSource::haar, 1, 0);
  Matrix q = haar_sample(g, 4, Sector::symmetric);

  Matrix moved = conjugate(m, q);
  RealVector before = spectral_decompose(m, Sector::symmetric).lambda;
  RealVector after = spectral_decompose(moved, Sector::symmetric).lambda;
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);

  Matrix wrong_shape = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(conjugate(m, wrong_shape), std::invalid_argument);
}

TEST_CASE("hermitize keeps the hermitian part") {
  Matrix m(2, 2);
  m << Complex(1.0, 0.5), Complex(2.0, 1.0), Complex(0.0, 0.0), Complex(3.0, -0.5);
  hermitize(m);
  CHECK((m - m.adjoint()).norm() < 1e-15);
  CHECK(m(0, 1) == Complex(1.0, 0.5));
  CHECK(m(1, 0) == Complex(1.0, -0.5));
}
