#include <doctest.h>

#include <cmath>
#include <random>

#include "minklab/integer.hpp"
#include "minklab/minima.hpp"
#include "minklab/reduction.hpp"
#include "support/fixtures.hpp"

using namespace minklab;
using minklab::testing::hexagonal;
using minklab::testing::mat2;
using minklab::testing::random_fixture;
using minklab::testing::z5plus;

namespace {

void check_projection(const LatticeBasis& b, std::mt19937_64& rng) {
  const ProjectionStep step = project_off_shortest(b);
  const int d = b.dim();
  const double l1 = successive_minima(b).values[0];
  CHECK(step.shortest.norm == doctest::Approx(l1).epsilon(1e-9));
  CHECK(step.projected_basis.dim() == d - 1);
  CHECK(step.projected_basis.covolume() * step.shortest.norm ==
        doctest::Approx(b.covolume()).epsilon(1e-8));
  CHECK((step.frame.transpose() * step.frame - Matrix::Identity(d - 1, d - 1)).norm() < 1e-10);
  CHECK((step.projector * step.shortest.embedding).norm() < 1e-9 * l1);
  const long det = static_cast<long>(integer::determinant(step.completion));
  CHECK((det == 1 || det == -1));

  std::uniform_int_distribution<int> coeff(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    IntVector c(d);
    for (int i = 0; i < d; ++i) c(i) = coeff(rng);
    if (c.isZero()) continue;
    const Vector p = step.projector * b.embed(c);
    if (p.norm() <= 1e-9 * l1) continue;
    CHECK(p.norm() >= std::sqrt(3.0) / 2.0 * l1 - 1e-9);
  }
}

void check_quasi(const LatticeBasis& b) {
  const int d = b.dim();
  const QuasiMinimalBasis q = quasi_minimal_basis(b);
  const double c = quasi_minimal_constant(d);
  REQUIRE(static_cast<int>(q.vectors.size()) == d);
  IntMatrix coeffs(d, d);
  for (int j = 0; j < d; ++j) coeffs.col(j) = q.vectors[j].coeffs;
  const long det = static_cast<long>(integer::determinant(coeffs));
  CHECK((det == 1 || det == -1));
  CHECK(q.ratios[0] == doctest::Approx(1.0).epsilon(1e-9));
  for (double r : q.ratios) {
    CHECK(r >= 1.0 / c);
    CHECK(r <= c);
  }
}

}  // namespace

TEST_CASE("projection examples") {
  const ProjectionStep z2 = project_off_shortest(LatticeBasis::identity(2));
  CHECK(z2.shortest.norm == doctest::Approx(1.0));
  CHECK(z2.projected_basis.covolume() == doctest::Approx(1.0));

  const ProjectionStep diag = project_off_shortest(LatticeBasis(mat2(0.5, 0, 0, 2)));
  CHECK(diag.shortest.norm == doctest::Approx(0.5));
  CHECK(diag.projected_basis.covolume() == doctest::Approx(2.0));

  const ProjectionStep hex = project_off_shortest(hexagonal());
  CHECK(hex.projected_basis.covolume() == doctest::Approx(std::sqrt(3.0) / 2.0));

  CHECK_THROWS_AS(project_off_shortest(LatticeBasis::identity(1)), InvalidRange);
}

TEST_CASE("projection bound and covolume identity on random lattices") {
  std::mt19937_64 rng(41);
  for (int d = 2; d <= 4; ++d)
    for (int trial = 0; trial < 25; ++trial) check_projection(random_fixture(d, rng), rng);
}

TEST_CASE("quasi-minimal bases") {
  const QuasiMinimalBasis z3 = quasi_minimal_basis(LatticeBasis::identity(3));
  for (double r : z3.ratios) CHECK(r == doctest::Approx(1.0));
  for (const auto& v : z3.vectors) CHECK(v.coeffs.cwiseAbs().sum() == 1);

  const QuasiMinimalBasis z5 = quasi_minimal_basis(z5plus());
  for (double r : z5.ratios) CHECK(r <= quasi_minimal_constant(5));
  check_quasi(z5plus());

  std::mt19937_64 rng(43);
  for (int d = 2; d <= 4; ++d)
    for (int trial = 0; trial < 25; ++trial) check_quasi(random_fixture(d, rng, d == 4));

  CHECK_THROWS_AS(quasi_minimal_basis(LatticeBasis::identity(9)), DimensionTooLarge);
}

TEST_CASE("Minkowski reduction") {
  const LatticeBasis z2 = minkowski_reduce(LatticeBasis(mat2(5, 2, 2, 1)));
  CHECK(z2.columns().col(0).norm() == doctest::Approx(1.0));
  CHECK(z2.columns().col(1).norm() == doctest::Approx(1.0));
  CHECK(same_lattice(z2, LatticeBasis::identity(2)));

  Matrix sheared = hexagonal().columns() * mat2(1, 3, 0, 1);
  const LatticeBasis hex = minkowski_reduce(LatticeBasis(sheared));
  CHECK(hex.columns().col(0).norm() == doctest::Approx(1.0));
  CHECK(hex.columns().col(1).norm() == doctest::Approx(1.0));

  const LatticeBasis z5 = minkowski_reduce(z5plus());
  CHECK(z5.columns().col(0).norm() == doctest::Approx(1.0));
  CHECK(z5.columns().col(4).norm() > 1.0 + 1e-6);
  CHECK(same_lattice(z5, z5plus()));

  std::mt19937_64 rng(47);
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      const LatticeBasis b = random_fixture(d, rng);
      const LatticeBasis m = minkowski_reduce(b);
      CHECK(same_lattice(m, b));
      const auto lambda = successive_minima(b).values;
      CHECK(m.columns().col(0).norm() == doctest::Approx(lambda[0]).epsilon(1e-9));
      for (int i = 0; i < d; ++i) CHECK(m.columns().col(i).norm() >= lambda[i] - 1e-9);
    }
  }
  CHECK_THROWS_AS(minkowski_reduce(LatticeBasis::identity(6)), DimensionTooLarge);
}

TEST_CASE("product of minima against covolume") {
  for (int d = 1; d <= 5; ++d) CHECK(minkowski_product_ratio(LatticeBasis::identity(d)) == doctest::Approx(1.0));
  for (double a : {0.05, 0.3, 1.0}) {
    CHECK(minkowski_product_ratio(LatticeBasis(mat2(a, 0, 0, 1.0 / a))) == doctest::Approx(1.0));
  }
  const LatticeBasis hex(hexagonal().columns() / std::sqrt(std::sqrt(3.0) / 2.0));
  const double r = minkowski_product_ratio(hex);
  CHECK(r == doctest::Approx(2.0 / std::sqrt(3.0)));
  const auto [lo, hi] = minkowski_window(2);
  CHECK(lo == doctest::Approx(2.0 / std::numbers::pi));
  CHECK(hi == doctest::Approx(4.0 / std::numbers::pi));
  CHECK(r >= lo);
  CHECK(r <= hi);
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));

  std::mt19937_64 rng(53);
  for (int d = 2; d <= 5; ++d) {
    const auto [l, h] = minkowski_window(d);
    for (int trial = 0; trial < 10; ++trial) {
      const double ratio = minkowski_product_ratio(random_fixture(d, rng));
      CHECK(ratio >= l - 1e-9);
      CHECK(ratio <= h + 1e-9);
    }
  }
}
