#include <doctest.h>

#include <cmath>
#include <random>

#include "minklab/lattice.hpp"
#include "support/fixtures.hpp"

using namespace minklab;
using minklab::testing::mat2;
using minklab::testing::random_fixture;

TEST_CASE("covolume of small bases") {
  CHECK(covolume(LatticeBasis::identity(3)) == doctest::Approx(1.0));
  CHECK(covolume(LatticeBasis(mat2(2, 0, 0, 0.5))) == doctest::Approx(1.0));
  // columns (1,0) and (1/2,1)
  CHECK(covolume(LatticeBasis(mat2(1, 0.5, 0, 1))) == doctest::Approx(1.0));
}

TEST_CASE("dependent columns are rejected") {
  CHECK_THROWS_AS(LatticeBasis(mat2(1, 2, 2, 4)), DegenerateBasis);
  CHECK_THROWS_AS(LatticeBasis(mat2(1, 1, 1, 1 + 1e-14)), DegenerateBasis);
  CHECK_THROWS_AS(LatticeBasis(Matrix::Zero(0, 0)), DegenerateBasis);
}

TEST_CASE("skewed but independent bases are accepted") {
  const LatticeBasis b(mat2(1e-6, 0, 0, 1e6));
  CHECK(b.covolume() == doctest::Approx(1.0));
}

TEST_CASE("dual examples") {
  CHECK((dual(LatticeBasis::identity(3)).columns() - Matrix::Identity(3, 3)).norm() < 1e-12);
  CHECK((dual(LatticeBasis(mat2(2, 0, 0, 0.5))).columns() - mat2(0.5, 0, 0, 2)).norm() < 1e-12);

  const LatticeBasis b(mat2(1, 0.5, 0, 1));
  const LatticeBasis bd = dual(b);
  CHECK((b.columns().transpose() * bd.columns() - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((gram(bd).entries - gram(b).entries.inverse()).norm() < 1e-12);
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(operator_norm(mat2(3, 0, 0, 1.0 / 3.0)) == doctest::Approx(3.0));
  CHECK(operator_norm(mat2(0, 2, 0, 0)) == doctest::Approx(2.0));
}

TEST_CASE("unimodular integer matrices") {
  CHECK(is_unimodular_integer_matrix(Matrix::Identity(3, 3)));
  CHECK(is_unimodular_integer_matrix(mat2(1, 1, 0, 1)));
  CHECK_FALSE(is_unimodular_integer_matrix(mat2(2, 0, 0, 1)));
  CHECK(is_unimodular_integer_matrix(mat2(1, 1e-7, 0, 1)));
  CHECK_FALSE(is_unimodular_integer_matrix(mat2(1, 0.1, 0, 1)));
  CHECK(is_unimodular_integer_matrix(mat2(0, 1, 1, 0)));
}

TEST_CASE("gram matrix is symmetric positive definite") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const GramMatrix g = gram(random_fixture(3, rng));
    CHECK((g.entries - g.entries.transpose()).norm() < 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(g.entries).eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("dual properties on random fixtures") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coeff(-4, 4);
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 25; ++trial) {
      const LatticeBasis b = random_fixture(d, rng);
      const LatticeBasis bd = dual(b);
      CHECK(covolume(bd) * covolume(b) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(same_lattice(dual(bd), b));

      // (T B)* spans the same lattice as T^{-T} B*.
      const LatticeBasis t = random_fixture(d, rng);
      const LatticeBasis lhs = dual(LatticeBasis(t.columns() * b.columns()));
      const LatticeBasis rhs(t.columns().inverse().transpose() * bd.columns());
      CHECK(same_lattice(lhs, rhs));

      // Pairings between lattice and dual lattice points are integers.
      IntVector c(d), e(d);
      for (int i = 0; i < d; ++i) {
        c(i) = coeff(rng);
        e(i) = coeff(rng);
      }
      const double pairing = b.embed(c).dot(bd.embed(e));
      CHECK(std::abs(pairing - std::round(pairing)) < 1e-9);
    }
  }
}

TEST_CASE("lattice vectors recompute from coefficients") {
  const LatticeBasis b(mat2(1, 0.5, 0, 1));
  IntVector c(2);
  c << 2, -3;
  const LatticeVector v = LatticeVector::from_coeffs(b, c);
  CHECK((v.embedding - b.columns() * c.cast<double>()).norm() < 1e-12);
  CHECK(v.norm == doctest::Approx(v.embedding.norm()));
}

TEST_CASE("same_lattice detects index-two sublattices") {
  CHECK(same_lattice(LatticeBasis(mat2(1, 1, 0, 1)), LatticeBasis::identity(2)));
  CHECK_FALSE(same_lattice(LatticeBasis(mat2(2, 0, 0, 1)), LatticeBasis::identity(2)));
}

TEST_CASE("basis json round trip and schema errors") {
  const LatticeBasis b(mat2(1, 0.5, 0, 2));
  const LatticeBasis back = basis_from_json(basis_to_json(b));
  CHECK((back.columns() - b.columns()).norm() == 0.0);
  // columns are listed outermost
  CHECK(basis_to_json(b)["columns"][1][0].get<double>() == 0.5);

  CHECK_THROWS_AS(basis_from_json({{"dim", 2}, {"columns", {{1, 0}}}}), SchemaError);
  CHECK_THROWS_AS(basis_from_json({{"dim", 2}, {"columns", {{1, 0}, {0}}}}), SchemaError);
  CHECK_THROWS_AS(basis_from_json({{"dim", 2}, {"columns", {{1, 0}, {0, "x"}}}}), SchemaError);
  CHECK_THROWS_AS(basis_from_json({{"dim", 2}, {"columns", {{1, 0}, {0, 1}}}, {"extra", 1}}),
                  SchemaError);
  CHECK_THROWS_AS(basis_from_json(nlohmann::json::array()), SchemaError);
  CHECK_THROWS_AS(load_basis("/nonexistent/basis.json"), SchemaError);
}
