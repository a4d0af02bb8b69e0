#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "minklab/haar.hpp"
#include "minklab/siegel.hpp"
#include "support/fixtures.hpp"

using namespace minklab;
using minklab::testing::random_fixture;
using minklab::testing::z5plus;

TEST_CASE("primitive tuple counts") {
  CHECK(f_hat_k(LatticeBasis::identity(2), 1, 1.5) == 8);
  CHECK(f_hat_k(LatticeBasis::identity(2), 1, 0.5) == 0);
  CHECK(f_hat_k(LatticeBasis::identity(3), 2, 1.1) == 24);
  CHECK(f_hat_k(z5plus(), 1, 1.0) == 10);
  CHECK(f_hat_k(z5plus(), 1, 1.12) == 42);
  const auto tuples = enumerate_primitive_tuples(LatticeBasis::identity(3), 2, 1.1);
  for (const auto& t : tuples) CHECK(t.order() == 2);
  CHECK_THROWS_AS(f_hat_k(LatticeBasis::identity(2), 2, 1.0), InvalidRange);
}

TEST_CASE("primitive tuple properties") {
  std::mt19937_64 rng(61);
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 8; ++trial) {
      const LatticeBasis b = random_fixture(d, rng, true);
      for (int k = 1; k < d; ++k) {
        CHECK(f_hat_k(b, k, 0.2) <= f_hat_k(b, k, 0.6));
        CHECK(f_hat_k(b, k, 0.6) <= f_hat_k(b, k, 1.0));
        const long n = f_hat_k(b, k, 1.0);
        // sign changes of each member
        CHECK(n % (1L << k) == 0);
        if (k == 2) CHECK(n % 2 == 0);
        CHECK(n == f_hat_k(LatticeBasis(random_rotation(d, rng) * b.columns()), k, 1.0));
      }
    }
  }
}

TEST_CASE("right-hand side") {
  const double ball = std::numbers::pi * 0.25;
  CHECK(siegel_right_side(2, 1, 0.5) == doctest::Approx(6.0 / (std::numbers::pi * std::numbers::pi) * ball));
  const double b3 = 4.0 / 3.0 * std::numbers::pi * std::pow(0.4, 3);
  CHECK(siegel_right_side(3, 2, 0.4) ==
        doctest::Approx(b3 * b3 / (riemann_zeta(3) * riemann_zeta(2))));
}

TEST_CASE("small Monte Carlo check") {
  const SiegelCheck c = siegel_mc_check(2, 1, 0.5, 20000, 3, SamplerKind::exact_d2);
  CHECK(std::abs(c.z) < 4.0);
  CHECK(c.sample_count == 20000);
  const SiegelCheck s = siegel_mc_check(2, 1, 0.5, 20000, 3, SamplerKind::siegel, 2);
  CHECK(std::abs(s.z) < 4.0);
  CHECK(s.to_json()["right"].get<double>() == doctest::Approx(s.right));
}
