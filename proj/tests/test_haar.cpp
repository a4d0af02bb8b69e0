#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "minklab/haar.hpp"
#include "minklab/stats.hpp"
#include "support/fixtures.hpp"

using namespace minklab;
using minklab::testing::mat2;

TEST_CASE("Iwasawa examples") {
  const IwasawaCoords id = iwasawa_decompose(Matrix::Identity(3, 3));
  CHECK((id.k - Matrix::Identity(3, 3)).norm() < 1e-12);
  CHECK((id.a - Vector::Ones(3)).norm() < 1e-12);
  CHECK((id.n - Matrix::Identity(3, 3)).norm() < 1e-12);

  const IwasawaCoords diag = iwasawa_decompose(mat2(2, 0, 0, 0.5));
  CHECK(diag.a(0) == doctest::Approx(2.0));
  CHECK(diag.a(1) == doctest::Approx(0.5));
  CHECK((diag.k - Matrix::Identity(2, 2)).norm() < 1e-12);

  const IwasawaCoords unip = iwasawa_decompose(mat2(1, 1, 0, 1));
  CHECK(unip.n(0, 1) == doctest::Approx(1.0));
  CHECK((unip.a - Vector::Ones(2)).norm() < 1e-12);

  CHECK_THROWS_AS(iwasawa_decompose(mat2(2, 0, 0, 1)), NotUnimodular);
  CHECK_THROWS_AS(iwasawa_decompose(Matrix::Identity(2, 3)), NotUnimodular);
}

TEST_CASE("Iwasawa reconstruction") {
  std::mt19937_64 rng(5);
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix g = testing::random_fixture(d, rng, true).columns();
      const IwasawaCoords c = iwasawa_decompose(g);
      CHECK((c.reconstruct() - g).norm() < 1e-10 * g.norm());
      CHECK((c.k.transpose() * c.k - Matrix::Identity(d, d)).norm() < 1e-10);
      CHECK(c.k.determinant() == doctest::Approx(1.0));
      CHECK(c.a.prod() == doctest::Approx(1.0));
      for (int i = 0; i < d; ++i) {
        CHECK(c.a(i) > 0.0);
        CHECK(c.n(i, i) == doctest::Approx(1.0));
        for (int j = 0; j < i; ++j) CHECK(c.n(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("Haar density") {
  CHECK(haar_density(Vector::Ones(3)) == doctest::Approx(1.0));
  Vector a2(2);
  a2 << 3.0, 1.0 / 3.0;
  CHECK(haar_density(a2) == doctest::Approx(9.0));
  Vector a3(3);
  a3 << 2.0, 1.0, 0.5;
  CHECK(haar_density(a3) == doctest::Approx(16.0));
}

TEST_CASE("Siegel sets") {
  CHECK(SiegelSet{}.covers_fundamental_domain());
  CHECK_FALSE(SiegelSet{1.0, 0.5}.covers_fundamental_domain());
  CHECK_FALSE(SiegelSet{2.0, 0.4}.covers_fundamental_domain());
  CHECK(SiegelSet{}.contains(iwasawa_decompose(Matrix::Identity(2, 2))));
  CHECK_FALSE(SiegelSet{}.contains(iwasawa_decompose(mat2(2, 0, 0, 0.5))));
  CHECK_FALSE(SiegelSet{}.contains(iwasawa_decompose(mat2(1, 0.7, 0, 1))));
}

TEST_CASE("zeta values and volume constants") {
  CHECK(riemann_zeta(2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-12));
  CHECK(riemann_zeta(3) == doctest::Approx(1.2020569031595942).epsilon(1e-12));
  CHECK(riemann_zeta(4) == doctest::Approx(std::pow(std::numbers::pi, 4) / 90.0).epsilon(1e-12));
  CHECK_THROWS_AS(riemann_zeta(1), InvalidRange);

  const VolumeConstants v2 = volume_constants(2, 1);
  CHECK(v2.vol_k == doctest::Approx(2.0));
  CHECK(v2.vol_x == doctest::Approx(riemann_zeta(2)));
  CHECK(v2.c_dk == doctest::Approx(6.0 / (std::numbers::pi * std::numbers::pi)));

  const VolumeConstants v3 = volume_constants(3, 2);
  CHECK(v3.vol_k == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(v3.vol_x == doctest::Approx(riemann_zeta(2) * riemann_zeta(3)));
  CHECK(v3.c_dk == doctest::Approx(1.0 / (riemann_zeta(2) * riemann_zeta(3))));
  CHECK(volume_constants(3, 1).c_dk == doctest::Approx(1.0 / riemann_zeta(3)));
}

TEST_CASE("Siegel translate counts") {
  CHECK(count_siegel_translates(LatticeBasis(mat2(0.01, 0, 0, 100)), SiegelSet{}) == 1);
  CHECK(count_siegel_translates(LatticeBasis::identity(2), SiegelSet{}) == 2);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const SampleEnsemble e = sample_siegel(3, 1, 1000 + trial);
    const LatticeBasis& b = e.samples[0].basis;
    const int m = count_siegel_translates(b, SiegelSet{});
    CHECK(m >= 1);
    CHECK(m == count_siegel_translates(LatticeBasis(random_rotation(3, rng) * b.columns()), SiegelSet{}));
  }
  CHECK_THROWS_AS(count_siegel_translates(LatticeBasis::identity(4), SiegelSet{}), DimensionTooLarge);
}

TEST_CASE("samplers") {
  const SampleEnsemble a = sample_siegel(3, 500, 7, {}, 1);
  const SampleEnsemble b = sample_siegel(3, 500, 7, {}, 3);
  REQUIRE(a.samples.size() == 500);
  WeightedMean one;
  for (std::size_t s = 0; s < a.samples.size(); ++s) {
    CHECK(a.samples[s].basis.columns() == b.samples[s].basis.columns());
    CHECK(a.samples[s].weight == b.samples[s].weight);
    CHECK(a.samples[s].basis.covolume() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::isfinite(a.samples[s].weight));
    CHECK(a.samples[s].weight > 0.0);
    CHECK(SiegelSet{}.contains(iwasawa_decompose(a.samples[s].basis.columns()), 1e-9));
    one.add(a.samples[s].weight, 1.0);
  }
  CHECK(one.mean() == doctest::Approx(1.0));
  CHECK(a.weight_kind == WeightKind::importance);

  const SampleEnsemble exact = sample_exact_d2(300, 3);
  for (const auto& s : exact.samples) {
    CHECK(s.weight == 1.0);
    CHECK(s.basis.covolume() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(exact.weight_kind == WeightKind::exact);
  CHECK(sample_exact_d2(10, 3).samples[4].basis.columns() == exact.samples[4].basis.columns());

  CHECK_THROWS_AS(sample_siegel(4, 10, 1), DimensionTooLarge);

  SamplerConfig tilted{SamplerKind::siegel, 3, {}, {1.0, 0.5}};
  CHECK(sample_ensemble(tilted, 50, 1).samples.size() == 50);
  tilted.tilt = {3.0, 0.5};
  CHECK_THROWS_AS(sample_ensemble(tilted, 10, 1), InvalidRange);
  tilted.tilt = {1.0};
  CHECK_THROWS_AS(sample_ensemble(tilted, 10, 1), InvalidRange);
  SamplerConfig exact_tilt{SamplerKind::exact_d2, 2, {}, {1.0}};
  CHECK_THROWS_AS(sample_ensemble(exact_tilt, 10, 1), InvalidRange);

  const Truncation tr = siegel_truncation(3, SiegelSet{});
  CHECK(tr.tail_mass < 1e-6);
  CHECK(sampler_from_string(to_string(SamplerKind::exact_d2)) == SamplerKind::exact_d2);
  CHECK_THROWS_AS(sampler_from_string("bogus"), ValidationError);
}
