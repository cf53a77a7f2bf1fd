#include <cmath>
#include <stdexcept>
#include <limits>

#include "doctest.h"
#include "keygraph/model.hpp"
#include "keygraph/rng.hpp"
#include "oracles.hpp"

using namespace keygraph;

namespace {

SchemeParameters two_class(std::vector<int> K, int P = 10000, double alpha = 0.4, int n = 500) {
  return SchemeParameters{n, {0.5, 0.5}, std::move(K), P, alpha};
}

KeyringSearch figure1_search(double alpha, int k = 2) {
  KeyringSearch s;
  s.n = 500;
  s.k = k;
  s.alpha = alpha;
  s.mu = {0.5, 0.5};
  s.offsets = {0, 10};
  s.P = 10000;
  s.K_lo = 1;
  s.K_hi = 100;
  return s;
}

}  // namespace

TEST_CASE("validate accepts the two-class reference point without advisories") {
  const ValidationReport r = validate(two_class({5, 15}));
  CHECK(r.ok());
  CHECK(r.advisories.empty());
}

TEST_CASE("validate reports hard errors") {
  SUBCASE("probabilities not normalized") {
    SchemeParameters p = two_class({5, 15});
    p.mu = {0.6, 0.6};
    const ValidationReport r = validate(p);
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors.front().find("1.2") != std::string::npos);
  }
  SUBCASE("K not nondecreasing") {
    CHECK_FALSE(validate(two_class({3, 2})).ok());
  }
  SUBCASE("ring larger than pool") {
    CHECK_FALSE(validate(two_class({5, 15}, 10)).ok());
  }
  SUBCASE("alpha zero rejected") {
    CHECK_FALSE(validate(two_class({5, 15}, 10000, 0.0)).ok());
  }
  SUBCASE("nonpositive class probability") {
    SchemeParameters p{10, {1.0, 0.0}, {2, 3}, 100, 0.5};
    CHECK_FALSE(validate(p).ok());
  }
  SUBCASE("length mismatch") {
    SchemeParameters p{10, {1.0}, {2, 3}, 100, 0.5};
    CHECK_FALSE(validate(p).ok());
  }
}

TEST_CASE("validate advisories") {
  CHECK(validate(two_class({1, 15})).scaling_advisory());
  CHECK(validate(two_class({5, 6000})).scaling_advisory());
  const ValidationReport full = validate(two_class({5, 15}, 10000, 1.0));
  CHECK(full.ok());
  CHECK(full.full_channel_advisory());
  CHECK_FALSE(full.scaling_advisory());
}

TEST_CASE("mu within tolerance is accepted and renormalized") {
  SchemeParameters p = two_class({5, 15});
  p.mu = {0.5 + 4e-13, 0.5};
  CHECK(validate(p).ok());
  const SchemeParameters q = p.normalized();
  CHECK(q.mu[0] + q.mu[1] == doctest::Approx(1.0).epsilon(1e-15));
  p.mu = {0.5 + 1e-9, 0.5};
  CHECK_FALSE(validate(p).ok());
}

TEST_CASE("pairwise_edge_prob examples") {
  CHECK(pairwise_edge_prob(6, 5, 10) == 1.0);
  CHECK(pairwise_edge_prob(1, 1, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::fabs(pairwise_edge_prob(2, 2, 10) - 17.0 / 45.0) < 1e-14);
  CHECK_THROWS_AS(pairwise_edge_prob(0, 1, 10), std::domain_error);
  CHECK_THROWS_AS(pairwise_edge_prob(11, 1, 10), std::domain_error);
}

TEST_CASE("pairwise_edge_prob matches exhaustive ring-pair enumeration") {
  for (int P = 1; P <= 10; ++P) {
    const auto table = keygraph::testing::enumerate_ring_pairs(P);
    for (int ki = 1; ki <= P; ++ki) {
      for (int kj = 1; kj <= P; ++kj) {
        INFO("Ki=" << ki << " Kj=" << kj << " P=" << P);
        CHECK(std::fabs(pairwise_edge_prob(ki, kj, P) - table[ki][kj].fraction()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("pairwise_edge_prob symmetry, bounds and monotonicity") {
  for (int P = 1; P <= 30; ++P) {
    for (int ki = 1; ki <= P; ++ki) {
      for (int kj = 1; kj <= P; ++kj) {
        const double p = pairwise_edge_prob(ki, kj, P);
        REQUIRE(std::fabs(p - pairwise_edge_prob(kj, ki, P)) <= 1e-13);
        REQUIRE(p > 0.0);
        REQUIRE(p <= 1.0);
        if (ki < P) REQUIRE(pairwise_edge_prob(ki + 1, kj, P) >= p - 1e-15);
        if (kj < P) REQUIRE(pairwise_edge_prob(ki, kj + 1, P) >= p - 1e-15);
        REQUIRE(pairwise_edge_prob(ki, kj, P + 1) <= p + 1e-15);
      }
    }
  }
  RngStream rng(7);
  for (int i = 0; i < 2000; ++i) {
    const int ki = 1 + static_cast<int>(rng.uniform_below(200));
    const int kj = 1 + static_cast<int>(rng.uniform_below(200));
    const double a = pairwise_edge_prob(ki, kj, 10000);
    const double b = pairwise_edge_prob(kj, ki, 10000);
    REQUIRE(std::fabs(a - b) <= 1e-12 * std::max(1.0, a));
  }
}

TEST_CASE("pairwise_edge_prob stays finite and accurate at the large pool") {
  // 1 - C(P-K, K)/C(P, K) for small K/P behaves like 1 - exp(-K^2/P).
  const double p = pairwise_edge_prob(40, 50, 10000);
  CHECK(std::isfinite(p));
  CHECK(p == doctest::Approx(1.0 - std::exp(-2000.0 / 10000.0)).epsilon(0.02));
  CHECK(pairwise_edge_prob(10, 10, 100) < 1.0);
  CHECK(pairwise_edge_prob(5000, 5000, 10000) <= 1.0);
  CHECK(pairwise_edge_prob(5000, 5001, 10000) == 1.0);
}

TEST_CASE("mean_key_edge_prob") {
  SchemeParameters single{10, {1.0}, {4}, 30, 0.5};
  CHECK(mean_key_edge_prob(0, single) == pairwise_edge_prob(4, 4, 30));

  SchemeParameters tiny{10, {0.5, 0.5}, {1, 1}, 2, 1.0};
  CHECK(mean_key_edge_prob(0, tiny) == doctest::Approx(0.5));

  const auto table = keygraph::testing::enumerate_ring_pairs(10);
  SchemeParameters mixed{10, {0.5, 0.5}, {2, 4}, 10, 1.0};
  const double expected = 0.5 * table[2][2].fraction() + 0.5 * table[2][4].fraction();
  CHECK(std::fabs(mean_key_edge_prob(0, mixed) - expected) < 1e-12);

  CHECK_THROWS_AS(mean_key_edge_prob(2, mixed), std::out_of_range);
  CHECK_THROWS_AS(mean_key_edge_prob(-1, mixed), std::out_of_range);
}

TEST_CASE("mean_intersection_edge_prob is alpha times lambda") {
  SchemeParameters p = two_class({26, 36}, 10000, 1.0);
  CHECK(mean_intersection_edge_prob(0, p) == mean_key_edge_prob(0, p));
  p.alpha = 0.2;
  const double lambda = 0.5 * pairwise_edge_prob(26, 26, 10000) +
                        0.5 * pairwise_edge_prob(26, 36, 10000);
  CHECK(mean_intersection_edge_prob(0, p) == doctest::Approx(0.2 * lambda).epsilon(1e-14));

  SchemeParameters half{10, {0.5, 0.5}, {1, 1}, 2, 0.5};
  CHECK(mean_intersection_edge_prob(0, half) == doctest::Approx(0.25));
}

TEST_CASE("gamma_deviation") {
  const double ln500 = std::log(500.0);
  CHECK(std::fabs(gamma_deviation(500, 1, ln500 / 500)) < 1e-12);
  CHECK(std::fabs(gamma_deviation(500, 2, (ln500 + std::log(ln500)) / 500)) < 1e-12);
  CHECK(gamma_deviation(500, 2, 0.0) == doctest::Approx(-(ln500 + std::log(ln500))));
  CHECK_THROWS_AS(gamma_deviation(2, 1, 0.1), std::domain_error);
  CHECK_THROWS_AS(gamma_deviation(500, 0, 0.1), std::domain_error);
}

TEST_CASE("gamma_deviation inverts the critical scaling") {
  for (int n : {3, 500, 1000000}) {
    for (int k : {1, 2, 5}) {
      for (double gamma : {-10.0, 0.0, 10.0}) {
        const double Lambda1 = lambda_for_gamma(n, k, gamma);
        CHECK(std::fabs(gamma_deviation(n, k, Lambda1) - gamma) <= 1e-9);
      }
    }
  }
}

TEST_CASE("critical_min_keyring") {
  SUBCASE("threshold already met at the range start returns K_lo") {
    KeyringSearch s = figure1_search(1.0);
    s.K_lo = 60;
    CHECK(critical_min_keyring(s) == 60);
  }
  SUBCASE("frozen values from an exact rational scan") {
    CHECK(critical_min_keyring(figure1_search(0.2)) == 27);
    CHECK(critical_min_keyring(figure1_search(0.4)) == 18);
    CHECK(critical_min_keyring(figure1_search(0.6)) == 15);
    CHECK(critical_min_keyring(figure1_search(0.8)) == 12);
    CHECK(critical_min_keyring(figure1_search(0.6, 4)) == 18);
    CHECK(critical_min_keyring(figure1_search(0.6, 6)) == 21);
    CHECK(critical_min_keyring(figure1_search(0.6, 8)) == 24);
    CHECK(critical_min_keyring(figure1_search(0.6, 10)) == 26);
  }
  SUBCASE("close to the K1(K1+5)/P approximation") {
    const KeyringSearch s = figure1_search(0.2);
    const double threshold = critical_scaling(500, 2) / 0.2;
    int approx = 1;
    while (approx * (approx + 5) / 10000.0 <= threshold) ++approx;
    const auto exact = critical_min_keyring(s);
    REQUIRE(exact);
    CHECK(std::abs(*exact - approx) <= 2);
  }
  SUBCASE("minimality: lambda crosses the threshold exactly there") {
    for (double alpha : {0.2, 0.4, 0.6, 0.8}) {
      for (int k : {1, 2, 5}) {
        const KeyringSearch s = figure1_search(alpha, k);
        const auto K = critical_min_keyring(s);
        REQUIRE(K);
        const double threshold = critical_scaling(s.n, k) / alpha;
        SchemeParameters p{s.n, s.mu, {*K, *K + 10}, s.P, alpha};
        CHECK(mean_key_edge_prob(0, p) > threshold);
        if (*K - 1 >= s.K_lo) {
          p.K = {*K - 1, *K + 9};
          CHECK(mean_key_edge_prob(0, p) <= threshold);
        }
      }
    }
  }
  SUBCASE("monotone in alpha") {
    CHECK(*critical_min_keyring(figure1_search(0.8)) < *critical_min_keyring(figure1_search(0.2)));
  }
  SUBCASE("none in range") {
    KeyringSearch s = figure1_search(0.2);
    s.K_lo = 1;
    s.K_hi = 10;
    CHECK_FALSE(critical_min_keyring(s).has_value());
  }
  SUBCASE("malformed searches") {
    KeyringSearch s = figure1_search(0.2);
    s.K_lo = 10;
    s.K_hi = 9;
    CHECK_THROWS_AS(critical_min_keyring(s), std::domain_error);
    s = figure1_search(0.2);
    s.K_hi = 9995;
    CHECK_THROWS_AS(critical_min_keyring(s), std::domain_error);
    s = figure1_search(0.2);
    s.offsets = {1, 10};
    CHECK_THROWS_AS(critical_min_keyring(s), std::domain_error);
  }
  SUBCASE("single class reduces to p11") {
    KeyringSearch s;
    s.n = 500;
    s.k = 2;
    s.alpha = 0.5;
    s.mu = {1.0};
    s.offsets = {0};
    s.P = 10000;
    s.K_lo = 1;
    s.K_hi = 200;
    const auto K = critical_min_keyring(s);
    REQUIRE(K);
    const double threshold = critical_scaling(500, 2) / 0.5;
    CHECK(pairwise_edge_prob(*K, *K, 10000) > threshold);
    CHECK(pairwise_edge_prob(*K - 1, *K - 1, 10000) <= threshold);
  }
}

TEST_CASE("smallness_ratio") {
  CHECK(smallness_ratio(SchemeParameters{10, {1.0}, {10}, 100, 1.0}) == doctest::Approx(1.0));
  CHECK(smallness_ratio(two_class({26, 36})) == doctest::Approx(0.0806));
}
