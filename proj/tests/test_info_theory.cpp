#include <cmath>
#include <limits>

#include "bmac/info_theory.hpp"
#include "test_common.hpp"

using namespace bmac;
using test::near;

TEST_CASE("binary entropy") {
  REQUIRE(binary_entropy(0.0) == 0.0);
  REQUIRE(binary_entropy(1.0) == 0.0);
  REQUIRE(near(binary_entropy(0.5), ln2, 1e-15));
  REQUIRE(near(binary_entropy(0.1), 0.3250829733914482, 1e-14));
  REQUIRE(binary_entropy(0.3) == binary_entropy(0.7));
  REQUIRE_THROWS_AS(binary_entropy(-0.1), domain_error);
  REQUIRE_THROWS_AS(binary_entropy(1.1), domain_error);
}

TEST_CASE("kl divergence") {
  REQUIRE(kl_divergence(0.3, 0.3) == 0.0);
  REQUIRE(kl_divergence(0.5, 0.0) == std::numeric_limits<double>::infinity());
  REQUIRE(kl_divergence(0.5, 1.0) == std::numeric_limits<double>::infinity());
  REQUIRE(kl_divergence(0.0, 0.0) == 0.0);
  REQUIRE(kl_divergence(1.0, 1.0) == 0.0);
  REQUIRE(near(kl_divergence(0.1, 0.625), 0.6046637172436789, 1e-14));
  REQUIRE_THROWS_AS(kl_divergence(-0.1, 0.5), domain_error);
  REQUIRE_THROWS_AS(kl_divergence(0.5, 1.2), domain_error);
}

TEST_CASE("kl vanishes only on the diagonal") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const double q = test::uni(rng, 0.05, 0.95);
    REQUIRE(kl_divergence(q, q) <= 1e-15);
    const double p = test::uni(rng, 0.0, 1.0);
    if (std::abs(p - q) > 1e-3) REQUIRE(kl_divergence(p, q) > 1e-7);
  }
}

TEST_CASE("output distribution") {
  REQUIRE(prob_y1(Channel(1, 1, 0, 0), InputDist(0.5, 0.7)) == 0.5);
  REQUIRE(prob_y1(Channel(0.5, 0.5, 0.5, 0.5), InputDist(0.12, 0.93)) == 0.5);
  REQUIRE(near(prob_y1(Channel(2.0 / 3.0, 0.25, 1e-3, 0.625), InputDist(0.5, 0.5)),
               0.38566666666666666, 1e-12));
}

TEST_CASE("mutual information identities on degenerate channels") {
  const Channel silent2(0.35, 0.35, 0.8, 0.8); // a=b, c=d
  const Channel silent1(0.4, 0.7, 0.4, 0.7);   // a=c, b=d
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      const InputDist in(i / 10.0, j / 10.0);
      REQUIRE(mi_y_x2_given_x1(silent2, in) <= 1e-14);
      REQUIRE(mi_y_x1(silent1, in) <= 1e-14);
    }
  for (double p2 : {0.0, 0.3, 1.0})
    REQUIRE(near(mi_y_x1(Channel(1, 1, 0, 0), InputDist(0.5, p2)), ln2, 1e-12));
}

TEST_CASE("chain rule and nonnegativity") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 300; ++k) {
    const Channel ch = test::random_channel(rng, 0.0, 1.0);
    const InputDist in(test::uni(rng, 0.0, 1.0), test::uni(rng, 0.0, 1.0));
    const double joint = mi_joint(ch, in);
    REQUIRE(near(joint, mi_y_x1(ch, in) + mi_y_x2_given_x1(ch, in), 1e-12));
    REQUIRE(near(joint, mi_y_x2(ch, in) + mi_y_x1_given_x2(ch, in), 1e-12));
    REQUIRE(joint >= 0.0);
    REQUIRE(joint <= ln2 + 1e-12);
    REQUIRE(mi_y_x1(ch, in) >= 0.0);
    REQUIRE(mi_y_x2(ch, in) >= 0.0);
  }
}

TEST_CASE("corner points") {
  REQUIRE(corner_c1(Channel(0.5, 0.5, 0.5, 0.5), InputDist(0.3, 0.8)).r1 == 0.0);
  REQUIRE(near(corner_c1(Channel(0.5, 0.5, 0.5, 0.5), InputDist(0.3, 0.8)).r2, 0.0, 1e-15));
  const RatePair c1 = corner_c1(Channel(1, 1, 0, 0), InputDist(0.5, 0.5));
  REQUIRE(near(c1.r1, ln2, 1e-12));
  REQUIRE(near(c1.r2, 0.0, 1e-12));

  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const Channel ch = test::random_channel(rng);
    const InputDist in(test::uni(rng, 0.0, 1.0), test::uni(rng, 0.0, 1.0));
    const RatePair a = corner_c1(ch, in);
    const RatePair b = corner_c2(ch, in);
    REQUIRE(near(a.r1 + a.r2, mi_joint(ch, in), 1e-12));
    REQUIRE(near(b.r1 + b.r2, mi_joint(ch, in), 1e-12));
  }
}

TEST_CASE("user swap") {
  const Channel ch(0.1, 0.2, 0.3, 0.4);
  const Channel sw = swap_users(ch);
  REQUIRE(sw.a == 0.1);
  REQUIRE(sw.b == 0.3);
  REQUIRE(sw.c == 0.2);
  REQUIRE(sw.d == 0.4);
  REQUIRE(swap_users(sw) == ch);

  std::mt19937_64 rng(14);
  for (int k = 0; k < 100; ++k) {
    const Channel c = test::random_channel(rng);
    const double p1 = test::uni(rng, 0.0, 1.0), p2 = test::uni(rng, 0.0, 1.0);
    REQUIRE(near(mi_y_x2(c, InputDist(p1, p2)), mi_y_x1(swap_users(c), InputDist(p2, p1)),
                 1e-12));
    const RatePair c2 = corner_c2(c, InputDist(p1, p2));
    const RatePair c1s = corner_c1(swap_users(c), InputDist(p2, p1));
    REQUIRE(near(c2.r1, c1s.r2, 1e-12));
    REQUIRE(near(c2.r2, c1s.r1, 1e-12));
  }
}

TEST_CASE("type invariants") {
  REQUIRE_THROWS_AS(Channel(-0.1, 0, 0, 0), domain_error);
  REQUIRE_THROWS_AS(Channel(0, 0, 0, 1.5), domain_error);
  REQUIRE_THROWS_AS(InputDist(1.2, 0.5), domain_error);
  REQUIRE_THROWS_AS(Weights(0.0, 1.0), domain_error);
  REQUIRE_THROWS_AS(Weights(1.0, -2.0), domain_error);
  const Channel ch(0.75, 0.25, 0.625, 0.125);
  REQUIRE(ch.delta1() == 0.5);
  REQUIRE(ch.delta2() == 0.5);
}
