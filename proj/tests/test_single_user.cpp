#include <cmath>

#include "bmac/info_theory.hpp"
#include "bmac/single_user.hpp"
#include "test_common.hpp"

using namespace bmac;
using test::near;

namespace {

// Independent closed form: the stationarity H'(py)(t1-t2) = H(t1) - H(t2)
// determines the optimal output distribution directly.
struct ClosedForm {
  double capacity, p_opt;
};

ClosedForm capacity_closed_form(double t1, double t2) {
  const double s = (binary_entropy(t1) - binary_entropy(t2)) / (t1 - t2);
  const double py = 1.0 / (1.0 + std::exp(s));
  const double p = (py - t2) / (t1 - t2);
  return {binary_entropy(py) - p * binary_entropy(t1) - (1.0 - p) * binary_entropy(t2), p};
}

} // namespace

TEST_CASE("binary capacity endpoints") {
  const SingleUserResult noiseless = binary_capacity(1.0, 0.0);
  REQUIRE(near(noiseless.capacity, ln2, 1e-12));
  REQUIRE(near(noiseless.p_opt, 0.5, 1e-9));

  const SingleUserResult useless = binary_capacity(0.42, 0.42);
  REQUIRE(useless.capacity == 0.0);
  REQUIRE(useless.p_opt == 0.5);

  const SingleUserResult bsc = binary_capacity(0.9, 0.1);
  REQUIRE(near(bsc.capacity, 0.36806420716849707, 1e-12));
  REQUIRE(near(bsc.p_opt, 0.5, 1e-9));

  REQUIRE_THROWS_AS(binary_capacity(1.2, 0.0), domain_error);
}

TEST_CASE("bisection agrees with the closed form") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    const double t1 = test::uni(rng, 0.0, 1.0);
    double t2 = test::uni(rng, 0.0, 1.0);
    if (std::abs(t1 - t2) < 1e-3) t2 = t1 + 0.1 * (t1 < 0.5 ? 1.0 : -1.0);
    const SingleUserResult r = binary_capacity(t1, t2);
    const ClosedForm cf = capacity_closed_form(t1, t2);
    REQUIRE(near(r.capacity, cf.capacity, 1e-10));
    REQUIRE(near(r.p_opt, cf.p_opt, 1e-9));
  }
}

TEST_CASE("capacity symmetry and positivity") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 100; ++k) {
    const double t1 = test::uni(rng, 0.0, 1.0);
    const double t2 = test::uni(rng, 0.0, 1.0);
    const SingleUserResult a = binary_capacity(t1, t2);
    const SingleUserResult b = binary_capacity(t2, t1);
    REQUIRE(near(a.capacity, b.capacity, 1e-12));
    if (t1 != t2) {
      REQUIRE(near(a.p_opt + b.p_opt, 1.0, 1e-9));
      if (std::abs(t1 - t2) > 1e-2) REQUIRE(a.capacity > 1e-6);
    }
  }
}

TEST_CASE("axis intercepts") {
  const Channel single(1, 1, 0, 0);
  REQUIRE(near(e1(single).capacity, ln2, 1e-9));
  REQUIRE(e2(single).capacity == 0.0);

  // a = b = c: both intercepts are the same single-user capacity
  const Channel iso(0.8, 0.8, 0.8, 0.2);
  REQUIRE(e1(iso).capacity == e2(iso).capacity);

  // which frozen symbol wins is recorded
  const Channel ce(2.0 / 3.0, 0.25, 1e-3, 0.625);
  const SingleUserResult r1 = e1(ce);
  REQUIRE(r1.fixed_other == 1); // the (a,c) pair dominates the (b,d) pair
  REQUIRE(near(r1.capacity, binary_capacity(ce.a, ce.c).capacity, 0.0));
}

TEST_CASE("axis intercepts dominate the frozen-edge rates") {
  const Channel ce(2.0 / 3.0, 0.25, 1e-3, 0.625);
  const double cap1 = e1(ce).capacity;
  const double cap2 = e2(ce).capacity;
  double edge_max1 = 0.0, edge_max2 = 0.0;
  const int n = 1000000;
  for (int i = 0; i <= n; ++i) {
    const double p = static_cast<double>(i) / n;
    edge_max1 = std::max(edge_max1, std::max(mi_joint(ce, InputDist(p, 0.0)),
                                             mi_joint(ce, InputDist(p, 1.0))));
  }
  for (int i = 0; i <= 10000; ++i) {
    const double p = i / 10000.0;
    edge_max2 = std::max(edge_max2, std::max(mi_joint(ce, InputDist(0.0, p)),
                                             mi_joint(ce, InputDist(1.0, p))));
  }
  REQUIRE(cap1 >= edge_max1 - 1e-9);
  REQUIRE(near(cap1, edge_max1, 1e-9));
  REQUIRE(cap2 >= edge_max2 - 1e-9);
}
