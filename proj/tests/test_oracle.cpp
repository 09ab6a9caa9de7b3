#include <cmath>

#include "bmac/info_theory.hpp"
#include "bmac/oracle.hpp"
#include "bmac/solver.hpp"
#include "test_common.hpp"

using namespace bmac;
using test::near;

TEST_CASE("richardson central difference") {
  const double d = oracle::fd_derivative([](double p) { return binary_entropy(p); }, 0.25, 1e-5);
  REQUIRE(near(d, std::log(3.0), 1e-9)); // H'(p) = ln((1-p)/p)
  REQUIRE(near(oracle::fd_derivative([](double x) { return std::sin(x); }, 0.3, 1e-5),
               std::cos(0.3), 1e-10));
  REQUIRE(near(oracle::fd_derivative([](double x) { return x * x * x; }, 2.0, 1e-5), 12.0,
               1e-8));
}

TEST_CASE("joint table agrees with the entropy-difference path") {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 200; ++k) {
    const Channel ch = test::random_channel(rng, 0.0, 1.0);
    const InputDist in(test::uni(rng, 0.0, 1.0), test::uni(rng, 0.0, 1.0));
    const oracle::TableMI t = oracle::mi_table_all(ch, in);
    REQUIRE(near(t.iy_x1, mi_y_x1(ch, in), 1e-12));
    REQUIRE(near(t.iy_x2, mi_y_x2(ch, in), 1e-12));
    REQUIRE(near(t.iy_x1_given_x2, mi_y_x1_given_x2(ch, in), 1e-12));
    REQUIRE(near(t.iy_x2_given_x1, mi_y_x2_given_x1(ch, in), 1e-12));
    REQUIRE(near(t.joint, mi_joint(ch, in), 1e-12));
  }
  REQUIRE(near(oracle::mi_joint_table(Channel(0.5, 0.5, 0.5, 0.5), InputDist(0.3, 0.8)), 0.0,
               1e-15));
  REQUIRE(near(oracle::mi_joint_table(Channel(1, 1, 0, 0), InputDist(0.5, 0.2)), ln2, 1e-12));
}

TEST_CASE("grid scan equals the direct table maximum on small grids") {
  std::mt19937_64 rng(52);
  for (int k = 0; k < 5; ++k) {
    const Channel ch = test::random_channel(rng);
    const Weights w(test::uni(rng, 0.1, 2.0), test::uni(rng, 0.1, 2.0));
    const int n = 40;
    double best = -1.0;
    double bp1 = 0.0, bp2 = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const InputDist in(static_cast<double>(i) / n, static_cast<double>(j) / n);
        const oracle::TableMI t = oracle::mi_table_all(ch, in);
        const double v = std::max(w.w1 * t.iy_x1 + w.w2 * t.iy_x2_given_x1,
                                  w.w1 * t.iy_x1_given_x2 + w.w2 * t.iy_x2);
        if (v > best) {
          best = v;
          bp1 = in.p1;
          bp2 = in.p2;
        }
      }
    const oracle::GridResult g = oracle::grid_max(ch, w, n);
    REQUIRE(near(g.best_value, best, 1e-12));
    REQUIRE(g.best_input.p1 == bp1);
    REQUIRE(g.best_input.p2 == bp2);
  }
}

TEST_CASE("grid max trivial channels") {
  const oracle::GridResult g = oracle::grid_max(Channel(1, 1, 0, 0), Weights(1, 1), 1000);
  REQUIRE(near(g.best_value, ln2, 1e-12));
  REQUIRE(g.best_input.p1 == 0.5);
  REQUIRE(near(oracle::grid_max(Channel(0.5, 0.5, 0.5, 0.5), Weights(1, 1), 200).best_value,
               0.0, 1e-15));
  REQUIRE_THROWS_AS(oracle::grid_max(Channel(1, 1, 0, 0), Weights(1, 1), 1), domain_error);
}

TEST_CASE("grid refinement is monotone") {
  std::mt19937_64 rng(53);
  const Channel ch = test::random_channel(rng);
  const Weights w(0.7, 1.4);
  double prev = -1.0;
  for (int n : {100, 200, 400, 800}) {
    const double v = oracle::grid_max(ch, w, n).best_value;
    REQUIRE(v >= prev - 1e-15);
    prev = v;
  }
  REQUIRE(oracle::grid_max_c1(ch, w, 400).best_value <=
          oracle::grid_max(ch, w, 400).best_value + 1e-15);
}

TEST_CASE("solver-oracle gap shrinks quadratically with the grid") {
  std::mt19937_64 rng(54);
  const Channel ch = test::random_channel(rng);
  const Weights w(0.9, 1.1);
  const double solved = solve_general(ch, w).value;
  double fitted_c = 0.0;
  for (int n : {250, 500, 1000, 2000}) {
    const double gap = solved - oracle::grid_max(ch, w, n).best_value;
    REQUIRE(gap >= -1e-12); // the solver never falls below the grid
    fitted_c = std::max(fitted_c, gap * n * n);
  }
  INFO("fitted C in gap <= C/n^2: " << fitted_c);
  REQUIRE(solved - oracle::grid_max(ch, w, 2000).best_value <= 5e-6);
}
