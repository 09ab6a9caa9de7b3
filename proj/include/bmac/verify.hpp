#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bmac/kkt.hpp"
#include "bmac/objective.hpp"
#include "bmac/oracle.hpp"
#include "bmac/parse.hpp"
#include "bmac/single_user.hpp"
#include "bmac/solver.hpp"
#include "bmac/types.hpp"

// The verification suite: every release-gating property of the library,
// one entry per criterion, each with its tolerance pinned in code. Run by
// the `verify` CLI subcommand and by the acceptance test binary.

namespace bmac {
namespace verify {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

struct FixtureCase {
  Channel channel{0.5, 0.5, 0.5, 0.5};
  Weights weights{1.0, 1.0};
};

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Channel random_channel(std::mt19937_64& rng, double lo = 0.01, double hi = 0.99) {
  return Channel(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi),
                 uniform(rng, lo, hi));
}

// Canonical three-parameter channel with a separated from {c, d}.
inline Channel random_3param(std::mt19937_64& rng, bool case_a) {
  while (true) {
    double d = uniform(rng, 0.05, 0.85);
    double c = uniform(rng, d + 0.08, 0.95);
    double a;
    if (case_a) {
      a = d + uniform(rng, 0.1, 0.9) * (c - d);
    } else if (d > 0.1 && (rng() & 1u)) {
      a = uniform(rng, 0.01, d - 0.03);
    } else if (c < 0.9) {
      a = uniform(rng, c + 0.03, 0.99);
    } else {
      continue;
    }
    if (a <= 0.0 || a >= 1.0) continue;
    return Channel(a, a, c, d);
  }
}

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

// Max componentwise gradient error against the Richardson finite
// difference, under the mixed absolute/relative rule.
struct GradCheck {
  bool ok = true;
  double worst_rel = 0.0;
  double worst_abs = 0.0;
};

inline void check_gradient(const Channel& ch, const Weights& w, const InputDist& in,
                           GradCheck& acc) {
  const Gradient g = grad_psi(ch, w, in);
  const double fd1 = oracle::fd_derivative(
      [&](double x) { return psi(ch, w, InputDist(x, in.p2)); }, in.p1, 1e-6);
  const double fd2 = oracle::fd_derivative(
      [&](double y) { return psi(ch, w, InputDist(in.p1, y)); }, in.p2, 1e-6);
  for (const auto& [an, fd] : {std::pair{g.dp1, fd1}, std::pair{g.dp2, fd2}}) {
    const double mag = std::max(std::abs(an), std::abs(fd));
    const double err = std::abs(an - fd);
    if (mag < 1e-3) {
      acc.worst_abs = std::max(acc.worst_abs, err);
      if (err > 1e-9) acc.ok = false;
    } else {
      acc.worst_rel = std::max(acc.worst_rel, err / mag);
      if (err > 1e-6 * mag) acc.ok = false;
    }
  }
}

inline int count_kind(const std::vector<KktPoint>& pts, KktKind k, bool boundary) {
  int n = 0;
  for (const auto& p : pts)
    if (p.kind == k && p.on_boundary == boundary) ++n;
  return n;
}

} // namespace detail

// 1. Analytic gradient vs Richardson central differences on 1000 random
//    interior samples.
inline CriterionResult criterion_gradient_suite() {
  CriterionResult r{1, "gradient-suite", false, 0.0, 5.0, ""};
  std::mt19937_64 rng(1001);
  detail::GradCheck acc;
  for (int k = 0; k < 1000; ++k) {
    const Channel ch = detail::random_channel(rng);
    const Weights w(detail::uniform(rng, 0.1, 2.0), detail::uniform(rng, 0.1, 2.0));
    const InputDist in(detail::uniform(rng, 0.05, 0.95), detail::uniform(rng, 0.05, 0.95));
    detail::check_gradient(ch, w, in, acc);
  }
  r.pass = acc.ok;
  r.detail = "worst rel " + detail::fmt(acc.worst_rel) + " (limit 1e-6), worst abs " +
             detail::fmt(acc.worst_abs) + " (limit 1e-9)";
  return r;
}

// 2. The sum-rate counterexample channel has exactly three KKT points:
//    boundary global max, boundary local max, interior saddle.
inline CriterionResult criterion_counterexample_kkt() {
  CriterionResult r{2, "counterexample-kkt", false, 0.0, 2.0, ""};
  const Channel ch(2.0 / 3.0, 0.25, 1e-3, 0.625);
  const Weights w(1.0, 1.0);
  const auto pts = find_kkt_points(ch, w);
  double worst_resid = 0.0;
  for (const auto& p : pts) worst_resid = std::max(worst_resid, p.residual);
  const bool shape = pts.size() == 3 &&
                     detail::count_kind(pts, KktKind::GlobalMax, true) == 1 &&
                     detail::count_kind(pts, KktKind::LocalMax, true) == 1 &&
                     detail::count_kind(pts, KktKind::Saddle, false) == 1;
  r.pass = shape && worst_resid <= 1e-8;
  r.detail = std::to_string(pts.size()) + " points, worst residual " +
             detail::fmt(worst_resid) + " (limit 1e-8)";
  return r;
}

// 3. The case-A channel whose optimum is interior: solve_general must
//    return an interior solution matching the grid oracle.
inline CriterionResult criterion_interior_optimum() {
  CriterionResult r{3, "interior-optimum", false, 0.0, 3.0, ""};
  const Channel ch(0.2, 0.4, 0.5, 0.3);
  const Weights w(0.2, 0.8);
  const Solution s = solve_general(ch, w);
  const double oracle_max = oracle::grid_max(ch, w, 2000).best_value;
  const double gap = std::abs(s.value - oracle_max);
  r.pass = s.location == Location::Interior && gap <= 5e-6;
  r.detail = std::string("location ") + (s.location == Location::Interior ? "Interior" : "Boundary") +
             ", |value - oracle| " + detail::fmt(gap) + " (limit 5e-6)";
  return r;
}

// 4. Case A (a strictly between d and c): no interior stationary point and
//    the solver returns the better axis candidate, confirmed by the oracle.
inline CriterionResult criterion_case_a() {
  CriterionResult r{4, "theorem1-case-a", false, 0.0, 30.0, ""};
  std::mt19937_64 rng(4004);
  double worst_axis_gap = 0.0, worst_oracle_gap = 0.0, min_grad = 1e300;
  for (int k = 0; k < 100; ++k) {
    const Channel ch = detail::random_3param(rng, true);
    double w1 = detail::uniform(rng, 0.1, 2.0), w2 = detail::uniform(rng, 0.1, 2.0);
    if (w1 > w2) std::swap(w1, w2);
    const Weights w(w1, w2);

    const Solution s = solve_3param(ch, w);
    const double axis_best = std::max(w.w1 * e1(ch).capacity, w.w2 * e2(ch).capacity);
    worst_axis_gap = std::max(worst_axis_gap, std::abs(s.value - axis_best));
    for (int i = 1; i <= 201; ++i)
      for (int j = 1; j <= 201; ++j) {
        const Gradient g = grad_psi(ch, w, InputDist(i / 202.0, j / 202.0));
        min_grad = std::min(min_grad, std::hypot(g.dp1, g.dp2));
      }
    const double oracle_max = oracle::grid_max(ch, w, 2000).best_value;
    worst_oracle_gap = std::max(worst_oracle_gap, std::abs(s.value - oracle_max));
  }
  r.pass = worst_axis_gap <= 1e-9 && min_grad > 1e-6 && worst_oracle_gap <= 5e-6;
  r.detail = "axis gap " + detail::fmt(worst_axis_gap) + " (limit 1e-9), min |grad| " +
             detail::fmt(min_grad) + " (floor 1e-6), oracle gap " +
             detail::fmt(worst_oracle_gap) + " (limit 5e-6)";
  return r;
}

// 5. Case B: phi_hat' has at most one sign change (+ to -) and the
//    bisection agrees with the dense scan and the oracle.
inline CriterionResult criterion_case_b() {
  CriterionResult r{5, "theorem1-case-b", false, 0.0, 60.0, ""};
  std::mt19937_64 rng(5005);
  constexpr int scan_n = 10000;
  const double spacing = 1.0 / (scan_n + 1);
  bool ok = true;
  double worst_p_gap = 0.0, worst_oracle_gap = 0.0;
  for (int k = 0; k < 100 && ok; ++k) {
    const Channel ch = detail::random_3param(rng, false);
    double w1 = detail::uniform(rng, 0.1, 2.0), w2 = detail::uniform(rng, 0.1, 2.0);
    if (w1 > w2) std::swap(w1, w2);
    const Weights w(w1, w2);

    int changes = 0, prev = 0, argmax = -1;
    bool plus_to_minus = true;
    double best = -1e300;
    for (int i = 1; i <= scan_n; ++i) {
      const double p = i * spacing;
      const double dv = phi_hat_prime(ch, w, p);
      const int s = (dv > 0.0) - (dv < 0.0);
      if (s != 0) {
        if (prev != 0 && s != prev) {
          ++changes;
          if (!(prev > 0 && s < 0)) plus_to_minus = false;
        }
        prev = s;
      }
      const double v = phi_hat(ch, w, p);
      if (v > best) {
        best = v;
        argmax = i;
      }
    }
    if (changes > 1 || (changes == 1 && !plus_to_minus)) ok = false;

    const auto bis = bisect_h_prime(ch, w, 1e-9);
    if (bis) {
      if (bis->hi - bis->lo > 1e-9) ok = false;
      const ReducedPoint rp = f_map(ch, w, bis->p);
      if (rp.in_p2bar && argmax > 1 && argmax < scan_n) {
        const double gap = std::abs(bis->p - argmax * spacing);
        worst_p_gap = std::max(worst_p_gap, gap);
        if (gap > spacing + 1e-9) ok = false;
      }
    }
    const Solution s = solve_3param(ch, w);
    const double oracle_max = oracle::grid_max(ch, w, 2000).best_value;
    worst_oracle_gap = std::max(worst_oracle_gap, std::abs(s.value - oracle_max));
    if (worst_oracle_gap > 5e-6) ok = false;
  }
  r.pass = ok;
  r.detail = "worst |p_eps - scan argmax| " + detail::fmt(worst_p_gap) + " (limit " +
             detail::fmt(spacing + 1e-9) + "), oracle gap " + detail::fmt(worst_oracle_gap) +
             " (limit 5e-6)";
  return r;
}

// 6. Closed form for a = b = 0: agreement with the bisection and the
//    oracle, plus the worked instance.
inline CriterionResult criterion_closed_form() {
  CriterionResult r{6, "closed-form-a0", false, 0.0, 10.0, ""};
  std::mt19937_64 rng(6006);
  bool ok = true;
  double worst_p_gap = 0.0, worst_oracle_gap = 0.0;
  for (int k = 0; k < 50 && ok; ++k) {
    const double d = detail::uniform(rng, 0.05, 0.5);
    const double c = detail::uniform(rng, d + 0.1, 0.95);
    double w1 = detail::uniform(rng, 0.1, 2.0), w2 = detail::uniform(rng, 0.1, 2.0);
    if (w1 > w2) std::swap(w1, w2);
    if (w2 - w1 < 0.05) w2 = w1 + 0.05;
    const Channel ch(0.0, 0.0, c, d);
    const Weights w(w1, w2);

    const auto p_closed = closed_form_a0(ch, w);
    const auto p_bis = bisect_h_prime(ch, w, 1e-9);
    if (p_closed && p_bis) {
      const double gap = std::abs(*p_closed - p_bis->p);
      worst_p_gap = std::max(worst_p_gap, gap);
      if (gap > 1e-9 + 1e-9) ok = false;
    }
    const Solution s = solve_3param(ch, w);
    const double oracle_max = oracle::grid_max(ch, w, 2000).best_value;
    worst_oracle_gap = std::max(worst_oracle_gap, std::abs(s.value - oracle_max));
    if (worst_oracle_gap > 5e-6) ok = false;
  }
  const auto p_worked = closed_form_a0(Channel(0.0, 0.0, 0.9, 0.1), Weights(1.0, 2.0));
  const bool worked = p_worked && std::abs(*p_worked - 0.47256) <= 1e-4;
  r.pass = ok && worked;
  r.detail = "worst |p*-p_eps| " + detail::fmt(worst_p_gap) + " (limit 2e-9), oracle gap " +
             detail::fmt(worst_oracle_gap) + " (limit 5e-6), worked p* " +
             (p_worked ? detail::fmt(*p_worked) : std::string("none")) + " (0.47256 +- 1e-4)";
  return r;
}

// 7. Identities underlying the case analysis.
inline CriterionResult criterion_proof_identities() {
  CriterionResult r{7, "proof-identities", false, 0.0, 5.0, ""};
  std::mt19937_64 rng(7007);
  double worst = 0.0;
  bool signs_ok = true;
  for (int k = 0; k < 50; ++k) {
    const double d = detail::uniform(rng, 0.02, 0.6);
    const double c = detail::uniform(rng, d + 0.05, 0.98);
    worst = std::max(worst, std::abs(delta_fn(c, c, d)));
    worst = std::max(worst, std::abs(delta_fn(d, c, d)));
    // strict convexity of delta in a: positive second differences
    for (double a = 0.1; a < 0.9; a += 0.1) {
      const double dd =
          delta_fn(a + 0.05, c, d) - 2.0 * delta_fn(a, c, d) + delta_fn(a - 0.05, c, d);
      if (dd <= 0.0) signs_ok = false;
    }
    const double a3 = detail::uniform(rng, 0.02, 0.98);
    const Channel ch3(a3, a3, c, d);
    worst = std::max(worst, std::abs(h4(ch3, 0.0)));
    worst = std::max(worst, std::abs(h4(ch3, 1.0)));
    for (int i = 1; i < 40; ++i) {
      const double p = i / 40.0;
      if (h4(ch3, p) >= 0.0) signs_ok = false;
      if (in_p2_set(ch3, p) && !(f_map(ch3, Weights(1.0, 1.5), p).p1_star < 1.0))
        signs_ok = false;
    }
    worst = std::max(worst, std::abs(v_fn(ch3, 0.0) + kl_divergence(ch3.d, ch3.a)));
    worst = std::max(worst, std::abs(v_fn(ch3, 1.0) + kl_divergence(ch3.c, ch3.a)));
    // output-distribution identity on a random general channel
    const Channel ch = detail::random_channel(rng);
    for (int i = 0; i <= 10; ++i)
      for (int j = 0; j <= 10; ++j) {
        const double p1 = i / 10.0, p2 = j / 10.0;
        const double lhs = h3(ch, p2) + p1 * h2(ch, p2);
        const double rhs = 1.0 - prob_y1(ch, InputDist(p1, p2));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  r.pass = worst <= 1e-12 && signs_ok;
  r.detail = "worst identity residual " + detail::fmt(worst) +
             " (limit 1e-12), sign structure " + (signs_ok ? "ok" : "violated");
  return r;
}

// 8. The one-dimensional reduction solves every nondegenerate channel to
//    oracle accuracy.
inline CriterionResult criterion_lemma1_equivalence(
    const std::vector<FixtureCase>* extra = nullptr) {
  CriterionResult r{8, "lemma1-equivalence", false, 0.0, 120.0, ""};
  std::mt19937_64 rng(8008);
  std::vector<FixtureCase> cases;
  cases.reserve(200);
  for (int k = 0; k < 200; ++k) {
    Channel ch = detail::random_channel(rng);
    while (std::abs(ch.a - ch.b) + std::abs(ch.c - ch.d) < 1e-6 ||
           std::abs(ch.a - ch.c) + std::abs(ch.b - ch.d) < 1e-6)
      ch = detail::random_channel(rng);
    cases.push_back(
        {ch, Weights(detail::uniform(rng, 0.1, 2.0), detail::uniform(rng, 0.1, 2.0))});
  }
  if (extra) cases.insert(cases.end(), extra->begin(), extra->end());

  double worst = 0.0;
  for (const auto& cse : cases) {
    const Solution s = solve_general(cse.channel, cse.weights);
    const double oracle_max = oracle::grid_max(cse.channel, cse.weights, 2000).best_value;
    worst = std::max(worst, std::abs(s.value - oracle_max));
  }
  r.pass = worst <= 5e-6;
  r.detail = std::to_string(cases.size()) + " channels, worst |value - oracle| " +
             detail::fmt(worst) + " (limit 5e-6)";
  return r;
}

// 9. The traced G1 outline of the counterexample channel is nonconvex and
//    has slope -1 at the rate image of the interior saddle.
inline CriterionResult criterion_g1_trace() {
  CriterionResult r{9, "g1-nonconvexity", false, 0.0, 5.0, ""};
  const Channel ch(2.0 / 3.0, 0.25, 1e-3, 0.625);
  const Weights w(1.0, 1.0);
  const auto outline = trace_g1(ch, 800);

  // Convex hull of the outline (monotone chain, full hull).
  std::vector<RatePair> pts = outline;
  std::sort(pts.begin(), pts.end(), [](const RatePair& a, const RatePair& b) {
    return a.r1 != b.r1 ? a.r1 < b.r1 : a.r2 < b.r2;
  });
  const auto cross = [](const RatePair& o, const RatePair& p, const RatePair& q) {
    return (p.r1 - o.r1) * (q.r2 - o.r2) - (p.r2 - o.r2) * (q.r1 - o.r1);
  };
  std::vector<RatePair> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (const auto& p : pts) {
      while (hull.size() >= base + 2 &&
             cross(hull[hull.size() - 2], hull.back(), p) <= 0.0)
        hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }

  // Depth of the deepest outline vertex strictly inside the hull.
  double depth = 0.0;
  for (const auto& p : outline) {
    double dmin = 1e300;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const RatePair& a = hull[i];
      const RatePair& b = hull[(i + 1) % hull.size()];
      const double cr = cross(a, b, p);
      const double len = std::hypot(b.r1 - a.r1, b.r2 - a.r2);
      if (len == 0.0) continue;
      dmin = std::min(dmin, cr / len); // signed inward distance (hull is CCW)
    }
    if (dmin < 1e300) depth = std::max(depth, dmin);
  }

  // Tangent slope at the saddle's rate image, by principal direction of
  // the nearby outline points.
  const auto kkt_pts = find_kkt_points(ch, w);
  RatePair saddle{};
  bool have_saddle = false;
  for (const auto& p : kkt_pts)
    if (!p.on_boundary && p.kind == KktKind::Saddle) {
      saddle = p.rates;
      have_saddle = true;
    }
  double slope = 0.0;
  if (have_saddle) {
    double sxx = 0.0, sxy = 0.0, syy = 0.0, sx = 0.0, sy = 0.0;
    int n = 0;
    for (const auto& p : outline) {
      const double dist = std::hypot(p.r1 - saddle.r1, p.r2 - saddle.r2);
      if (dist > 8e-3) continue;
      sx += p.r1;
      sy += p.r2;
      sxx += p.r1 * p.r1;
      sxy += p.r1 * p.r2;
      syy += p.r2 * p.r2;
      ++n;
    }
    if (n >= 4) {
      const double mxx = sxx / n - (sx / n) * (sx / n);
      const double mxy = sxy / n - (sx / n) * (sy / n);
      const double myy = syy / n - (sy / n) * (sy / n);
      const double lam = 0.5 * (mxx + myy) + std::hypot(0.5 * (mxx - myy), mxy);
      // principal eigenvector (vx, vy) satisfies (mxx - lam) vx + mxy vy = 0
      const double vx = mxy, vy = lam - mxx;
      slope = vx != 0.0 ? vy / vx : 1e9;
    }
  }
  const bool slope_ok = have_saddle && std::abs(slope + 1.0) <= 0.05;
  r.pass = depth >= 1e-4 && slope_ok;
  r.detail = "dent depth " + detail::fmt(depth) + " (floor 1e-4), tangent slope " +
             detail::fmt(slope) + " (-1 +- 0.05)";
  return r;
}

// 10. Channels with a = b = c: equal axis intercepts and a two-vertex
//     (time-sharing segment) region boundary.
inline CriterionResult criterion_isosceles() {
  CriterionResult r{10, "isosceles-region", false, 0.0, 2.0, ""};
  bool ok = true;
  double worst_e_gap = 0.0;
  std::size_t worst_vertices = 2;
  for (const auto& ch : {Channel(0.8, 0.8, 0.8, 0.2), Channel(0.3, 0.3, 0.3, 0.7),
                         Channel(0.1, 0.1, 0.1, 0.6)}) {
    const double gap = std::abs(e1(ch).capacity - e2(ch).capacity);
    worst_e_gap = std::max(worst_e_gap, gap);
    const RegionBoundary rb = region_boundary(ch, 201, 1e-9, 2048);
    worst_vertices = std::max(worst_vertices, rb.vertices.size());
    if (gap > 1e-9 || rb.vertices.size() != 2) ok = false;
  }
  r.pass = ok;
  r.detail = "worst |e1 - e2| " + detail::fmt(worst_e_gap) + " (limit 1e-9), max chain size " +
             std::to_string(worst_vertices) + " (expected 2)";
  return r;
}

inline std::vector<CriterionResult> run_all(const std::vector<FixtureCase>* fixtures = nullptr) {
  std::vector<CriterionResult> results;
  const auto timed = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = fn();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.budget_seconds) {
      r.pass = false;
      r.detail += " [over time budget]";
    }
    results.push_back(std::move(r));
  };
  timed([] { return criterion_gradient_suite(); });
  timed([] { return criterion_counterexample_kkt(); });
  timed([] { return criterion_interior_optimum(); });
  timed([] { return criterion_case_a(); });
  timed([] { return criterion_case_b(); });
  timed([] { return criterion_closed_form(); });
  timed([] { return criterion_proof_identities(); });
  timed([&] { return criterion_lemma1_equivalence(fixtures); });
  timed([] { return criterion_g1_trace(); });
  timed([] { return criterion_isosceles(); });
  return results;
}

inline bool report(const std::vector<CriterionResult>& results, std::ostream& os) {
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    char line[512];
    std::snprintf(line, sizeof(line), "[%s] %2d. %-22s (%.2fs/%.0fs) %s\n",
                  r.pass ? "PASS" : "FAIL", r.index, r.name.c_str(), r.seconds,
                  r.budget_seconds, r.detail.c_str());
    os << line;
  }
  os << (all ? "all criteria passed\n" : "FAILURES present\n");
  return all;
}

} // namespace verify
} // namespace bmac
