#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "bmac/info_theory.hpp"
#include "bmac/objective.hpp"
#include "bmac/single_user.hpp"
#include "bmac/types.hpp"

// Constructive optimizers for the weighted sum-rate problem: the
// three-parameter fast path (case classification, pseudoconcave bisection,
// closed form for a=b=0), the general one-dimensional reduction, and the
// capacity-region boundary sweep.

namespace bmac {

enum class CaseTag { NotThreeParam, CaseA, CaseB };
enum class Location { Interior, BoundaryAxisUser1, BoundaryAxisUser2 };
enum class Method { CaseABoundary, CaseBBisection, ClosedForm, GeneralScan };

struct Solution {
  InputDist input{0.0, 0.0};
  RatePair rates;
  double value = 0.0;
  Location location = Location::Interior;
  Corner corner = Corner::C1;
  Method method = Method::GeneralScan;
  double p2_tolerance = 0.0;
};

// Ties between an interior candidate and the boundary within this margin
// report the boundary (the simpler certificate).
inline constexpr double solver_tie_tol = 1e-12;

// ---------------------------------------------------------------------------
// Three-parameter machinery

// Enforces the canonical ordering c > d for channels with a = b (exchanging
// c and d relabels user 2's symbols and leaves the capacity region
// unchanged). Rejects the degenerate orderings the fast path excludes.
struct Canonical3Param {
  Channel channel;
  bool swapped_cd = false;
};

inline Canonical3Param canonicalize_3param(const Channel& ch) {
  if (ch.a != ch.b) throw not_three_param_error("canonicalize_3param: requires a = b");
  Channel out = ch;
  bool swapped = false;
  if (out.c < out.d) {
    std::swap(out.c, out.d);
    swapped = true;
  }
  if (out.c == out.d)
    throw degenerate_channel_error("three-parameter channel with c = d: user 2 conveys nothing");
  if (out.a == out.c || out.a == out.d)
    throw degenerate_channel_error("three-parameter channel with a = c or a = d");
  return {out, swapped};
}

inline CaseTag classify_3param(const Channel& ch) {
  if (ch.a != ch.b) return CaseTag::NotThreeParam;
  const double lo = std::min(ch.c, ch.d), hi = std::max(ch.c, ch.d);
  return (ch.a > lo && ch.a < hi) ? CaseTag::CaseA : CaseTag::CaseB;
}

// Sign bracket produced by the bisection on h'; hi - lo < eps and h'
// changes sign across [lo, hi] (the epsilon certificate for p2).
struct HPrimeBisection {
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
};

// Bisection for the unique zero of h' on a pseudoconcave case-B channel.
// Probes the sign of h' at eps, 1/2 and 1-eps; if all three agree the
// stationary point is assumed absent (optimum on the boundary) and nothing
// is returned. Otherwise the sign-change interval is halved until its
// length drops below eps.
inline std::optional<HPrimeBisection> bisect_h_prime(const Channel& canonical, const Weights& w,
                                                     double eps) {
  if (canonical.a != canonical.b || !(canonical.c > canonical.d))
    throw domain_error("bisect_h_prime: requires a canonical channel (a = b, c > d)");
  if (classify_3param(canonical) != CaseTag::CaseB)
    throw domain_error("bisect_h_prime: requires a case-B channel");
  if (w.w1 > w.w2) throw domain_error("bisect_h_prime: requires w1 <= w2");
  if (!(eps > 0.0) || !(eps < 0.5)) throw domain_error("bisect_h_prime: eps outside (0, 0.5)");

  int evals = 0;
  const auto slope_sign = [&](double p) -> int {
    ++evals;
    const double v = h_prime(canonical, w, p);
    return (v > 0.0) - (v < 0.0);
  };

  const double lo0 = eps, hi0 = 1.0 - eps;
  const int s_lo = slope_sign(lo0);
  if (s_lo == 0) return HPrimeBisection{lo0, lo0, lo0, evals};
  const int s_mid = slope_sign(0.5);
  if (s_mid == 0) return HPrimeBisection{0.5, 0.5, 0.5, evals};
  const int s_hi = slope_sign(hi0);
  if (s_hi == 0) return HPrimeBisection{hi0, hi0, hi0, evals};
  if (s_lo == s_mid && s_mid == s_hi) return std::nullopt;

  double lo = lo0, hi = 0.5;
  int sign_lo = s_lo;
  if (s_lo == s_mid) {
    lo = 0.5;
    hi = hi0;
    sign_lo = s_mid;
  }
  while (hi - lo >= eps) {
    const double mid = 0.5 * (lo + hi);
    const int s = slope_sign(mid);
    if (s == 0) return HPrimeBisection{mid, mid, mid, evals};
    if (s == sign_lo)
      lo = mid;
    else
      hi = mid;
  }
  return HPrimeBisection{0.5 * (lo + hi), lo, hi, evals};
}

// Explicit solution of h'(p) = 0 for channels with a = b = 0, 0 < d < c and
// w1 < w2. Returns nothing when the stationary point falls outside (0,1)
// (boundary optimum).
inline std::optional<double> closed_form_a0(const Channel& canonical, const Weights& w) {
  if (canonical.a != 0.0 || canonical.b != 0.0)
    throw domain_error("closed_form_a0: requires a = b = 0");
  if (!(canonical.d > 0.0) || !(canonical.c > canonical.d))
    throw domain_error("closed_form_a0: requires 0 < d < c");
  if (!(w.w1 < w.w2)) throw domain_error("closed_form_a0: requires w1 < w2");
  const double d2 = canonical.delta2();
  const double delta0 = delta_fn(0.0, canonical.c, canonical.d);
  const double p = (1.0 - canonical.d - std::exp(-w.w2 * delta0 / (d2 * (w.w2 - w.w1)))) / d2;
  if (p > 0.0 && p < 1.0) return p;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Solution assembly helpers

namespace detail {

inline Solution boundary_solution(const Channel& ch, const Weights& w,
                                  const SingleUserResult& u1, const SingleUserResult& u2,
                                  Method method) {
  Solution s;
  s.method = method;
  s.corner = Corner::C1;
  s.p2_tolerance = 0.0;
  if (w.w1 * u1.capacity >= w.w2 * u2.capacity) {
    s.input = InputDist(u1.p_opt, static_cast<double>(u1.fixed_other));
    s.location = Location::BoundaryAxisUser1;
  } else {
    s.input = InputDist(static_cast<double>(u2.fixed_other), u2.p_opt);
    s.location = Location::BoundaryAxisUser2;
  }
  s.rates = corner_c1(ch, s.input);
  s.value = w.w1 * s.rates.r1 + w.w2 * s.rates.r2;
  return s;
}

inline Solution interior_solution(const Channel& ch, const Weights& w, double p1, double p2,
                                  Method method, double p2_tolerance) {
  Solution s;
  s.method = method;
  s.corner = Corner::C1;
  s.p2_tolerance = p2_tolerance;
  s.input = InputDist(p1, p2);
  s.location = Location::Interior;
  s.rates = corner_c1(ch, s.input);
  s.value = w.w1 * s.rates.r1 + w.w2 * s.rates.r2;
  return s;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Three-parameter solver

// Theorem-backed fast path for channels with a = b and weights w1 <= w2.
// Case A: no interior stationary point exists; the optimum is the better
// axis point. Case B: at most one interior stationary point, located by the
// closed form (when a = 0 and w1 < w2) or by bisection on h', and accepted
// only when the reduced point f(p) lands inside (0,1).
inline Solution solve_3param(const Channel& ch, const Weights& w, double eps = 1e-9) {
  const Canonical3Param canon = canonicalize_3param(ch);
  if (w.w1 > w.w2)
    throw domain_error("solve_3param: requires w1 <= w2 (use solve_general instead)");

  const SingleUserResult u1 = e1(ch);
  const SingleUserResult u2 = e2(ch);
  const CaseTag tag = classify_3param(canon.channel);

  if (tag == CaseTag::CaseA)
    return detail::boundary_solution(ch, w, u1, u2, Method::CaseABoundary);

  Method method = Method::CaseBBisection;
  double p2_tolerance = eps;
  std::optional<double> p_station;
  if (canon.channel.a == 0.0 && w.w1 < w.w2) {
    p_station = closed_form_a0(canon.channel, w);
    method = Method::ClosedForm;
    p2_tolerance = 0.0;
  } else if (const auto bis = bisect_h_prime(canon.channel, w, eps)) {
    p_station = bis->p;
  }

  const double boundary_value = std::max(w.w1 * u1.capacity, w.w2 * u2.capacity);
  if (p_station) {
    const ReducedPoint rp = f_map(canon.channel, w, *p_station);
    if (rp.in_p2bar) {
      const double interior_value = phi_hat(canon.channel, w, *p_station);
      if (interior_value > boundary_value + solver_tie_tol) {
        const double p2 = canon.swapped_cd ? 1.0 - *p_station : *p_station;
        return detail::interior_solution(ch, w, rp.p1_star, p2, method, p2_tolerance);
      }
    }
  }
  return detail::boundary_solution(ch, w, u1, u2, method);
}

// ---------------------------------------------------------------------------
// General solver

namespace detail {

// phi_hat made total: excluded points evaluate to -infinity.
inline double phi_hat_or_ninf(const Channel& ch, const Weights& w, double p) {
  if (!in_p2_set(ch, p)) return -std::numeric_limits<double>::infinity();
  return phi_hat(ch, w, p);
}

// Golden-section maximization of phi_hat on [lo, hi], to bracket width eps.
inline double golden_max(const Channel& ch, const Weights& w, double lo, double hi, double eps) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = phi_hat_or_ninf(ch, w, x1);
  double f2 = phi_hat_or_ninf(ch, w, x2);
  for (int it = 0; it < 200 && hi - lo > eps; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = phi_hat_or_ninf(ch, w, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = phi_hat_or_ninf(ch, w, x1);
    }
  }
  return 0.5 * (lo + hi);
}

inline void check_nondegenerate(const Channel& ch) {
  const bool user2_silent = ch.a == ch.b && ch.c == ch.d;
  const bool user1_silent = ch.a == ch.c && ch.b == ch.d;
  if (user1_silent && user2_silent)
    throw degenerate_channel_error("degenerate channel: neither user conveys information");
  if (user2_silent)
    throw degenerate_channel_error("degenerate channel: a = b and c = d, user 2 conveys nothing");
  if (user1_silent)
    throw degenerate_channel_error("degenerate channel: a = c and b = d, user 1 conveys nothing");
}

} // namespace detail

// Lemma-backed general solver, valid for every nondegenerate channel and
// weight vector. For w1 <= w2 it scans phi_hat over P2 on a uniform grid
// (the conjecture that the landscape is unimodal is not trusted), refines
// every local maximum by golden section, keeps candidates with f(p) in
// (0,1), and compares against the axis candidates w1*e1 and w2*e2. For
// w1 > w2 the user-swapped channel is solved and the result mapped back.
inline Solution solve_general(const Channel& ch, const Weights& w, int grid_n = 4096,
                              double eps = 1e-9) {
  detail::check_nondegenerate(ch);
  if (grid_n < 2) throw domain_error("solve_general: grid_n must be at least 2");

  if (w.w1 > w.w2) {
    const Solution sub = solve_general(swap_users(ch), Weights(w.w2, w.w1), grid_n, eps);
    Solution s;
    s.input = InputDist(sub.input.p2, sub.input.p1);
    s.rates = {sub.rates.r2, sub.rates.r1};
    s.value = sub.value;
    s.corner = Corner::C2;
    s.method = Method::GeneralScan;
    s.p2_tolerance = sub.p2_tolerance;
    switch (sub.location) {
      case Location::Interior: s.location = Location::Interior; break;
      case Location::BoundaryAxisUser1: s.location = Location::BoundaryAxisUser2; break;
      case Location::BoundaryAxisUser2: s.location = Location::BoundaryAxisUser1; break;
    }
    return s;
  }

  const SingleUserResult u1 = e1(ch);
  const SingleUserResult u2 = e2(ch);
  const double boundary_value = std::max(w.w1 * u1.capacity, w.w2 * u2.capacity);

  // Scan values; excluded points (the tol_h2 neighborhood of the h2 root)
  // are -infinity and never local maxima.
  std::vector<double> ps(grid_n), vals(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    ps[i] = static_cast<double>(i + 1) / (grid_n + 1);
    vals[i] = detail::phi_hat_or_ninf(ch, w, ps[i]);
  }

  double best_interior = -std::numeric_limits<double>::infinity();
  double best_p1 = 0.0, best_p2 = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    if (!std::isfinite(vals[i])) continue;
    const double left = i > 0 ? vals[i - 1] : -std::numeric_limits<double>::infinity();
    const double right =
        i + 1 < grid_n ? vals[i + 1] : -std::numeric_limits<double>::infinity();
    if (vals[i] < left || vals[i] < right) continue;

    const double lo = i > 0 ? ps[i - 1] : ps[i] - 1.0 / (grid_n + 1);
    const double hi = i + 1 < grid_n ? ps[i + 1] : ps[i] + 1.0 / (grid_n + 1);
    const double pm = detail::golden_max(ch, w, std::max(lo, 1e-13), std::min(hi, 1.0 - 1e-13),
                                         eps);
    if (!in_p2_set(ch, pm)) continue;
    const ReducedPoint rp = f_map(ch, w, pm);
    if (!rp.in_p2bar) continue;
    const double v = phi_hat(ch, w, pm);
    if (v > best_interior) {
      best_interior = v;
      best_p1 = rp.p1_star;
      best_p2 = pm;
    }
  }

  if (best_interior > boundary_value + solver_tie_tol)
    return detail::interior_solution(ch, w, best_p1, best_p2, Method::GeneralScan, eps);
  return detail::boundary_solution(ch, w, u1, u2, Method::GeneralScan);
}

// Routing used by the CLI: take the three-parameter fast path when it
// applies, fall back to the general solver when the fast path rejects the
// channel as degenerate for Theorem purposes (a = c or a = d).
inline Solution solve_auto(const Channel& ch, const Weights& w, int grid_n = 4096,
                           double eps = 1e-9) {
  if (ch.a == ch.b && w.w1 <= w.w2) {
    try {
      return solve_3param(ch, w, eps);
    } catch (const degenerate_channel_error&) {
      // a = c, a = d or c = d: outside the fast path's hypotheses but
      // possibly still solvable in general (a = b = c channels).
    }
  }
  return solve_general(ch, w, grid_n, eps);
}

// ---------------------------------------------------------------------------
// Region boundary

struct RegionVertex {
  RatePair rates;
  double w1 = 0.0; // supporting weight direction, normalized to w1 + w2 = 2
  double w2 = 0.0;
  InputDist input{0.0, 0.0};
};

// Ordered chain of boundary vertices from (e1, 0) to (0, e2), r1 decreasing.
struct RegionBoundary {
  std::vector<RegionVertex> vertices;
};

namespace detail {

inline double cross(const RatePair& a, const RatePair& b, const RatePair& c) {
  return (b.r1 - a.r1) * (c.r2 - a.r2) - (b.r2 - a.r2) * (c.r1 - a.r1);
}

inline double point_segment_distance(const RatePair& p, const RatePair& a, const RatePair& b) {
  const double vx = b.r1 - a.r1, vy = b.r2 - a.r2;
  const double len = std::hypot(vx, vy);
  if (len == 0.0) return std::hypot(p.r1 - a.r1, p.r2 - a.r2);
  return std::abs((p.r1 - a.r1) * vy - (p.r2 - a.r2) * vx) / len;
}

} // namespace detail

// Sweeps Chebyshev-spaced normalized weights (clustered near the axes to
// resolve steep and shallow supporting slopes), solves each, and prunes the
// collected rate pairs to the upper concave chain.
inline RegionBoundary region_boundary(const Channel& ch, int num_weights, double eps = 1e-9,
                                      int grid_n = 4096) {
  if (num_weights < 3) throw domain_error("region_boundary: num_weights must be at least 3");

  const bool user2_silent = ch.a == ch.b && ch.c == ch.d;
  const bool user1_silent = ch.a == ch.c && ch.b == ch.d;
  if (user1_silent && user2_silent)
    throw degenerate_channel_error("degenerate channel: neither user conveys information");

  const SingleUserResult u1 = e1(ch);
  const SingleUserResult u2 = e2(ch);
  const RegionVertex axis1{{u1.capacity, 0.0},
                           2.0,
                           0.0,
                           InputDist(u1.p_opt, static_cast<double>(u1.fixed_other))};
  const RegionVertex axis2{{0.0, u2.capacity},
                           0.0,
                           2.0,
                           InputDist(static_cast<double>(u2.fixed_other), u2.p_opt)};

  // Single-user channels: the region is the axis segment; no sweep needed.
  if (user1_silent || user2_silent) return {{axis1, axis2}};

  std::vector<RegionVertex> pts;
  pts.reserve(static_cast<std::size_t>(num_weights) + 2);
  pts.push_back(axis1);
  pts.push_back(axis2);
  for (int k = 0; k < num_weights; ++k) {
    const double w1 = 1.0 - std::cos(M_PI * (k + 0.5) / num_weights);
    const Weights w(w1, 2.0 - w1);
    const Solution s = solve_general(ch, w, grid_n, eps);
    pts.push_back({s.rates, w.w1, w.w2, s.input});
  }

  // Dedupe rate pairs, keeping the first occurrence.
  std::vector<RegionVertex> uniq;
  for (const auto& v : pts) {
    bool dup = false;
    for (const auto& u : uniq)
      if (std::abs(u.rates.r1 - v.rates.r1) <= 1e-10 &&
          std::abs(u.rates.r2 - v.rates.r2) <= 1e-10) {
        dup = true;
        break;
      }
    if (!dup) uniq.push_back(v);
  }

  // Upper hull over the points united with the origin, left to right.
  RegionVertex origin{{0.0, 0.0}, 0.0, 0.0, InputDist(0.0, 0.0)};
  uniq.push_back(origin);
  std::sort(uniq.begin(), uniq.end(), [](const RegionVertex& x, const RegionVertex& y) {
    return x.rates.r1 != y.rates.r1 ? x.rates.r1 < y.rates.r1 : x.rates.r2 < y.rates.r2;
  });
  std::vector<RegionVertex> hull;
  for (const auto& v : uniq) {
    while (hull.size() >= 2 &&
           detail::cross(hull[hull.size() - 2].rates, hull.back().rates, v.rates) >= 0.0)
      hull.pop_back();
    hull.push_back(v);
  }

  // The origin anchors the hull orientation but is not a boundary vertex
  // between the axis intercepts (e1, e2 > 0 here).
  if (!hull.empty() && hull.front().rates.r1 == 0.0 && hull.front().rates.r2 == 0.0)
    hull.erase(hull.begin());

  // Drop vertices that are collinear with their neighbors to solver noise.
  bool changed = true;
  while (changed && hull.size() > 2) {
    changed = false;
    for (std::size_t i = 1; i + 1 < hull.size(); ++i) {
      if (detail::point_segment_distance(hull[i].rates, hull[i - 1].rates, hull[i + 1].rates) <=
          1e-9) {
        hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }

  std::reverse(hull.begin(), hull.end()); // decreasing r1: (e1,0) first
  return {std::move(hull)};
}

} // namespace bmac
