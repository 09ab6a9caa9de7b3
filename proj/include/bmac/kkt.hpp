#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "bmac/objective.hpp"
#include "bmac/oracle.hpp"
#include "bmac/single_user.hpp"
#include "bmac/types.hpp"

// First-order optimality machinery: residuals of the stationarity
// conditions in simplex coordinates, enumeration and classification of the
// points satisfying them, and the traced outline of the rate image
// G1 = { C1(q1,q2) } whose nonconvexity is what breaks KKT sufficiency.

namespace bmac {

enum class KktKind { GlobalMax, LocalMax, Saddle, LocalMin, Degenerate };

struct KktPoint {
  InputDist input{0.0, 0.0};
  double residual = 0.0;
  KktKind kind = KktKind::Degenerate;
  bool on_boundary = false;
  double value = 0.0; // Psi at the point
  RatePair rates;     // C1 image
};

namespace detail {

// Sum over y of x-weighted log-ratio terms: x*ln(r/s) + (1-x)*ln((1-r)/(1-s)).
inline double cross_term(double x, double r, double s) {
  return x * std::log(r / s) + (1.0 - x) * std::log((1.0 - r) / (1.0 - s));
}

struct SimplexGradient {
  // d Psi / d q_us for the multilinear extension, u,s in {1,2}.
  double q11, q12, q21, q22;
};

// Closed forms for the four simplex partial derivatives. Requires all
// channel parameters strictly inside (0,1) so every logarithm is finite.
inline SimplexGradient simplex_gradient(const Channel& ch, const Weights& w, double p1,
                                        double p2) {
  const double alpha = out_given_x1_1(ch, p2);
  const double beta = out_given_x1_2(ch, p2);
  const double py = p1 * alpha + (1.0 - p1) * beta;
  SimplexGradient g;
  g.q11 = w.w1 * (kl_divergence(alpha, py) - 1.0) +
          w.w2 * (p2 * kl_divergence(ch.a, alpha) + (1.0 - p2) * kl_divergence(ch.b, alpha));
  g.q12 = w.w1 * (kl_divergence(beta, py) - 1.0) +
          w.w2 * (p2 * kl_divergence(ch.c, beta) + (1.0 - p2) * kl_divergence(ch.d, beta));
  g.q21 = w.w1 * (p1 * cross_term(ch.a, alpha, py) + (1.0 - p1) * cross_term(ch.c, beta, py)) +
          w.w2 * (p1 * kl_divergence(ch.a, alpha) + (1.0 - p1) * kl_divergence(ch.c, beta) - 1.0);
  g.q22 = w.w1 * (p1 * cross_term(ch.b, alpha, py) + (1.0 - p1) * cross_term(ch.d, beta, py)) +
          w.w2 * (p1 * kl_divergence(ch.b, alpha) + (1.0 - p1) * kl_divergence(ch.d, beta) - 1.0);
  return g;
}

inline void require_differentiable(const Channel& ch) {
  const bool interior = ch.a > 0.0 && ch.a < 1.0 && ch.b > 0.0 && ch.b < 1.0 && ch.c > 0.0 &&
                        ch.c < 1.0 && ch.d > 0.0 && ch.d < 1.0;
  if (!interior)
    throw domain_error(
        "kkt: channel parameters must lie strictly inside (0,1) for differentiability");
}

} // namespace detail

// Maximum violation of the stationarity system at the given input: for an
// active coordinate (q_us > 0) the absolute equality residual
// |dPsi/dq_us - (Psi - w_u)|, for an inactive coordinate the positive part
// of dPsi/dq_us - (Psi - w_u).
inline double kkt_residual(const Channel& ch, const Weights& w, const InputDist& in) {
  detail::require_differentiable(ch);
  const double value = psi(ch, w, in);
  const auto g = detail::simplex_gradient(ch, w, in.p1, in.p2);
  const std::array<std::array<double, 2>, 4> rows = {{{in.p1, g.q11 - (value - w.w1)},
                                                      {1.0 - in.p1, g.q12 - (value - w.w1)},
                                                      {in.p2, g.q21 - (value - w.w2)},
                                                      {1.0 - in.p2, g.q22 - (value - w.w2)}}};
  double worst = 0.0;
  for (const auto& [mass, resid] : rows)
    worst = std::max(worst, mass > 0.0 ? std::abs(resid) : std::max(0.0, resid));
  return worst;
}

namespace detail {

struct Hessian2 {
  double xx, xy, yy;
  std::pair<double, double> eigenvalues() const {
    const double m = 0.5 * (xx + yy);
    const double r = std::hypot(0.5 * (xx - yy), xy);
    return {m - r, m + r};
  }
};

inline Hessian2 fd_hessian(const Channel& ch, const Weights& w, double x, double y,
                           double step = 1e-5) {
  const auto f = [&](double p1, double p2) { return psi_at(ch, w, p1, p2); };
  const double f0 = f(x, y);
  Hessian2 h;
  h.xx = (f(x + step, y) - 2.0 * f0 + f(x - step, y)) / (step * step);
  h.yy = (f(x, y + step) - 2.0 * f0 + f(x, y - step)) / (step * step);
  h.xy = (f(x + step, y + step) - f(x + step, y - step) - f(x - step, y + step) +
          f(x - step, y - step)) /
         (4.0 * step * step);
  return h;
}

// Damped Newton iteration on the analytic gradient; the Jacobian is a
// central difference of the gradient. Returns true on convergence to
// ||grad||_inf <= 1e-12 with the iterate strictly inside the square.
inline bool newton_polish(const Channel& ch, const Weights& w, double& x, double& y) {
  constexpr double jstep = 1e-6;
  const auto g = [&](double p1, double p2) { return grad_psi(ch, w, InputDist(p1, p2)); };
  Gradient gr = g(x, y);
  for (int it = 0; it < 50; ++it) {
    if (gr.norm_inf() <= 1e-12) return true;
    const Gradient gxp = g(std::min(x + jstep, 1.0), y), gxm = g(std::max(x - jstep, 0.0), y);
    const Gradient gyp = g(x, std::min(y + jstep, 1.0)), gym = g(x, std::max(y - jstep, 0.0));
    const double j11 = (gxp.dp1 - gxm.dp1) / (2.0 * jstep);
    const double j21 = (gxp.dp2 - gxm.dp2) / (2.0 * jstep);
    const double j12 = (gyp.dp1 - gym.dp1) / (2.0 * jstep);
    const double j22 = (gyp.dp2 - gym.dp2) / (2.0 * jstep);
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
    const double sx = (-gr.dp1 * j22 + gr.dp2 * j12) / det;
    const double sy = (-j11 * gr.dp2 + j21 * gr.dp1) / det;
    double lambda = 1.0;
    bool moved = false;
    for (int half = 0; half < 30; ++half, lambda *= 0.5) {
      const double nx = x + lambda * sx, ny = y + lambda * sy;
      if (!(nx > 0.0 && nx < 1.0 && ny > 0.0 && ny < 1.0)) continue;
      const Gradient gn = g(nx, ny);
      if (gn.norm_inf() < gr.norm_inf()) {
        x = nx;
        y = ny;
        gr = gn;
        moved = true;
        break;
      }
    }
    if (!moved) return gr.norm_inf() <= 1e-12;
  }
  return gr.norm_inf() <= 1e-12;
}

inline KktKind classify_by_eigenvalues(double lo, double hi, double tol = 1e-8) {
  if (lo < -tol && hi < -tol) return KktKind::LocalMax;
  if (lo > tol && hi > tol) return KktKind::LocalMin;
  if (lo < -tol && hi > tol) return KktKind::Saddle;
  return KktKind::Degenerate;
}

} // namespace detail

// Enumerates the points satisfying the stationarity system: Newton runs
// seeded from an interior grid plus the analytic edge and corner
// candidates, each re-verified against kkt_tol, deduplicated, classified by
// finite-difference curvature, and checked against the brute-force maximum
// to mark the global optimizer.
inline std::vector<KktPoint> find_kkt_points(const Channel& ch, const Weights& w,
                                             int grid_n = 64, double kkt_tol = 1e-8) {
  detail::require_differentiable(ch);

  std::vector<std::pair<double, double>> candidates;

  // Interior stationary points.
  for (int i = 1; i <= grid_n; ++i)
    for (int j = 1; j <= grid_n; ++j) {
      double x = static_cast<double>(i) / (grid_n + 1);
      double y = static_cast<double>(j) / (grid_n + 1);
      if (detail::newton_polish(ch, w, x, y)) candidates.emplace_back(x, y);
    }

  // Edge candidates: Psi restricted to an edge is a single-user weighted
  // mutual information, concave in the free coordinate.
  const auto edge_p = [](double t1, double t2) { return binary_capacity(t1, t2).p_opt; };
  candidates.emplace_back(edge_p(ch.b, ch.d), 0.0);
  candidates.emplace_back(edge_p(ch.a, ch.c), 1.0);
  candidates.emplace_back(0.0, edge_p(ch.c, ch.d));
  candidates.emplace_back(1.0, edge_p(ch.a, ch.b));
  for (double x : {0.0, 1.0})
    for (double y : {0.0, 1.0}) candidates.emplace_back(x, y);

  // Keep candidates that satisfy the conditions, deduplicated.
  std::vector<KktPoint> points;
  for (const auto& [x, y] : candidates) {
    const InputDist in(x, y);
    const double resid = kkt_residual(ch, w, in);
    if (resid > kkt_tol) continue;
    bool dup = false;
    for (const auto& p : points)
      if (std::hypot(p.input.p1 - x, p.input.p2 - y) <= 1e-8) {
        dup = true;
        break;
      }
    if (dup) continue;
    KktPoint kp;
    kp.input = in;
    kp.residual = resid;
    kp.on_boundary = x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0;
    kp.rates = corner_c1(ch, in);
    kp.value = w.w1 * kp.rates.r1 + w.w2 * kp.rates.r2;
    points.push_back(kp);
  }

  // Classification by curvature. Boundary points use the curvature along
  // the edge plus the inward slope; an inward slope indistinguishable from
  // zero falls back to the full Hessian.
  constexpr double slope_tol = 1e-8;
  for (auto& p : points) {
    const double x = p.input.p1, y = p.input.p2;
    const auto h = detail::fd_hessian(ch, w, x, y);
    if (!p.on_boundary) {
      const auto [lo, hi] = h.eigenvalues();
      p.kind = detail::classify_by_eigenvalues(lo, hi);
      continue;
    }
    const bool corner = (x == 0.0 || x == 1.0) && (y == 0.0 || y == 1.0);
    const auto f = [&](double p1, double p2) { return detail::psi_at(ch, w, p1, p2); };
    constexpr double s = 1e-5;
    if (corner) {
      const double gx = (x == 0.0 ? 1.0 : -1.0) * (f(x + (x == 0.0 ? s : -s), y) - f(x, y)) / s;
      const double gy = (y == 0.0 ? 1.0 : -1.0) * (f(x, y + (y == 0.0 ? s : -s)) - f(x, y)) / s;
      p.kind = (gx < -slope_tol && gy < -slope_tol) ? KktKind::LocalMax : KktKind::Degenerate;
      continue;
    }
    const bool edge_is_p2 = y == 0.0 || y == 1.0; // free coordinate is p1
    const double tangential = edge_is_p2 ? h.xx : h.yy;
    const double inward = edge_is_p2 ? (y == 0.0 ? (f(x, s) - f(x, -s)) / (2.0 * s)
                                                 : -(f(x, 1.0 + s) - f(x, 1.0 - s)) / (2.0 * s))
                                     : (x == 0.0 ? (f(s, y) - f(-s, y)) / (2.0 * s)
                                                 : -(f(1.0 + s, y) - f(1.0 - s, y)) / (2.0 * s));
    if (std::abs(inward) <= slope_tol) {
      const auto [lo, hi] = h.eigenvalues();
      p.kind = detail::classify_by_eigenvalues(lo, hi);
    } else if (tangential < -slope_tol) {
      p.kind = KktKind::LocalMax; // inward <= 0 is guaranteed by the residual filter
    } else if (tangential > slope_tol) {
      p.kind = KktKind::LocalMin;
    } else {
      p.kind = KktKind::Degenerate;
    }
  }

  // Mark the global maximizer, cross-checked against the brute-force grid.
  if (!points.empty()) {
    double best = points[0].value;
    for (const auto& p : points) best = std::max(best, p.value);
    const double oracle_max = oracle::grid_max_c1(ch, w, 2000).best_value;
    if (best >= oracle_max - 5e-6)
      for (auto& p : points)
        if (p.value >= best - 1e-9) p.kind = KktKind::GlobalMax;
  }

  std::sort(points.begin(), points.end(), [](const KktPoint& a, const KktPoint& b) {
    return a.input.p1 != b.input.p1 ? a.input.p1 < b.input.p1 : a.input.p2 < b.input.p2;
  });
  return points;
}

// Traced outline of G1, the image of the input square under the C1 corner
// map: angular extremal binning around the cloud centroid united with the
// Pareto frontier, ordered by angle. The region is generally nonconvex, so
// the Pareto part carries the dented upper-right boundary faithfully.
inline std::vector<RatePair> trace_g1(const Channel& ch, int grid_n, int bins = 1024) {
  if (grid_n < 2) throw domain_error("trace_g1: grid_n must be at least 2");
  std::vector<RatePair> cloud;
  cloud.reserve(static_cast<std::size_t>(grid_n + 1) * (grid_n + 1));
  double cx = 0.0, cy = 0.0;
  for (int i = 0; i <= grid_n; ++i)
    for (int j = 0; j <= grid_n; ++j) {
      const RatePair r = corner_c1(
          ch, InputDist(static_cast<double>(i) / grid_n, static_cast<double>(j) / grid_n));
      cloud.push_back(r);
      cx += r.r1;
      cy += r.r2;
    }
  cx /= static_cast<double>(cloud.size());
  cy /= static_cast<double>(cloud.size());

  // Farthest point per angular bin.
  std::vector<int> far(static_cast<std::size_t>(bins), -1);
  std::vector<double> far_r2(static_cast<std::size_t>(bins), -1.0);
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const double dx = cloud[k].r1 - cx, dy = cloud[k].r2 - cy;
    const double rr = dx * dx + dy * dy;
    int bin = static_cast<int>((std::atan2(dy, dx) + M_PI) / (2.0 * M_PI) * bins);
    bin = std::clamp(bin, 0, bins - 1);
    if (rr > far_r2[static_cast<std::size_t>(bin)]) {
      far_r2[static_cast<std::size_t>(bin)] = rr;
      far[static_cast<std::size_t>(bin)] = static_cast<int>(k);
    }
  }

  std::vector<RatePair> outline;
  for (int b = 0; b < bins; ++b)
    if (far[static_cast<std::size_t>(b)] >= 0)
      outline.push_back(cloud[static_cast<std::size_t>(far[static_cast<std::size_t>(b)])]);

  // Pareto frontier of the cloud (nondominated in both rates).
  std::vector<RatePair> sorted = cloud;
  std::sort(sorted.begin(), sorted.end(), [](const RatePair& a, const RatePair& b) {
    return a.r1 != b.r1 ? a.r1 > b.r1 : a.r2 > b.r2;
  });
  double best_r2 = -1.0;
  for (const auto& r : sorted)
    if (r.r2 > best_r2) {
      outline.push_back(r);
      best_r2 = r.r2;
    }

  std::sort(outline.begin(), outline.end(), [&](const RatePair& a, const RatePair& b) {
    const double ta = std::atan2(a.r2 - cy, a.r1 - cx);
    const double tb = std::atan2(b.r2 - cy, b.r1 - cx);
    return ta != tb ? ta < tb : (a.r1 != b.r1 ? a.r1 < b.r1 : a.r2 < b.r2);
  });
  outline.erase(std::unique(outline.begin(), outline.end(),
                            [](const RatePair& a, const RatePair& b) {
                              return std::abs(a.r1 - b.r1) <= 1e-12 &&
                                     std::abs(a.r2 - b.r2) <= 1e-12;
                            }),
                outline.end());
  return outline;
}

} // namespace bmac
