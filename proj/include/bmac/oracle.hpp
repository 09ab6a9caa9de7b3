#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bmac/types.hpp"

// Independent brute-force ground truth. Everything here is computed from
// the explicit joint distribution table p(x1,x2,y); none of the
// entropy-difference closed forms of the main library are used, so
// agreement between the two paths is a meaningful check.

namespace bmac {
namespace oracle {

namespace detail {

inline double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
inline double ent2(double p) { return -xlnx(p) - xlnx(1.0 - p); }

// One term of an MI sum, with the 0*ln(0)=0 convention on the joint mass.
inline double mi_term(double joint, double denom) {
  return joint > 0.0 ? joint * std::log(joint / denom) : 0.0;
}

} // namespace detail

// Every mutual information of the channel recomputed by direct summation
// over the 2x2x2 joint distribution table.
struct TableMI {
  double iy_x1 = 0.0;
  double iy_x2 = 0.0;
  double iy_x1_given_x2 = 0.0;
  double iy_x2_given_x1 = 0.0;
  double joint = 0.0;
};

inline TableMI mi_table_all(const Channel& ch, const InputDist& in) {
  const double px1[2] = {in.p1, 1.0 - in.p1};
  const double px2[2] = {in.p2, 1.0 - in.p2};
  const double cond[2][2] = {{ch.a, ch.b}, {ch.c, ch.d}}; // Pr[Y=1 | x1, x2]

  double table[2][2][2]; // [x1][x2][y]
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) {
      table[s][t][0] = px1[s] * px2[t] * cond[s][t];
      table[s][t][1] = px1[s] * px2[t] * (1.0 - cond[s][t]);
    }

  double py[2] = {0.0, 0.0};
  double pm1[2][2] = {{0.0, 0.0}, {0.0, 0.0}}; // [x1][y]
  double pm2[2][2] = {{0.0, 0.0}, {0.0, 0.0}}; // [x2][y]
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      for (int y = 0; y < 2; ++y) {
        py[y] += table[s][t][y];
        pm1[s][y] += table[s][t][y];
        pm2[t][y] += table[s][t][y];
      }

  TableMI r;
  for (int s = 0; s < 2; ++s)
    for (int y = 0; y < 2; ++y)
      r.iy_x1 += detail::mi_term(pm1[s][y], px1[s] * py[y]);
  for (int t = 0; t < 2; ++t)
    for (int y = 0; y < 2; ++y)
      r.iy_x2 += detail::mi_term(pm2[t][y], px2[t] * py[y]);
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      for (int y = 0; y < 2; ++y) {
        const double j = table[s][t][y];
        r.iy_x2_given_x1 += detail::mi_term(j, px2[t] * pm1[s][y]);
        r.iy_x1_given_x2 += detail::mi_term(j, px1[s] * pm2[t][y]);
        r.joint += detail::mi_term(j, px1[s] * px2[t] * py[y]);
      }
  r.iy_x1 = std::max(r.iy_x1, 0.0);
  r.iy_x2 = std::max(r.iy_x2, 0.0);
  r.iy_x1_given_x2 = std::max(r.iy_x1_given_x2, 0.0);
  r.iy_x2_given_x1 = std::max(r.iy_x2_given_x1, 0.0);
  r.joint = std::max(r.joint, 0.0);
  return r;
}

inline double mi_joint_table(const Channel& ch, const InputDist& in) {
  return mi_table_all(ch, in).joint;
}

inline RatePair corner_c1_table(const Channel& ch, const InputDist& in) {
  const TableMI t = mi_table_all(ch, in);
  return {t.iy_x1, t.iy_x2_given_x1};
}

inline RatePair corner_c2_table(const Channel& ch, const InputDist& in) {
  const TableMI t = mi_table_all(ch, in);
  return {t.iy_x1_given_x2, t.iy_x2};
}

struct GridResult {
  InputDist best_input{0.0, 0.0};
  double best_value = 0.0;
  int grid_n = 0;
  Corner corner = Corner::C1;
};

namespace detail {

// Dense maximization of the weighted corner objective over the
// (grid_n+1)^2 uniform grid. The per-point work is the joint-table
// computation with the p2-only and p1-only marginal entropies hoisted out
// of the inner loop; algebraically identical to mi_table_all at every
// point (asserted by the unit tests).
template <bool BestOfBoth>
GridResult grid_scan(const Channel& ch, const Weights& w, int grid_n) {
  const int n = grid_n;
  const double ha = ent2(ch.a), hb = ent2(ch.b), hc = ent2(ch.c), hd = ent2(ch.d);

  std::vector<double> p(n + 1), out1(n + 1), out2(n + 1), hout1(n + 1), hout2(n + 1),
      k1(n + 1), k2(n + 1), g1(n + 1), g2(n + 1), hg1(n + 1), hg2(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    p[i] = t;
    out1[i] = ch.b + t * (ch.a - ch.b); // Pr[Y=1 | x1=1], p2 = t
    out2[i] = ch.d + t * (ch.c - ch.d); // Pr[Y=1 | x1=2], p2 = t
    hout1[i] = ent2(out1[i]);
    hout2[i] = ent2(out2[i]);
    k1[i] = t * ha + (1.0 - t) * hb;
    k2[i] = t * hc + (1.0 - t) * hd;
    g1[i] = ch.c + t * (ch.a - ch.c); // Pr[Y=1 | x2=1], p1 = t
    g2[i] = ch.d + t * (ch.b - ch.d); // Pr[Y=1 | x2=2], p1 = t
    hg1[i] = ent2(g1[i]);
    hg2[i] = ent2(g2[i]);
  }

  double best = -1.0;
  int bi = 0, bj = 0;
  Corner bc = Corner::C1;
  for (int i = 0; i <= n; ++i) {
    const double p1 = p[i];
    for (int j = 0; j <= n; ++j) {
      const double py = p1 * out1[j] + (1.0 - p1) * out2[j];
      const double hy = ent2(py);
      const double hcond1 = p1 * hout1[j] + (1.0 - p1) * hout2[j];
      const double hcond12 = p1 * k1[j] + (1.0 - p1) * k2[j];
      const double v1 = w.w1 * (hy - hcond1) + w.w2 * (hcond1 - hcond12);
      double v = v1;
      Corner which = Corner::C1;
      if constexpr (BestOfBoth) {
        const double hcond2 = p[j] * hg1[i] + (1.0 - p[j]) * hg2[i];
        const double v2 = w.w1 * (hcond2 - hcond12) + w.w2 * (hy - hcond2);
        if (v2 > v1) {
          v = v2;
          which = Corner::C2;
        }
      }
      if (v > best) {
        best = v;
        bi = i;
        bj = j;
        bc = which;
      }
    }
  }
  return {InputDist(p[bi], p[bj]), best, grid_n, bc};
}

} // namespace detail

// Maximum of max(w^T C1, w^T C2) over the grid; upper-bounds nothing but
// converges to the weighted sum-rate maximum from below as the grid
// refines. Ties break to the smallest p1, then the smallest p2.
inline GridResult grid_max(const Channel& ch, const Weights& w, int grid_n) {
  if (grid_n < 2) throw domain_error("grid_max: grid_n must be at least 2");
  return detail::grid_scan<true>(ch, w, grid_n);
}

// Maximum of w^T C1 alone (the objective Psi); used to certify global
// maxima of Psi independently of the weight ordering.
inline GridResult grid_max_c1(const Channel& ch, const Weights& w, int grid_n) {
  if (grid_n < 2) throw domain_error("grid_max_c1: grid_n must be at least 2");
  return detail::grid_scan<false>(ch, w, grid_n);
}

// Central difference with one Richardson extrapolation; evaluates fn at
// x +- step and x +- step/2.
template <typename Fn>
double fd_derivative(Fn&& fn, double x, double step) {
  const double d1 = (fn(x + step) - fn(x - step)) / (2.0 * step);
  const double d2 = (fn(x + 0.5 * step) - fn(x - 0.5 * step)) / step;
  return (4.0 * d2 - d1) / 3.0;
}

} // namespace oracle
} // namespace bmac
