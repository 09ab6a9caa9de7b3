#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "bmac/info_theory.hpp"
#include "bmac/types.hpp"

// The weighted-sum objective Psi(p1,p2) = w1*I(Y;X1) + w2*I(Y;X2|X1), its
// analytic gradient, and the auxiliary functions of the one-dimensional
// reduction: for fixed p2 with h2(p2) != 0, Psi is strictly concave in p1
// and its unique stationary point has the closed form f(p2).

namespace bmac {

// p2 counts as outside P2 when |h2(p2)| <= tol_h2; h2 is affine with at
// most one root in (0,1), and the solvers treat a tol-neighborhood of that
// root as excluded.
inline constexpr double tol_h2 = 1e-12;

#ifdef BMAC_MUTATION_HOOKS
namespace detail {
// Test-only breakage switch: flips the sign of h4 so the gradient
// verification suite must fail. Never compiled into release binaries.
inline bool mutate_h4() { return std::getenv("BMAC_MUTATE_H4") != nullptr; }
} // namespace detail
#endif

inline double h1(const Channel& ch, double p2) {
  return binary_entropy(detail::out_given_x1_2(ch, p2)) -
         binary_entropy(detail::out_given_x1_1(ch, p2));
}

inline double h2(const Channel& ch, double p2) {
  return -ch.b + ch.d + p2 * (-ch.a + ch.b + ch.c - ch.d);
}

inline double h3(const Channel& ch, double p2) { return 1.0 - ch.d + p2 * (ch.d - ch.c); }

inline double h4(const Channel& ch, double p2) {
  const double v = -p2 * binary_entropy(ch.a) + (p2 - 1.0) * binary_entropy(ch.b) +
                   p2 * binary_entropy(ch.c) - (p2 - 1.0) * binary_entropy(ch.d) +
                   binary_entropy(detail::out_given_x1_1(ch, p2)) -
                   binary_entropy(detail::out_given_x1_2(ch, p2));
#ifdef BMAC_MUTATION_HOOKS
  if (detail::mutate_h4()) return -v;
#endif
  return v;
}

inline bool in_p2_set(const Channel& ch, double p2) {
  return p2 > 0.0 && p2 < 1.0 && std::abs(h2(ch, p2)) > tol_h2;
}

namespace detail {

// Psi evaluated directly from the entropy-difference closed form, without
// range checks or clamping; well-defined for any real p1 as long as the
// output distribution stays in [0,1]. This is the analytic continuation
// used by phi_hat and by finite-difference stencils that step across the
// domain boundary.
inline double psi_at(const Channel& ch, const Weights& w, double p1, double p2) {
  const double ha = binary_entropy(out_given_x1_1(ch, p2));
  const double hb = binary_entropy(out_given_x1_2(ch, p2));
  const double py = p1 * out_given_x1_1(ch, p2) + (1.0 - p1) * out_given_x1_2(ch, p2);
  const double hy = binary_entropy(std::clamp(py, 0.0, 1.0));
  const double cond1 = p1 * ha + (1.0 - p1) * hb;
  const double cond12 = p1 * p2 * binary_entropy(ch.a) + p1 * (1.0 - p2) * binary_entropy(ch.b) +
                        (1.0 - p1) * p2 * binary_entropy(ch.c) +
                        (1.0 - p1) * (1.0 - p2) * binary_entropy(ch.d);
  return w.w1 * (hy - cond1) + w.w2 * (cond1 - cond12);
}

// Derivative of the binary entropy, ln((1-t)/t).
inline double entropy_slope(double t) { return std::log((1.0 - t) / t); }

} // namespace detail

inline double psi(const Channel& ch, const Weights& w, const InputDist& in) {
  return w.w1 * mi_y_x1(ch, in) + w.w2 * mi_y_x2_given_x1(ch, in);
}

inline double dpsi_dp1(const Channel& ch, const Weights& w, const InputDist& in) {
  const double tail = h3(ch, in.p2) + in.p1 * h2(ch, in.p2); // Pr[Y=2]
  if (!(tail > 0.0) || !(tail < 1.0))
    throw evaluation_error("dpsi_dp1: degenerate output distribution, Pr[Y=2]=" +
                           std::to_string(tail));
  const double grad_i1 = h1(ch, in.p2) + h2(ch, in.p2) * std::log(1.0 / tail - 1.0);
  return w.w1 * grad_i1 + w.w2 * h4(ch, in.p2);
}

inline double dpsi_dp2(const Channel& ch, const Weights& w, const InputDist& in) {
  const double p1 = in.p1, p2 = in.p2;
  const double d1 = ch.delta1(), d2 = ch.delta2();
  const double alpha = detail::out_given_x1_1(ch, p2);
  const double beta = detail::out_given_x1_2(ch, p2);
  const double py = p1 * alpha + (1.0 - p1) * beta;
  if (!(py > 0.0) || !(py < 1.0))
    throw evaluation_error("dpsi_dp2: degenerate output distribution, Pr[Y=1]=" +
                           std::to_string(py));

  double mix = 0.0; // p1*d1*H'(alpha) + (1-p1)*d2*H'(beta), skipping vanished terms
  if (d1 != 0.0) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
      throw evaluation_error("dpsi_dp2: degenerate conditional distribution for x1=1");
    mix += p1 * d1 * detail::entropy_slope(alpha);
  }
  if (d2 != 0.0) {
    if (!(beta > 0.0) || !(beta < 1.0))
      throw evaluation_error("dpsi_dp2: degenerate conditional distribution for x1=2");
    mix += (1.0 - p1) * d2 * detail::entropy_slope(beta);
  }
  const double gap = p1 * (binary_entropy(ch.a) - binary_entropy(ch.b)) +
                     (1.0 - p1) * (binary_entropy(ch.c) - binary_entropy(ch.d));
  return w.w1 * detail::entropy_slope(py) * (p1 * d1 + (1.0 - p1) * d2) +
         (w.w2 - w.w1) * mix - w.w2 * gap;
}

struct Gradient {
  double dp1 = 0.0;
  double dp2 = 0.0;
  double norm_inf() const { return std::max(std::abs(dp1), std::abs(dp2)); }
};

inline Gradient grad_psi(const Channel& ch, const Weights& w, const InputDist& in) {
  return {dpsi_dp1(ch, w, in), dpsi_dp2(ch, w, in)};
}

inline double h_fun(const Channel& ch, const Weights& w, double p) {
  const double slope = h2(ch, p);
  if (std::abs(slope) <= tol_h2)
    throw excluded_point_error("h_fun: p2=" + std::to_string(p) + " is outside P2");
  return (-(w.w2 / w.w1) * h4(ch, p) - h1(ch, p)) / slope;
}

// The p1 value solving dpsi_dp1 = 0 for a fixed p2 in P2, and whether it
// lands inside (0,1) (membership of p2 in the subset where the interior
// candidate is admissible).
struct ReducedPoint {
  double p2 = 0.0;
  double p1_star = 0.0;
  bool in_p2bar = false;
};

namespace detail {

// Pr[Y=2] at the p1-stationary point: 1/(e^h + 1). Saturates cleanly to 0
// when e^h overflows.
inline double stationary_tail(double h) { return 1.0 / (std::exp(h) + 1.0); }

} // namespace detail

inline ReducedPoint f_map(const Channel& ch, const Weights& w, double p) {
  const double h = h_fun(ch, w, p);
  const double p1_star = (detail::stationary_tail(h) - h3(ch, p)) / h2(ch, p);
  return {p, p1_star, p1_star > 0.0 && p1_star < 1.0};
}

// phi_hat(p) = Psi(f(p), p), evaluated by analytic continuation of the
// closed form even when f(p) falls outside [0,1]. The output distribution
// at the stationary p1 is 1/(e^h+1) by construction, so the entropy
// arguments stay valid regardless of where f(p) lands.
inline double phi_hat(const Channel& ch, const Weights& w, double p) {
  const double h = h_fun(ch, w, p);
  const double tail = detail::stationary_tail(h);
  const double p1 = (tail - h3(ch, p)) / h2(ch, p);
  const double ha = binary_entropy(detail::out_given_x1_1(ch, p));
  const double hb = binary_entropy(detail::out_given_x1_2(ch, p));
  const double hy = binary_entropy(1.0 - tail);
  const double cond1 = p1 * ha + (1.0 - p1) * hb;
  const double cond12 = p1 * p * binary_entropy(ch.a) + p1 * (1.0 - p) * binary_entropy(ch.b) +
                        (1.0 - p1) * p * binary_entropy(ch.c) +
                        (1.0 - p1) * (1.0 - p) * binary_entropy(ch.d);
  return w.w1 * (hy - cond1) + w.w2 * (cond1 - cond12);
}

inline double delta_fn(double a, double c, double d) {
  if (!is_probability(a) || !is_probability(c) || !is_probability(d))
    throw domain_error("delta_fn: arguments outside [0,1]");
  return (c - d) * (binary_entropy(d) - binary_entropy(a)) -
         (binary_entropy(c) - binary_entropy(d)) * (d - a);
}

// Closed form of h'(p) for three-parameter channels (a = b). Written with
// the explicit KL-divergence term so the sign structure of the numerator
// survives numerically.
inline double h_prime(const Channel& ch, const Weights& w, double p) {
  if (ch.a != ch.b) throw not_three_param_error("h_prime: requires a = b");
  const double slope = h2(ch, p);
  if (std::abs(slope) <= tol_h2)
    throw excluded_point_error("h_prime: p2=" + std::to_string(p) + " is outside P2");
  const double beta = ch.d + p * ch.delta2();
  const double num = ch.delta2() * ((w.w1 - w.w2) / w.w1) * kl_divergence(ch.a, beta) +
                     (w.w2 / w.w1) * delta_fn(ch.a, ch.c, ch.d);
  return num / (slope * slope);
}

// Factorized derivative of phi_hat for three-parameter channels.
inline double phi_hat_prime(const Channel& ch, const Weights& w, double p) {
  const ReducedPoint rp = f_map(ch, w, p);
  return w.w1 * (1.0 - rp.p1_star) * h2(ch, p) * h_prime(ch, w, p);
}

// dpsi_dp1 at p1 = 1 for three-parameter channels; equals -D(d||a) at p=0
// and -D(c||a) at p=1.
inline double v_fn(const Channel& ch, double p) {
  if (ch.a != ch.b) throw not_three_param_error("v_fn: requires a = b");
  if (!(ch.a > 0.0) || !(ch.a < 1.0))
    throw domain_error("v_fn: requires a strictly inside (0,1)");
  if (!is_probability(p)) throw domain_error("v_fn: p outside [0,1]");
  return h1(ch, p) + h2(ch, p) * std::log(ch.a / (1.0 - ch.a));
}

} // namespace bmac
