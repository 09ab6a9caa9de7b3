#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmac/types.hpp"

// Exact information-theoretic primitives for the two-user binary MAC.
// Everything is a pure function of its arguments; all quantities in nats.

namespace bmac {

namespace detail {

// Negative MI smaller than this is rounding noise and clamps to zero;
// anything below it indicates a broken formula.
inline constexpr double mi_noise_floor = -1e-13;

inline double clamp_mi(double v) {
  if (v >= 0.0) return v;
  if (v >= mi_noise_floor) return 0.0;
  throw evaluation_error("mutual information evaluated below the rounding noise floor: " +
                         std::to_string(v));
}

// x*ln(x) with the 0*ln(0)=0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Output distributions conditioned on each user's symbol, as Pr[Y=1].
inline double out_given_x1_1(const Channel& ch, double p2) { return ch.b + p2 * (ch.a - ch.b); }
inline double out_given_x1_2(const Channel& ch, double p2) { return ch.d + p2 * (ch.c - ch.d); }
inline double out_given_x2_1(const Channel& ch, double p1) { return ch.c + p1 * (ch.a - ch.c); }
inline double out_given_x2_2(const Channel& ch, double p1) { return ch.d + p1 * (ch.b - ch.d); }

} // namespace detail

inline double binary_entropy(double p) {
  if (!is_probability(p)) throw domain_error("binary_entropy: argument outside [0,1]");
  return -detail::xlogx(p) - detail::xlogx(1.0 - p);
}

// D(p || q) between binary distributions; +infinity when q is deterministic
// and p differs from it.
inline double kl_divergence(double p, double q) {
  if (!is_probability(p) || !is_probability(q))
    throw domain_error("kl_divergence: argument outside [0,1]");
  double t = 0.0;
  if (p > 0.0) {
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    t += p * std::log(p / q);
  }
  if (p < 1.0) {
    if (q == 1.0) return std::numeric_limits<double>::infinity();
    t += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return std::max(t, 0.0);
}

inline double prob_y1(const Channel& ch, const InputDist& in) {
  const double p1 = in.p1, p2 = in.p2;
  return p1 * p2 * ch.a + p1 * (1.0 - p2) * ch.b + (1.0 - p1) * p2 * ch.c +
         (1.0 - p1) * (1.0 - p2) * ch.d;
}

namespace detail {

// H(Y|X1) and H(Y|X2) as averages of conditional binary entropies.
inline double cond_entropy_y_given_x1(const Channel& ch, double p1, double p2) {
  return p1 * binary_entropy(out_given_x1_1(ch, p2)) +
         (1.0 - p1) * binary_entropy(out_given_x1_2(ch, p2));
}

inline double cond_entropy_y_given_x2(const Channel& ch, double p1, double p2) {
  return p2 * binary_entropy(out_given_x2_1(ch, p1)) +
         (1.0 - p2) * binary_entropy(out_given_x2_2(ch, p1));
}

inline double cond_entropy_y_given_x1x2(const Channel& ch, double p1, double p2) {
  return p1 * p2 * binary_entropy(ch.a) + p1 * (1.0 - p2) * binary_entropy(ch.b) +
         (1.0 - p1) * p2 * binary_entropy(ch.c) + (1.0 - p1) * (1.0 - p2) * binary_entropy(ch.d);
}

inline double entropy_y(const Channel& ch, double p1, double p2) {
  const double py = p1 * out_given_x1_1(ch, p2) + (1.0 - p1) * out_given_x1_2(ch, p2);
  return binary_entropy(std::clamp(py, 0.0, 1.0));
}

} // namespace detail

inline double mi_y_x1(const Channel& ch, const InputDist& in) {
  return detail::clamp_mi(detail::entropy_y(ch, in.p1, in.p2) -
                          detail::cond_entropy_y_given_x1(ch, in.p1, in.p2));
}

inline double mi_y_x2(const Channel& ch, const InputDist& in) {
  return detail::clamp_mi(detail::entropy_y(ch, in.p1, in.p2) -
                          detail::cond_entropy_y_given_x2(ch, in.p1, in.p2));
}

inline double mi_y_x2_given_x1(const Channel& ch, const InputDist& in) {
  return detail::clamp_mi(detail::cond_entropy_y_given_x1(ch, in.p1, in.p2) -
                          detail::cond_entropy_y_given_x1x2(ch, in.p1, in.p2));
}

inline double mi_y_x1_given_x2(const Channel& ch, const InputDist& in) {
  return detail::clamp_mi(detail::cond_entropy_y_given_x2(ch, in.p1, in.p2) -
                          detail::cond_entropy_y_given_x1x2(ch, in.p1, in.p2));
}

inline double mi_joint(const Channel& ch, const InputDist& in) {
  return detail::clamp_mi(detail::entropy_y(ch, in.p1, in.p2) -
                          detail::cond_entropy_y_given_x1x2(ch, in.p1, in.p2));
}

// Corner points of the achievable polyhedron for one product input; C1 is
// the successive-decoding order that decodes user 1 first.
inline RatePair corner_c1(const Channel& ch, const InputDist& in) {
  return {mi_y_x1(ch, in), mi_y_x2_given_x1(ch, in)};
}

inline RatePair corner_c2(const Channel& ch, const InputDist& in) {
  return {mi_y_x1_given_x2(ch, in), mi_y_x2(ch, in)};
}

// Relabeling that exchanges the two users: I(Y;X2) on ch equals I(Y;X1) on
// swap_users(ch) with the input coordinates exchanged.
inline Channel swap_users(const Channel& ch) { return Channel(ch.a, ch.c, ch.b, ch.d); }

} // namespace bmac
