#pragma once

#include <algorithm>
#include <cmath>

#include "bmac/info_theory.hpp"
#include "bmac/types.hpp"

// Axis points of the capacity region: the binary-input binary-output
// single-user problem with the other user's symbol frozen.

namespace bmac {

struct SingleUserResult {
  double capacity = 0.0; // nats
  double p_opt = 0.5;    // maximizing Pr[X = 1]
  int fixed_other = 0;   // which deterministic symbol of the other user won
};

namespace detail {

// I(X;Y) for the single-user channel Pr[Y=1|X=1]=t1, Pr[Y=1|X=2]=t2 at
// input probability p.
inline double single_user_mi(double t1, double t2, double p) {
  const double py = t2 + p * (t1 - t2);
  return clamp_mi(binary_entropy(py) - p * binary_entropy(t1) - (1.0 - p) * binary_entropy(t2));
}

// d/dp of single_user_mi; strictly decreasing in p for t1 != t2.
inline double single_user_mi_slope(double t1, double t2, double p) {
  const double py = t2 + p * (t1 - t2);
  return (t1 - t2) * std::log((1.0 - py) / py) - binary_entropy(t1) + binary_entropy(t2);
}

} // namespace detail

// Capacity of the binary-input binary-output channel by bisection on the
// strictly decreasing derivative of I(X;Y). The mutual information vanishes
// at p in {0,1} and is strictly concave for t1 != t2, so the maximizer is
// interior and brackets in [0,1] without endpoint evaluations.
inline SingleUserResult binary_capacity(double t1, double t2) {
  if (!is_probability(t1) || !is_probability(t2))
    throw domain_error("binary_capacity: transition probabilities outside [0,1]");
  if (t1 == t2) return {0.0, 0.5, 0};
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (detail::single_user_mi_slope(t1, t2, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double p = 0.5 * (lo + hi);
  return {detail::single_user_mi(t1, t2, p), p, 0};
}

// Best rate on the R1 axis: user 2 frozen at symbol 2 (p2=0) sees the
// channel (b,d), frozen at symbol 1 (p2=1) sees (a,c).
inline SingleUserResult e1(const Channel& ch) {
  SingleUserResult r0 = binary_capacity(ch.b, ch.d);
  SingleUserResult r1 = binary_capacity(ch.a, ch.c);
  if (r1.capacity > r0.capacity) {
    r1.fixed_other = 1;
    return r1;
  }
  r0.fixed_other = 0;
  return r0;
}

// Best rate on the R2 axis: p1=0 gives user 2 the channel (c,d), p1=1
// gives (a,b).
inline SingleUserResult e2(const Channel& ch) {
  SingleUserResult r0 = binary_capacity(ch.c, ch.d);
  SingleUserResult r1 = binary_capacity(ch.a, ch.b);
  if (r1.capacity > r0.capacity) {
    r1.fixed_other = 1;
    return r1;
  }
  r0.fixed_other = 0;
  return r0;
}

} // namespace bmac
