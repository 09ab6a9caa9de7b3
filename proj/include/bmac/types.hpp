#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bmac {

inline constexpr double ln2 = 0.6931471805599453;

// Thrown when a probability or channel parameter is outside its valid range.
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Channel excluded from analysis (one user conveys no information, or the
// three-parameter reduction does not apply at this point).
class degenerate_channel_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class not_three_param_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// p2 lies in the excluded neighborhood of the h2 root (outside P2).
class excluded_point_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A closed-form expression hit a degenerate output distribution or an
// invalid logarithm argument.
class evaluation_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class parse_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Transition probabilities of the two-user binary-input binary-output
// channel: Pr[Y=1 | x1,x2] for (x1,x2) = (1,1),(1,2),(2,1),(2,2).
struct Channel {
  double a, b, c, d;

  Channel(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (!is_probability(a) || !is_probability(b) || !is_probability(c) || !is_probability(d))
      throw domain_error("channel transition probabilities must lie in [0,1]");
  }

  double delta1() const { return a - b; }
  double delta2() const { return c - d; }

  bool operator==(const Channel& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
};

// Per-user probabilities of transmitting symbol 1; the simplex vector of
// user u is (p_u, 1-p_u).
struct InputDist {
  double p1, p2;

  InputDist(double p1_, double p2_) : p1(p1_), p2(p2_) {
    if (!is_probability(p1) || !is_probability(p2))
      throw domain_error("input probabilities must lie in [0,1]");
  }
};

struct Weights {
  double w1, w2;

  Weights(double w1_, double w2_) : w1(w1_), w2(w2_) {
    if (!(w1 > 0.0) || !(w2 > 0.0))
      throw domain_error("weights must be strictly positive");
  }
};

// A point in the rate plane, in nats per channel use.
struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;
};

// The two successive-decoding corner points of an achievable polyhedron.
enum class Corner { C1, C2 };

} // namespace bmac
