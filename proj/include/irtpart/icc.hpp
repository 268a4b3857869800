#ifndef IRTPART_ICC_HPP
#define IRTPART_ICC_HPP

#include <algorithm>
#include <cmath>

namespace irtpart {

inline constexpr double kProbFloor = 1e-10;
inline constexpr double kProbCeil = 1.0 - 1e-10;

inline double clamp_prob(double p) { return std::clamp(p, kProbFloor, kProbCeil); }

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Three-parameter logistic ICC: c + (1-c) * sigmoid(a * (theta - b)).
inline double icc_3pl(double theta, double a, double b, double c) {
  return clamp_prob(c + (1.0 - c) * sigmoid(a * (theta - b)));
}

}  // namespace irtpart

#endif
