#include "bvg/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bvg {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLaplaceScale = kInvSqrt2;  // variance 2*scale^2 = 1
const double kLogisticScale = std::sqrt(3.0) / kPi;
const double kUniformHalfWidth = std::sqrt(3.0);
const double kTriangleHalfWidth = std::sqrt(6.0);

// Wichura's AS 241 (PPND16): inverse of the standard normal CDF, accurate to
// about 1e-16 over the full open interval.
double normal_quantile(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) *
                 r +
             4.5921953931549871457e4) *
                r +
            1.3731693765509461125e4) *
               r +
           1.9715909503065514427e3) *
              r +
          1.3314166789178437745e2) *
             r +
         3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) *
                 r +
             2.1213794301586595867e4) *
                r +
            5.3941960214247511077e3) *
               r +
           6.8718700749205790830e2) *
              r +
          4.2313330701600911252e1) *
             r +
         1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e0) *
                r +
            3.64784832476320460504e0) *
               r +
           5.76949722146069140550e0) *
              r +
          4.63033784615654529590e0) *
             r +
         1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e0) *
              r +
          2.05319162663775882187e0) *
             r +
         1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e0) *
              r +
          5.46378491116411436990e0) *
             r +
         6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
    value = num / den;
  }
  return (q < 0.0) ? -value : value;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::normal:
      return "normal";
    case Family::laplace:
      return "laplace";
    case Family::logistic:
      return "logistic";
    case Family::uniform:
      return "uniform";
    case Family::triangle:
      return "triangle";
  }
  return "?";
}

Family family_from_name(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (family_name(f) == name) return f;
  }
  std::ostringstream msg;
  msg << "unknown family '" << name << "'; valid families:";
  for (Family f : kAllFamilies) msg << ' ' << family_name(f);
  throw std::invalid_argument(msg.str());
}

double pdf(Family family, double x) {
  switch (family) {
    case Family::normal:
      return kInvSqrt2Pi * std::exp(-0.5 * x * x);
    case Family::laplace:
      return std::exp(-std::fabs(x) / kLaplaceScale) / (2.0 * kLaplaceScale);
    case Family::logistic: {
      const double t = std::exp(-std::fabs(x) / kLogisticScale);
      const double d = 1.0 + t;
      return t / (kLogisticScale * d * d);
    }
    case Family::uniform:
      return std::fabs(x) <= kUniformHalfWidth ? 0.5 / kUniformHalfWidth : 0.0;
    case Family::triangle: {
      const double c = kTriangleHalfWidth;
      const double ax = std::fabs(x);
      return ax <= c ? (c - ax) / (c * c) : 0.0;
    }
  }
  return 0.0;
}

double cdf(Family family, double x) {
  switch (family) {
    case Family::normal:
      return 0.5 * std::erfc(-x * kInvSqrt2);
    case Family::laplace:
      return x < 0.0 ? 0.5 * std::exp(x / kLaplaceScale)
                     : 1.0 - 0.5 * std::exp(-x / kLaplaceScale);
    case Family::logistic:
      return 1.0 / (1.0 + std::exp(-x / kLogisticScale));
    case Family::uniform: {
      if (x <= -kUniformHalfWidth) return 0.0;
      if (x >= kUniformHalfWidth) return 1.0;
      return 0.5 * (x / kUniformHalfWidth + 1.0);
    }
    case Family::triangle: {
      const double c = kTriangleHalfWidth;
      if (x <= -c) return 0.0;
      if (x >= c) return 1.0;
      if (x < 0.0) {
        const double t = c + x;
        return t * t / (2.0 * c * c);
      }
      const double t = c - x;
      return 1.0 - t * t / (2.0 * c * c);
    }
  }
  return 0.0;
}

double inverse_cdf(Family family, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("inverse_cdf requires u in the open interval (0, 1)");
  }
  switch (family) {
    case Family::normal:
      return normal_quantile(u);
    case Family::laplace:
      return u < 0.5 ? kLaplaceScale * std::log(2.0 * u)
                     : -kLaplaceScale * std::log(2.0 * (1.0 - u));
    case Family::logistic:
      return kLogisticScale * std::log(u / (1.0 - u));
    case Family::uniform:
      return kUniformHalfWidth * (2.0 * u - 1.0);
    case Family::triangle: {
      const double c = kTriangleHalfWidth;
      return u <= 0.5 ? c * (std::sqrt(2.0 * u) - 1.0)
                      : c * (1.0 - std::sqrt(2.0 * (1.0 - u)));
    }
  }
  return 0.0;
}

std::pair<double, double> family_support(Family family) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (family) {
    case Family::uniform:
      return {-kUniformHalfWidth, kUniformHalfWidth};
    case Family::triangle:
      return {-kTriangleHalfWidth, kTriangleHalfWidth};
    default:
      return {-inf, inf};
  }
}

Strategy::Strategy(Family family, double mu, double sigma)
    : family_(family), mu_(mu), sigma_(sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("Strategy: sigma must be finite and >= 0");
  }
  if (!std::isfinite(mu)) {
    throw std::invalid_argument("Strategy: mu must be finite");
  }
}

FrontierStrategy::FrontierStrategy(Family family, double mu)
    : family_(family), mu_(mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("FrontierStrategy: mu must lie in [0, 1]");
  }
}

double FrontierStrategy::sigma() const {
  // (1-mu)(1+mu) loses less precision than 1-mu^2 for mu near 1.
  return std::sqrt((1.0 - mu_) * (1.0 + mu_));
}

double strategy_pdf(const Strategy& strategy, double x) {
  if (strategy.is_point_mass()) {
    throw DegenerateStrategyError(
        "strategy_pdf: point mass (sigma = 0) has no density");
  }
  return pdf(strategy.family(), (x - strategy.mu()) / strategy.sigma()) /
         strategy.sigma();
}

std::pair<double, double> strategy_support(const Strategy& strategy) {
  auto [lo, hi] = family_support(strategy.family());
  return {strategy.mu() + strategy.sigma() * lo,
          strategy.mu() + strategy.sigma() * hi};
}

double sample_one(const Strategy& strategy, RandomStream& stream) {
  if (strategy.is_point_mass()) return strategy.mu();
  return strategy.mu() +
         strategy.sigma() * inverse_cdf(strategy.family(), stream.next_uniform());
}

std::vector<double> sample(const Strategy& strategy, RandomStream& stream,
                           std::size_t n) {
  std::vector<double> draws(n);
  for (double& d : draws) d = sample_one(strategy, stream);
  return draws;
}

}  // namespace bvg
