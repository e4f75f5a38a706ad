#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bvg/random.hpp"

namespace bvg {

// Base families Z, each parameterized so that mean = 0 and variance = 1
// exactly: laplace scale 1/sqrt(2), logistic scale sqrt(3)/pi, uniform
// support [-sqrt(3), sqrt(3)], triangle support [-sqrt(6), sqrt(6)].
enum class Family { normal, laplace, logistic, uniform, triangle };

inline constexpr std::array<Family, 5> kAllFamilies = {
    Family::normal, Family::laplace, Family::logistic, Family::uniform,
    Family::triangle};

std::string_view family_name(Family family);

// Parses a lowercase family name; throws std::invalid_argument listing the
// valid names otherwise.
Family family_from_name(std::string_view name);

// Density of the standardized family at x.
double pdf(Family family, double x);

// P(Z <= x).
double cdf(Family family, double x);

// Quantile function; u must lie in the open interval (0, 1).
double inverse_cdf(Family family, double u);

// Support of Z as [lo, hi]; +/-infinity for unbounded families.
std::pair<double, double> family_support(Family family);

// Raised when a density is requested for a point-mass strategy.
class DegenerateStrategyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A location-scale strategy X = sigma * Z + mu. sigma = 0 is the point mass
// at mu; it can be sampled and played but has no density.
class Strategy {
 public:
  Strategy(Family family, double mu, double sigma);

  Family family() const { return family_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  bool is_point_mass() const { return sigma_ == 0.0; }

  // mu^2 + sigma^2, the strategy's total squared error.
  double error() const { return mu_ * mu_ + sigma_ * sigma_; }

 private:
  Family family_;
  double mu_;
  double sigma_;
};

// A strategy on the error frontier mu^2 + sigma^2 = 1, parameterized by
// mu in [0, 1]; sigma is derived.
class FrontierStrategy {
 public:
  FrontierStrategy(Family family, double mu);

  Family family() const { return family_; }
  double mu() const { return mu_; }
  double sigma() const;

  operator Strategy() const { return Strategy(family_, mu_, sigma()); }

 private:
  Family family_;
  double mu_;
};

// Density of X = sigma * Z + mu at x. Throws DegenerateStrategyError when
// sigma = 0.
double strategy_pdf(const Strategy& strategy, double x);

// Support of X as [lo, hi].
std::pair<double, double> strategy_support(const Strategy& strategy);

// One inverse-CDF draw of X. Point masses return mu without consuming the
// stream.
double sample_one(const Strategy& strategy, RandomStream& stream);

// n i.i.d. draws, deterministic given the stream state.
std::vector<double> sample(const Strategy& strategy, RandomStream& stream,
                           std::size_t n);

}  // namespace bvg
