#include "bvg/analytic_normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bvg {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInvSqrt2 = 0.70710678118654752440;

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

void require_sigma_positive(double sigma, const char* where) {
  if (!(sigma > 0.0)) {
    std::ostringstream msg;
    msg << where << ": requires sigma > 0, got " << sigma;
    throw std::domain_error(msg.str());
  }
}

// b1*exp(p) - b2*exp(q), factoring out the larger exponent so the difference
// stays finite for exponents near the double overflow threshold.
double exp_pair_diff(double b1, double p, double b2, double q) {
  const double m = std::max(p, q);
  const double inner = b1 * std::exp(p - m) - b2 * std::exp(q - m);
  if (inner == 0.0) return 0.0;
  return std::exp(m) * inner;
}

}  // namespace

double truncated_prob_normal(double mu, double sigma, double a) {
  require_sigma_positive(sigma, "truncated_prob_normal");
  a = std::fabs(a);
  return normal_cdf((a - mu) / sigma) - normal_cdf((-a - mu) / sigma);
}

double truncated_second_moment_normal(double mu, double sigma, double a) {
  require_sigma_positive(sigma, "truncated_second_moment_normal");
  a = std::fabs(a);
  const double em = std::exp(-(a - mu) * (a - mu) / (2.0 * sigma * sigma));
  const double ep = std::exp(-(a + mu) * (a + mu) / (2.0 * sigma * sigma));
  return -mu * sigma * kInvSqrt2Pi * (em - ep) -
         a * sigma * kInvSqrt2Pi * (em + ep) +
         (sigma * sigma + mu * mu) * truncated_prob_normal(mu, sigma, a);
}

double expost_utility_normal(double mu, double a) {
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw std::domain_error(
        "expost_utility_normal: requires mu in [0, 1); sigma degenerates at "
        "mu = 1");
  }
  a = std::fabs(a);
  if (a == 0.0) return 0.0;  // zero-width win region
  const double s2 = (1.0 - mu) * (1.0 + mu);
  const double sigma = std::sqrt(s2);
  const double em = std::exp(-(a - mu) * (a - mu) / (2.0 * s2));
  const double ep = std::exp(-(a + mu) * (a + mu) / (2.0 * s2));
  return mu * sigma * kInvSqrt2Pi * (em - ep) +
         a * sigma * kInvSqrt2Pi * (em + ep);
}

double dmu_expost_normal(double mu, double a) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw std::domain_error("dmu_expost_normal: requires mu in (0, 1)");
  }
  a = std::fabs(a);
  const double s2 = (1.0 - mu) * (1.0 + mu);
  const double sigma = std::sqrt(s2);
  const double em = std::exp(-(a - mu) * (a - mu) / (2.0 * s2));
  const double ep = std::exp(-(a + mu) * (a + mu) / (2.0 * s2));
  const double shared = (a * a - mu * mu) * sigma / (s2 * s2);
  const double bracket_m =
      sigma - (a + mu) * mu / sigma + shared * (1.0 - a * mu);
  const double bracket_p =
      sigma + (a - mu) * mu / sigma + shared * (1.0 + a * mu);
  return kInvSqrt2Pi * (bracket_m * em - bracket_p * ep);
}

std::string_view inequality_name(InequalityId id) {
  switch (id) {
    case InequalityId::critical:
      return "critical";
    case InequalityId::d1:
      return "d1";
    case InequalityId::d2:
      return "d2";
    case InequalityId::b1:
      return "b1";
    case InequalityId::b2:
      return "b2";
    case InequalityId::b3:
      return "b3";
    case InequalityId::b4:
      return "b4";
  }
  return "?";
}

InequalityId inequality_from_name(std::string_view name) {
  for (InequalityId id : kAllInequalities) {
    if (inequality_name(id) == name) return id;
  }
  std::ostringstream msg;
  msg << "unknown inequality id '" << name << "'; valid:";
  for (InequalityId id : kAllInequalities) msg << ' ' << inequality_name(id);
  throw std::invalid_argument(msg.str());
}

bool inequality_is_nonnegative(InequalityId id) {
  switch (id) {
    case InequalityId::critical:
    case InequalityId::d1:
    case InequalityId::d2:
    case InequalityId::b3:
      return true;
    default:
      return false;
  }
}

bool inequality_depends_on_a(InequalityId id) {
  switch (id) {
    case InequalityId::critical:
    case InequalityId::d1:
    case InequalityId::d2:
    case InequalityId::b3:
      return true;
    default:
      return false;
  }
}

double inequality_lhs(InequalityId id, double mu, double a) {
  if (!(mu >= 0.0 && mu < 1.0)) {
    throw std::domain_error("inequality_lhs: requires mu in [0, 1)");
  }
  const double m2 = mu * mu;
  const double s2 = (1.0 - mu) * (1.0 + mu);
  switch (id) {
    case InequalityId::critical: {
      const double common = 2.0 * m2 - a * a - 1.0;
      const double bp = common * (1.0 - a * mu) + 2.0 * m2 * s2;
      const double bm = common * (1.0 + a * mu) + 2.0 * m2 * s2;
      return exp_pair_diff(bp, a * mu / s2, bm, -a * mu / s2);
    }
    case InequalityId::d1: {
      const double even = a * a * a * m2 - a * (2.0 - 3.0 * m2 + 2.0 * m2 * m2);
      const double odd = mu * m2 + a * a * mu * (2.0 - 3.0 * m2);
      return exp_pair_diff(even + odd, a * mu / s2, even - odd, -a * mu / s2);
    }
    case InequalityId::d2: {
      const double even = -2.0 + 5.0 * m2 - 4.0 * m2 * m2 +
                          2.0 * m2 * m2 * m2 +
                          a * a * m2 * (5.0 - 6.0 * m2);
      const double odd = a * a * a * mu * m2 +
                         a * mu * (2.0 - 7.0 * m2 + 4.0 * m2 * m2);
      return exp_pair_diff(even + odd, a * mu / s2, even - odd, -a * mu / s2);
    }
    case InequalityId::b1: {
      const double even = 1.0 - 2.0 * m2 + m2 * m2;
      const double odd = -mu + mu * m2;
      return exp_pair_diff(even + odd, mu / s2, even - odd, -mu / s2);
    }
    case InequalityId::b2: {
      const double even = 1.0 - 5.0 * m2 + 5.0 * m2 * m2 - m2 * m2 * m2;
      const double odd = -mu + 3.0 * mu * m2 - 2.0 * mu * m2 * m2;
      return exp_pair_diff(even + odd, mu / s2, even - odd, -mu / s2);
    }
    case InequalityId::b3: {
      const double even = a * a * a * m2 + a * (12.0 - 29.0 * m2 + 16.0 * m2 * m2);
      const double odd = a * a * mu * (8.0 - 9.0 * m2) -
                         mu * (4.0 - 7.0 * m2 + 2.0 * m2 * m2);
      return exp_pair_diff(even + odd, (1.0 + a * mu) / s2, even - odd,
                           (1.0 - a * mu) / s2);
    }
    case InequalityId::b4: {
      const double even = -11.0 + 31.0 * m2 - 24.0 * m2 * m2 + 6.0 * m2 * m2 * m2;
      const double odd = 7.0 * mu - 22.0 * mu * m2 + 11.0 * mu * m2 * m2;
      return exp_pair_diff(even + odd, (0.5 + mu) / s2, even - odd,
                           (0.5 - mu) / s2);
    }
  }
  return 0.0;
}

VerificationReport verify_inequalities(double mu_step, double a_step,
                                       double a_max, double tolerance) {
  if (!(mu_step > 0.0) || !(a_step > 0.0) || !(a_max >= 1.0)) {
    throw std::invalid_argument("verify_inequalities: bad grid parameters");
  }
  VerificationReport report;
  report.mu_step = mu_step;
  report.a_step = a_step;
  report.a_max = a_max;
  report.tolerance = tolerance;

  std::vector<double> mus;
  for (double mu = 0.0; mu <= 0.99 + 1e-12; mu += mu_step) {
    mus.push_back(std::min(mu, 0.99));
  }
  std::vector<double> as;
  for (double a = 1.0; a <= a_max + 1e-12; a += a_step) as.push_back(a);

  report.all_pass = true;
  for (InequalityId id : kAllInequalities) {
    InequalityCheck check;
    check.id = id;
    const bool nonneg = inequality_is_nonnegative(id);
    double worst = nonneg ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    double worst_mu = 0.0;
    double worst_a = std::numeric_limits<double>::quiet_NaN();
    if (inequality_depends_on_a(id)) {
      for (double mu : mus) {
        for (double a : as) {
          const double lhs = inequality_lhs(id, mu, a);
          if (nonneg ? lhs < worst : lhs > worst) {
            worst = lhs;
            worst_mu = mu;
            worst_a = a;
          }
          ++check.grid_points;
        }
      }
    } else {
      for (double mu : mus) {
        const double lhs = inequality_lhs(id, mu, 0.0);
        if (nonneg ? lhs < worst : lhs > worst) {
          worst = lhs;
          worst_mu = mu;
        }
        ++check.grid_points;
      }
    }
    check.worst_lhs = worst;
    check.worst_mu = worst_mu;
    check.worst_a = worst_a;
    check.pass = nonneg ? worst >= -tolerance : worst <= tolerance;
    report.all_pass = report.all_pass && check.pass;
    report.checks.push_back(check);
  }

  // Sign census on a fixed interior grid (mu in {0.01..0.99}, a in {0..5}):
  // the derivative must be <= 0 exactly where the critical LHS is >= 0.
  for (int mi = 1; mi <= 99; ++mi) {
    const double m = 0.01 * mi;
    for (int ai = 0; ai <= 50; ++ai) {
      const double a = 0.1 * ai;
      const double lhs = inequality_lhs(InequalityId::critical, m, a);
      const double deriv = dmu_expost_normal(m, a);
      ++report.sign_relation.grid_points;
      if (lhs * deriv > 0.0 && std::fabs(lhs) > tolerance &&
          std::fabs(deriv) > tolerance) {
        ++report.sign_relation.violations;
      }
    }
  }
  report.sign_relation.pass = report.sign_relation.violations == 0;
  report.all_pass = report.all_pass && report.sign_relation.pass;
  return report;
}

}  // namespace bvg
