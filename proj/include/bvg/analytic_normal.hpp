#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace bvg {

// P(|X| < a) for X ~ N(mu, sigma^2): Phi((a-mu)/sigma) - Phi((-a-mu)/sigma).
// Requires sigma > 0 and a >= 0.
double truncated_prob_normal(double mu, double sigma, double a);

// E[X^2 * 1{|X| < a}] for X ~ N(mu, sigma^2) in closed form: two exponential
// terms plus (sigma^2 + mu^2) times the Phi difference.
double truncated_second_moment_normal(double mu, double sigma, double a);

// Ex post utility E[(1 - X^2) * 1{|X| < a}] of the frontier strategy
// X = sqrt(1-mu^2) Z + mu (Z normal) against a fixed opponent realization a,
// with reward 1. On the frontier the Phi terms cancel, leaving a two-term
// exponential form. Domain: mu in [0, 1); a >= 0 (|a| is used).
double expost_utility_normal(double mu, double a);

// d/dmu of expost_utility_normal, in closed form. Domain: mu in (0, 1).
double dmu_expost_normal(double mu, double a);

// The inequality ladder behind the lower-bias-dominance result. Each id names
// one closed-form left-hand side with an asserted sign that the verify
// report checks on a dense grid:
//   critical, d1, d2, b3: LHS >= 0 (functions of mu and a)
//   b1, b2, b4:           LHS <= 0 (functions of mu alone; a is ignored)
enum class InequalityId { critical, d1, d2, b1, b2, b3, b4 };

inline constexpr std::array<InequalityId, 7> kAllInequalities = {
    InequalityId::critical, InequalityId::d1, InequalityId::d2,
    InequalityId::b1,       InequalityId::b2, InequalityId::b3,
    InequalityId::b4};

std::string_view inequality_name(InequalityId id);
InequalityId inequality_from_name(std::string_view name);

// True when the asserted sign is >= 0 (false: <= 0).
bool inequality_is_nonnegative(InequalityId id);

// True when the LHS depends on the opponent realization a.
bool inequality_depends_on_a(InequalityId id);

// Literal left-hand side of the named inequality at (mu, a); mu in [0, 1).
double inequality_lhs(InequalityId id, double mu, double a);

struct InequalityCheck {
  InequalityId id = InequalityId::critical;
  std::size_t grid_points = 0;
  // Minimum LHS for >=-type inequalities, maximum LHS for <=-type.
  double worst_lhs = 0.0;
  double worst_mu = 0.0;
  double worst_a = 0.0;  // NaN when the id ignores a
  bool pass = false;
};

struct SignRelationCheck {
  std::size_t grid_points = 0;
  std::size_t violations = 0;
  bool pass = false;
};

struct VerificationReport {
  double mu_step = 0.0;
  double a_step = 0.0;
  double a_max = 0.0;
  double tolerance = 0.0;
  std::vector<InequalityCheck> checks;
  // Census of sign(inequality_lhs(critical)) versus sign(dmu_expost_normal):
  // they must be opposite or zero everywhere, pinning down that LHS >= 0
  // means the utility is nonincreasing in mu.
  SignRelationCheck sign_relation;
  bool all_pass = false;
};

// Evaluates every inequality id on mu in [0, 0.99] (step mu_step) and, where
// a-dependent, a in [1, a_max] (step a_step), plus the sign-relation census
// on mu in (0, 1) x a in [0, 5]. An id passes when its worst LHS respects the
// asserted sign within tolerance.
VerificationReport verify_inequalities(double mu_step = 0.01,
                                       double a_step = 0.05,
                                       double a_max = 10.0,
                                       double tolerance = 1e-12);

}  // namespace bvg
