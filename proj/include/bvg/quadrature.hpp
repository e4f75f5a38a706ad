#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace bvg {

struct QuadratureSpec {
  double abs_tol = 1e-11;
  double rel_tol = 1e-9;
  int max_subdivisions = 256;
  // Half-width of the opponent-integral domain, in opponent standard
  // deviations, for unbounded families.
  double outer_truncation = 10.0;
};

// Thrown when the adaptive integrator exhausts its subdivision budget; carries
// the error estimate it did achieve.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& msg, double achieved_error)
      : std::runtime_error(msg), achieved_error_(achieved_error) {}
  double achieved_error() const { return achieved_error_; }

 private:
  double achieved_error_;
};

// Globally adaptive Gauss-Kronrod (15-point) integration of f over [lo, hi].
// interior_breakpoints are abscissae (kinks, discontinuities) that become
// exact panel boundaries; values outside (lo, hi) are ignored.
double adaptive_integrate(const std::function<double(double)>& f, double lo,
                          double hi, const QuadratureSpec& spec,
                          std::span<const double> interior_breakpoints = {});

}  // namespace bvg
