#include "bvg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace bvg {
namespace {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double integral = 0.0;
  double error = 0.0;
  double abs_integral = 0.0;  // integral of |f|, for roundoff detection
};

PanelEstimate gk15(const std::function<double(double)>& f, double lo,
                   double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  double fv[15];
  const double fc = f(center);
  fv[14] = fc;
  for (int i = 0; i < 7; ++i) {
    fv[2 * i] = f(center - half * kXgk[i]);
    fv[2 * i + 1] = f(center + half * kXgk[i]);
  }

  double resk = kWgk[7] * fc;
  double resabs = std::fabs(resk);
  for (int i = 0; i < 7; ++i) {
    resk += kWgk[i] * (fv[2 * i] + fv[2 * i + 1]);
    resabs += kWgk[i] * (std::fabs(fv[2 * i]) + std::fabs(fv[2 * i + 1]));
  }
  double resg = kWg[3] * fc;
  for (int i = 0; i < 3; ++i) {
    const int j = 2 * i + 1;  // Gauss nodes sit at the odd Kronrod indices
    resg += kWg[i] * (fv[2 * j] + fv[2 * j + 1]);
  }

  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int i = 0; i < 7; ++i) {
    resasc += kWgk[i] * (std::fabs(fv[2 * i] - mean) +
                         std::fabs(fv[2 * i + 1] - mean));
  }

  PanelEstimate est;
  est.integral = resk * half;
  est.abs_integral = resabs * std::fabs(half);
  resasc *= std::fabs(half);
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (est.abs_integral > std::numeric_limits<double>::min() / eps50) {
    err = std::max(err, eps50 * est.abs_integral);
  }
  est.error = err;
  return est;
}

struct Panel {
  double lo, hi;
  PanelEstimate est;
};

struct PanelWorse {
  bool operator()(const Panel& a, const Panel& b) const {
    return a.est.error < b.est.error;
  }
};

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double lo,
                          double hi, const QuadratureSpec& spec,
                          std::span<const double> interior_breakpoints) {
  if (lo == hi) return 0.0;
  double sign = 1.0;
  if (lo > hi) {
    std::swap(lo, hi);
    sign = -1.0;
  }

  std::vector<double> edges;
  edges.push_back(lo);
  for (double b : interior_breakpoints) {
    if (b > lo && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> panels;
  double total = 0.0;
  double total_err = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p{edges[i], edges[i + 1], gk15(f, edges[i], edges[i + 1])};
    total += p.est.integral;
    total_err += p.est.error;
    total_abs += p.est.abs_integral;
    panels.push(p);
  }

  const double eps = std::numeric_limits<double>::epsilon();
  int splits = 0;
  while (true) {
    const double target =
        std::max({spec.abs_tol, spec.rel_tol * std::fabs(total),
                  64.0 * eps * total_abs});
    if (total_err <= target) break;
    if (splits >= spec.max_subdivisions || panels.empty()) {
      std::ostringstream msg;
      msg << "quadrature failed to converge: error estimate " << total_err
          << " > target " << target << " after " << splits << " subdivisions";
      throw QuadratureError(msg.str(), total_err);
    }
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      // Panel narrower than double spacing; its estimate cannot improve.
      // Accept it and stop tracking it for subdivision.
      total_err -= worst.est.error;
      continue;
    }
    Panel left{worst.lo, mid, gk15(f, worst.lo, mid)};
    Panel right{mid, worst.hi, gk15(f, mid, worst.hi)};
    total += left.est.integral + right.est.integral - worst.est.integral;
    total_err += left.est.error + right.est.error - worst.est.error;
    total_abs +=
        left.est.abs_integral + right.est.abs_integral - worst.est.abs_integral;
    panels.push(left);
    panels.push(right);
    ++splits;
  }
  return sign * total;
}

}  // namespace bvg
