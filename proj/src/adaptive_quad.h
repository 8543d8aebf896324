#pragma once

// Global adaptive Gauss-Kronrod integration (QAG style): always bisect the
// panel with the largest error estimate until the summed estimate meets the
// tolerance or the panel budget runs out. Single-panel rules come from Boost.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gmc::detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

template <class F>
QuadResult adaptive_gk(F&& f, double lo, double hi, double rel_tol,
                       double abs_tol, int max_panels = 4000) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;
  struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
  };
  auto make_panel = [&](double a, double b) {
    double err = 0.0;
    const double v = Rule::integrate(f, a, b, 0, 0.0, &err);
    // Boost reports the error of the rule mapped to [-1, 1] without rescaling.
    return Panel{a, b, v, err * 0.5 * (b - a)};
  };

  std::priority_queue<Panel> queue;
  Panel first = make_panel(lo, hi);
  double total = first.value;
  double total_err = first.error;
  queue.push(first);
  QuadResult out;
  out.panels = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (out.panels >= max_panels) {
      out.value = total;
      out.error = total_err;
      return out;
    }
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = make_panel(worst.lo, mid);
    const Panel right = make_panel(mid, worst.hi);
    total += (left.value + right.value) - worst.value;
    total_err += (left.error + right.error) - worst.error;
    queue.push(left);
    queue.push(right);
    ++out.panels;
  }
  // Re-sum from the panels to shed accumulated update rounding.
  total = 0.0;
  total_err = 0.0;
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  for (const Panel& panel : panels) {
    total += panel.value;
    total_err += panel.error;
  }
  out.value = total;
  out.error = total_err;
  out.converged = true;
  return out;
}

}  // namespace gmc::detail
