#include "ambp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "ambp/types.hpp"

namespace ambp {

namespace {

GaussLegendre compute_rule(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // roots of P_n by Newton from the Chebyshev initial guess
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double apply_rule(const GaussLegendre& r, const std::function<double(double)>& f,
                  double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return half * sum;
}

// recursive panel bisection: accept when whole ~ left + right
double adaptive_panel(const GaussLegendre& r,
                      const std::function<double(double)>& f, double a,
                      double b, double whole, double abs_tol, int depth,
                      int max_depth) {
  double mid = 0.5 * (a + b);
  double left = apply_rule(r, f, a, mid);
  double right = apply_rule(r, f, mid, b);
  double err = std::abs(left + right - whole);
  if (err <= abs_tol || depth >= max_depth) {
    if (err > abs_tol)
      throw NumericError("quadrature: panel refinement exhausted");
    return left + right;
  }
  return adaptive_panel(r, f, a, mid, left, 0.5 * abs_tol, depth + 1, max_depth) +
         adaptive_panel(r, f, mid, b, right, 0.5 * abs_tol, depth + 1, max_depth);
}

}  // namespace

const GaussLegendre& GaussLegendre::of_order(int n) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double integrate_segment(const std::function<double(double)>& f, double a,
                         double b, double panel_width,
                         const QuadratureSpec& spec) {
  if (!(b > a)) return 0.0;
  const auto& rule = GaussLegendre::of_order(spec.node_count);
  int n_panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));
  // first pass: panel estimates set the error scale
  std::vector<double> edges(n_panels + 1), coarse(n_panels);
  double scale = 0.0;
  for (int i = 0; i <= n_panels; ++i) edges[i] = a + (b - a) * i / n_panels;
  for (int i = 0; i < n_panels; ++i) {
    coarse[i] = apply_rule(rule, f, edges[i], edges[i + 1]);
    scale += std::abs(coarse[i]);
  }
  double abs_tol = spec.rel_tol * std::max(scale, 1e-300);
  double total = 0.0;
  for (int i = 0; i < n_panels; ++i)
    total += adaptive_panel(rule, f, edges[i], edges[i + 1], coarse[i],
                            abs_tol / n_panels, 0, spec.max_depth);
  return total;
}

double integrate_with_breakpoints(const std::function<double(double)>& f,
                                  double a, double b,
                                  const std::vector<double>& breakpoints,
                                  double sd, const QuadratureSpec& spec) {
  std::vector<double> edges{a};
  for (double z : breakpoints)
    if (z > a && z < b) edges.push_back(z);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  double panel_width = spec.panel_width_sd * sd;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += integrate_segment(f, edges[i], edges[i + 1], panel_width, spec);
  return total;
}

double gaussian_density(double z, double s) {
  return std::exp(-0.5 * z * z / s) / std::sqrt(2.0 * M_PI * s);
}

}  // namespace ambp
