#pragma once
/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Legendre integration for piecewise-smooth
 *        integrands. The demand function has a jump at the concavification
 *        boundary, so segments are split at every breakpoint first; within
 *        a segment the integrand is smooth and panels converge spectrally.
 */

#include <functional>
#include <vector>

#include "ambp/config.hpp"

namespace ambp {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed once per order by Newton iteration on the Legendre recurrence.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  static const GaussLegendre& of_order(int n);
};

/// Integrate f over [a, b]: split into panels of at most `panel_width`,
/// apply the node_count rule, and bisect any panel whose halves disagree
/// with it by more than rel_tol * scale.
/// Throws NumericError if max_depth refinement is exhausted.
double integrate_segment(const std::function<double(double)>& f, double a,
                         double b, double panel_width,
                         const QuadratureSpec& spec);

/// Integrate over [a, b] split at the given sorted breakpoints (those that
/// fall inside the interval). panel widths scale with `sd` (the Gaussian
/// standard deviation of the integrand's weight).
double integrate_with_breakpoints(const std::function<double(double)>& f,
                                  double a, double b,
                                  const std::vector<double>& breakpoints,
                                  double sd, const QuadratureSpec& spec);

/// Standard normal density with variance s.
double gaussian_density(double z, double s);

}  // namespace ambp
