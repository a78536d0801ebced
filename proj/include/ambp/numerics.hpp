#pragma once
/**
 * @file numerics.hpp
 * @brief Root finding and 1-d/simplex minimization helpers. Bisection is
 *        used throughout: every target function here is monotone on its
 *        bracket, so guaranteed convergence beats Newton's speed.
 */

#include <functional>
#include <vector>

namespace ambp {

using Fn1 = std::function<double(double)>;

/// Bisection on [lo, hi]; f(lo) and f(hi) must have opposite signs.
/// Stops when |f| <= f_tol or the bracket width falls below x_tol.
double bisect(const Fn1& f, double lo, double hi, double f_tol, double x_tol,
              int max_iter = 200);

/// Geometric bisection for positive roots spanning many orders of
/// magnitude; bracket width measured as hi/lo - 1.
double bisect_log(const Fn1& f, double lo, double hi, double rel_x_tol,
                  int max_iter = 400);

/// Scan [lo, hi] with n equal steps and return every sign-change interval
/// refined by bisection. Used where a root count is not known a priori.
std::vector<double> scan_roots(const Fn1& f, double lo, double hi, int n,
                               double x_tol);

/// Golden-section minimization of a unimodal f on [a, b] down to bracket
/// width `width`. Returns the midpoint of the final bracket.
double golden_min(const Fn1& f, double a, double b, double width);

/// Nelder-Mead on R^n, used only as the n-atom fallback of the outer prior
/// search. Plain implementation: reflection/expansion/contraction/shrink.
std::vector<double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, double step, double f_tol, int max_iter);

}  // namespace ambp
