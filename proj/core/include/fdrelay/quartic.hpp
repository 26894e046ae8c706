#pragma once

#include <stdexcept>
#include <vector>

namespace fdrelay {

// Real polynomial of degree <= 4, descending-degree coefficients:
// q(x) = a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0.
struct quartic_coeffs {
    double a4 = 0.0;
    double a3 = 0.0;
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;
};

// Real roots in ascending order with per-root multiplicity.
struct real_roots_result {
    std::vector<double> roots;
    std::vector<int> multiplicity;
};

// Horner evaluation of q at x.
double quartic_eval(const quartic_coeffs& q, double x);

// All real roots of q, ascending. Exact leading zeros degrade the degree
// (cubic/quadratic/linear/constant). Closed-form path (resolvent cubic)
// with a derivative-bracketing bisection fallback when the closed form
// loses accuracy; every root is Newton-polished. A conjugate pair is
// reported as real only if its imaginary part is negligible
// (|Im| <= 1e-9 * (1 + |Re|)).
// Throws std::invalid_argument on the identically-zero polynomial.
real_roots_result real_roots(const quartic_coeffs& q);

// Subset of real_roots strictly inside (lo, hi). Requires lo < hi.
real_roots_result roots_in_interval(const quartic_coeffs& q, double lo, double hi);

}  // namespace fdrelay
