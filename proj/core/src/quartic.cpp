#include "fdrelay/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fdrelay {

namespace {

constexpr double kResidualTol = 1e-8;   // scaled residual accepted for a root
constexpr double kImagTolBase = 1e-9;   // |Im| <= base*(1+|Re|) counts as real

struct poly {
    // c[0] = leading coefficient, degree = c.size()-1; always c[0] != 0.
    std::vector<double> c;

    double eval(double x) const {
        double v = 0.0;
        for (double ci : c) v = v * x + ci;
        return v;
    }
    double deriv_eval(double x) const {
        const int n = static_cast<int>(c.size()) - 1;
        double v = 0.0;
        for (int i = 0; i < n; ++i) v = v * x + c[i] * (n - i);
        return v;
    }
    poly derivative() const {
        const int n = static_cast<int>(c.size()) - 1;
        poly d;
        if (n <= 0) return d;  // empty marks the zero polynomial
        d.c.resize(n);
        for (int i = 0; i < n; ++i) d.c[i] = c[i] * (n - i);
        return d;
    }
};

// A few damped Newton steps; keeps the better of (start, polished).
double polish_root(const poly& p, double x0) {
    double x = x0;
    double best = x0;
    double best_abs = std::abs(p.eval(x0));
    for (int it = 0; it < 8; ++it) {
        const double f = p.eval(x);
        const double df = p.deriv_eval(x);
        if (df == 0.0) break;
        double step = f / df;
        if (!std::isfinite(step)) break;
        // Damping guards against divergence near multiple roots.
        for (int half = 0; half < 4; ++half) {
            const double cand = x - step;
            const double fc = std::abs(p.eval(cand));
            if (fc <= std::abs(f) || half == 3) {
                x = cand;
                if (fc < best_abs) { best_abs = fc; best = cand; }
                break;
            }
            step *= 0.5;
        }
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
    }
    return best;
}

// Magnitude scale of p near x, for residual acceptance tests.
double residual_scale(const poly& p, double x) {
    double s = 0.0;
    double xp = 1.0;
    const double ax = std::max(1.0, std::abs(x));
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
        s = std::max(s, std::abs(*it) * xp);
        xp *= ax;
    }
    return std::max(s, 1.0);
}

bool acceptable_root(const poly& p, double x) {
    return std::abs(p.eval(x)) <= kResidualTol * residual_scale(p, x);
}

void solve_linear(const poly& p, std::vector<double>& out) {
    out.push_back(-p.c[1] / p.c[0]);
}

// Numerically stable quadratic roots; near-degenerate conjugate pairs with
// negligible imaginary part are folded to a double real root.
void solve_quadratic(double a, double b, double c, std::vector<double>& out) {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
        double r1, r2;
        if (q != 0.0) {
            r1 = q / a;
            r2 = (c != 0.0) ? c / q : 0.0;
        } else {
            r1 = r2 = 0.0;  // b = 0 and disc = b^2 => c ~ 0
        }
        out.push_back(r1);
        out.push_back(r2);
    } else {
        const double re = -b / (2.0 * a);
        const double im = std::sqrt(-disc) / (2.0 * std::abs(a));
        if (im <= kImagTolBase * (1.0 + std::abs(re))) {
            out.push_back(re);
            out.push_back(re);
        }
    }
}

// All real roots of a depressed-form-capable cubic via Cardano/trigonometric
// formulas, Newton-polished by the caller.
void solve_cubic(double a, double b, double c, double d, std::vector<double>& out) {
    // Monic: x^3 + px^2 + qx + r.
    const double p = b / a, q = c / a, r = d / a;
    // Depress with x = t - p/3: t^3 + mt + n.
    const double m = q - p * p / 3.0;
    const double n = r + p * (2.0 * p * p - 9.0 * q) / 27.0;
    const double shift = -p / 3.0;
    const double disc = -4.0 * m * m * m - 27.0 * n * n;
    if (disc >= 0.0) {
        // Three real roots (possibly repeated).
        if (m == 0.0 && n == 0.0) {
            out.insert(out.end(), 3, shift);
            return;
        }
        const double rho = 2.0 * std::sqrt(std::max(0.0, -m / 3.0));
        double cosarg = (rho == 0.0) ? 0.0 : 3.0 * n / (m * rho);
        cosarg = std::clamp(cosarg, -1.0, 1.0);
        const double theta = std::acos(cosarg);
        for (int k = 0; k < 3; ++k)
            out.push_back(shift +
                          rho * std::cos((theta + 2.0 * std::numbers::pi * k) / 3.0));
    } else {
        // One real root, via the cbrt form stable for either sign of n.
        const double A = std::sqrt(n * n / 4.0 + m * m * m / 27.0);
        const double u = std::cbrt(-n / 2.0 + A);
        const double v = std::cbrt(-n / 2.0 - A);
        out.push_back(shift + u + v);
    }
}

// Closed-form quartic path: depress, factor through the resolvent cubic
// into two quadratics. Roots come back unpolished.
void solve_quartic_closed(const poly& p, std::vector<double>& out) {
    const double a = p.c[0], b = p.c[1], c = p.c[2], d = p.c[3], e = p.c[4];
    // Monic then depressed with x = y - b/(4a): y^4 + P y^2 + Q y + R.
    const double b1 = b / a, c1 = c / a, d1 = d / a, e1 = e / a;
    const double sh = -b1 / 4.0;
    const double P = c1 - 3.0 * b1 * b1 / 8.0;
    const double Q = d1 - b1 * c1 / 2.0 + b1 * b1 * b1 / 8.0;
    const double R = e1 - b1 * d1 / 4.0 + b1 * b1 * c1 / 16.0 - 3.0 * b1 * b1 * b1 * b1 / 256.0;

    if (std::abs(Q) <= 1e-14 * (1.0 + std::abs(P) + std::abs(R))) {
        // Biquadratic: y^2 solves t^2 + Pt + R.
        std::vector<double> ts;
        solve_quadratic(1.0, P, R, ts);
        for (double t : ts) {
            if (t > 0.0) {
                const double s = std::sqrt(t);
                out.push_back(sh + s);
                out.push_back(sh - s);
            } else if (t >= -kImagTolBase) {
                out.push_back(sh);
                out.push_back(sh);
            }
        }
        return;
    }

    // Resolvent cubic for the Ferrari split parameter w > 0:
    // 8w^3 + 8Pw^2 + (2P^2 - 8R)w - Q^2 = 0. A positive real root exists
    // (the cubic is -Q^2 < 0 at w = 0 and +inf at w = +inf).
    std::vector<double> ws;
    solve_cubic(8.0, 8.0 * P, 2.0 * P * P - 8.0 * R, -Q * Q, ws);
    double w = -1.0;
    for (double cand : ws)
        if (cand > 0.0 && (w < 0.0 || cand > w)) w = cand;
    if (w <= 0.0) return;  // fallback path will handle it

    // y^4 + Py^2 + Qy + R = (y^2 + P/2 + w)^2 - 2w(y - Q/(4w))^2, so taking
    // the two square-root branches pairs the linear and constant terms with
    // opposite signs: y^2 -/+ sqrt(2w) y + (P/2 + w +/- Q/(2 sqrt(2w))).
    const double s2w = std::sqrt(2.0 * w);
    const double t0 = P / 2.0 + w;
    const double off = Q / (2.0 * s2w);
    std::vector<double> ys;
    solve_quadratic(1.0, -s2w, t0 + off, ys);
    solve_quadratic(1.0, s2w, t0 - off, ys);
    for (double y : ys) out.push_back(sh + y);
}

// Fallback: roots of the derivative split the line into monotonic pieces;
// bisect every sign change. Finds all simple real roots and, through the
// derivative-root probes, tangent (even-multiplicity) ones.
void solve_by_bisection(const poly& p, std::vector<double>& out) {
    const int n = static_cast<int>(p.c.size()) - 1;
    if (n == 1) {
        solve_linear(p, out);
        return;
    }
    // Cauchy bound on root magnitudes.
    double bound = 0.0;
    for (std::size_t i = 1; i < p.c.size(); ++i)
        bound = std::max(bound, std::abs(p.c[i] / p.c[0]));
    bound += 1.0;

    std::vector<double> knots;
    knots.push_back(-bound);
    if (n >= 2) {
        std::vector<double> droots;
        poly dp = p.derivative();
        if (n == 2) solve_linear(dp, droots);
        else if (n == 3) solve_quadratic(dp.c[0], dp.c[1], dp.c[2], droots);
        else solve_cubic(dp.c[0], dp.c[1], dp.c[2], dp.c[3], droots);
        std::sort(droots.begin(), droots.end());
        for (double r : droots)
            if (r > -bound && r < bound) {
                knots.push_back(r);
                // Stationary point sitting on the axis: tangent root.
                if (acceptable_root(p, r)) out.push_back(r);
            }
    }
    knots.push_back(bound);

    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double lo = knots[i], hi = knots[i + 1];
        double flo = p.eval(lo), fhi = p.eval(hi);
        if (flo == 0.0) { out.push_back(lo); continue; }
        if (fhi == 0.0 || flo * fhi > 0.0) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-17 * (1.0 + std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = p.eval(mid);
            if (fm == 0.0) { lo = hi = mid; break; }
            if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; }
            else hi = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
}

}  // namespace

double quartic_eval(const quartic_coeffs& q, double x) {
    return (((q.a4 * x + q.a3) * x + q.a2) * x + q.a1) * x + q.a0;
}

real_roots_result real_roots(const quartic_coeffs& q) {
    double raw[5] = {q.a4, q.a3, q.a2, q.a1, q.a0};
    for (double v : raw)
        if (!std::isfinite(v))
            throw std::invalid_argument("quartic coefficients must be finite");

    // Exact leading zeros lower the degree.
    int lead = 0;
    while (lead < 4 && raw[lead] == 0.0) ++lead;
    if (lead == 4 && raw[4] == 0.0)
        throw std::invalid_argument("identically zero polynomial has no root set");

    real_roots_result res;
    if (lead == 4) return res;  // nonzero constant: no roots

    // Normalize by the largest magnitude; coefficient spans get wide at
    // high SNR operating points.
    poly p;
    p.c.assign(raw + lead, raw + 5);
    double scale = 0.0;
    for (double v : p.c) scale = std::max(scale, std::abs(v));
    for (double& v : p.c) v /= scale;

    const int degree = static_cast<int>(p.c.size()) - 1;
    std::vector<double> cand;
    switch (degree) {
        case 1: solve_linear(p, cand); break;
        case 2: solve_quadratic(p.c[0], p.c[1], p.c[2], cand); break;
        case 3: solve_cubic(p.c[0], p.c[1], p.c[2], p.c[3], cand); break;
        default: solve_quartic_closed(p, cand); break;
    }

    std::vector<double> good;
    bool closed_form_clean = true;
    for (double r : cand) {
        const double polished = polish_root(p, r);
        if (acceptable_root(p, polished)) {
            good.push_back(polished);
            // A candidate that had to travel far was not really a root; the
            // polish may have landed on a root already found, silently
            // dropping another. Distrust the whole closed-form batch.
            if (std::abs(polished - r) > 1e-3 * (1.0 + std::abs(r)))
                closed_form_clean = false;
        } else {
            closed_form_clean = false;
        }
    }
    if (!closed_form_clean || (degree >= 2 && good.empty())) {
        // Ill-conditioned closed form: merge with bracketing bisection.
        // Only genuinely new locations are added, so a root found by both
        // paths is not double-counted as a multiplicity-2 cluster.
        std::vector<double> bis;
        solve_by_bisection(p, bis);
        for (double r : bis) {
            const double polished = polish_root(p, r);
            if (!acceptable_root(p, polished)) continue;
            bool known = false;
            for (double g : good)
                if (std::abs(g - polished) <= 1e-9 * (1.0 + std::abs(g)))
                    known = true;
            if (!known) good.push_back(polished);
        }
    }

    std::sort(good.begin(), good.end());
    // Cluster near-identical values into one root with multiplicity.
    for (std::size_t i = 0; i < good.size();) {
        std::size_t j = i + 1;
        while (j < good.size() &&
               good[j] - good[i] <= 1e-9 * (1.0 + std::abs(good[i])))
            ++j;
        double sum = 0.0;
        for (std::size_t k = i; k < j; ++k) sum += good[k];
        res.roots.push_back(sum / static_cast<double>(j - i));
        res.multiplicity.push_back(static_cast<int>(j - i));
        i = j;
    }
    // Multiplicity cannot exceed what clustering of distinct solver outputs
    // produced; cap at the polynomial degree.
    for (int& m : res.multiplicity) m = std::min(m, degree);
    return res;
}

real_roots_result roots_in_interval(const quartic_coeffs& q, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("roots_in_interval requires lo < hi");
    real_roots_result all = real_roots(q);
    real_roots_result res;
    for (std::size_t i = 0; i < all.roots.size(); ++i) {
        if (all.roots[i] > lo && all.roots[i] < hi) {
            res.roots.push_back(all.roots[i]);
            res.multiplicity.push_back(all.multiplicity[i]);
        }
    }
    return res;
}

}  // namespace fdrelay
