#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "revspec/errors.hpp"

namespace revspec::roots {

// Brent's method on a sign-changing bracket [a,b]. Stops when the bracket
// width drops below xtol (absolute) or the residual is exactly zero.
template <typename F>
double brent(F&& f, double a, double b, double xtol, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::signbit(fa) == std::signbit(fb))
        throw DomainError("brent: no sign change on [" + std::to_string(a) +
                          ", " + std::to_string(b) + "]");
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 0.5 * xtol + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

// Newton iteration confined to a sign-changing bracket; every step keeps the
// bracket valid, and steps that leave it (or stall) fall back to bisection.
template <typename F, typename DF>
double newton_bracketed(F&& f, DF&& df, double lo, double hi, double x0, double xtol,
                        int max_iter = 100) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw DomainError("newton_bracketed: no sign change");
    double x = std::clamp(x0, lo, hi);
    for (int iter = 0; iter < max_iter; ++iter) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(flo)) { lo = x; flo = fx; }
        else { hi = x; fhi = fx; }
        if (hi - lo <= xtol) return 0.5 * (lo + hi);
        const double dfx = df(x);
        double xn = (dfx != 0.0) ? x - fx / dfx : lo - 1.0;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
    }
    return 0.5 * (lo + hi);
}

} // namespace revspec::roots
