#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "revspec/errors.hpp"

namespace revspec::quad {

template <typename Real>
struct GaussRule {
    std::vector<Real> nodes;   // on (-1,1)
    std::vector<Real> weights;
};

// Gauss-Legendre nodes by Newton iteration on P_n; good to machine precision
// for the Real in use.
template <typename Real>
GaussRule<Real> gauss_legendre(int n) {
    GaussRule<Real> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const Real pi = static_cast<Real>(3.14159265358979323846264338327950288L);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Real x = std::cos(static_cast<double>(pi * (i + Real(0.75)) / (n + Real(0.5))));
        Real dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            Real p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const Real dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 4 * std::numeric_limits<Real>::epsilon() * std::abs(x) + std::numeric_limits<Real>::min())
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const Real w = 2 / ((1 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

template <typename Real>
const GaussRule<Real>& rule15() {
    static const GaussRule<Real> r = gauss_legendre<Real>(15);
    return r;
}

template <typename Real>
const GaussRule<Real>& rule31() {
    static const GaussRule<Real> r = gauss_legendre<Real>(31);
    return r;
}

template <typename Real, typename F>
Real fixed_gl(F&& f, Real a, Real b, const GaussRule<Real>& rule) {
    const Real mid = (a + b) / 2, half = (b - a) / 2;
    Real sum = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

struct AdaptiveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_panels = 10000;
};

// Paired 15/31-point estimates with interval halving. Panels whose estimates
// disagree are split; the budget bounds the total number of evaluated panels.
template <typename Real, typename F>
Real adaptive_gl(F&& f, Real a, Real b, const AdaptiveOptions& opt = {}) {
    if (!(b > a)) return Real(0);
    struct Panel {
        Real a, b;
    };
    const Real whole = std::abs(fixed_gl<Real>(f, a, b, rule31<Real>()));
    Real scale = std::max<Real>(whole, static_cast<Real>(opt.abs_tol));
    const Real total_len = b - a;

    std::vector<Panel> stack{{a, b}};
    Real sum = 0;
    Real acc_abs = 0;
    int used = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        if (++used > opt.max_panels)
            throw QuadratureFailure("adaptive_gl: panel budget exhausted");
        const Real coarse = fixed_gl<Real>(f, p.a, p.b, rule15<Real>());
        const Real fine = fixed_gl<Real>(f, p.a, p.b, rule31<Real>());
        const Real err = std::abs(fine - coarse);
        scale = std::max<Real>(scale, acc_abs);
        const Real local_tol =
            std::max<Real>(static_cast<Real>(opt.abs_tol),
                           static_cast<Real>(opt.rel_tol) * scale) *
            ((p.b - p.a) / total_len);
        const Real len = p.b - p.a;
        const bool too_small = len <= 8 * std::numeric_limits<Real>::epsilon() * (std::abs(p.a) + std::abs(p.b) + Real(1));
        if (err <= local_tol || too_small) {
            sum += fine;
            acc_abs += std::abs(fine);
        } else {
            const Real mid = (p.a + p.b) / 2;
            stack.push_back({p.a, mid});
            stack.push_back({mid, p.b});
        }
    }
    return sum;
}

// Same, over a partition given by interior breakpoints.
template <typename Real, typename F>
Real adaptive_gl_split(F&& f, Real a, Real b, const std::vector<Real>& breakpoints,
                       const AdaptiveOptions& opt = {}) {
    std::vector<Real> cuts{a};
    for (Real c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    Real sum = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        sum += adaptive_gl<Real>(f, cuts[i], cuts[i + 1], opt);
    return sum;
}

} // namespace revspec::quad
