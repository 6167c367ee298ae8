#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "revspec/errors.hpp"

namespace revspec::detail {

// C^2 cubic spline interpolant with not-a-knot end conditions (reproduces
// cubics exactly for n >= 4). Knots must be strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw DomainError("CubicSpline: need >= 2 matching knots");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i]))
                throw DomainError("CubicSpline: knots must increase strictly");
        c_.assign(n, 0.0);
        if (n == 2) return; // linear segment
        if (n == 3) {
            // single quadratic through the three points
            const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
            const double dd = 2.0 * ((y_[2] - y_[1]) / h1 - (y_[1] - y_[0]) / h0) / (h0 + h1);
            c_.assign(3, dd);
            return;
        }
        solve_second_derivatives();
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }

    double value(double x) const { return eval(x, 0); }
    double derivative(double x) const { return eval(x, 1); }
    double second_derivative(double x) const { return eval(x, 2); }

private:
    std::vector<double> x_, y_, c_; // c_ = second derivatives at knots

    std::size_t segment(double x) const {
        std::size_t lo = 0, hi = x_.size() - 1;
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return x_.size() - 2;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return lo;
    }

    double eval(double x, int order) const {
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - x) / h;
        const double b = (x - x_[i]) / h;
        switch (order) {
            case 0:
                return a * y_[i] + b * y_[i + 1] +
                       ((a * a * a - a) * c_[i] + (b * b * b - b) * c_[i + 1]) * h * h / 6.0;
            case 1:
                return (y_[i + 1] - y_[i]) / h +
                       ((3 * b * b - 1) * c_[i + 1] - (3 * a * a - 1) * c_[i]) * h / 6.0;
            default:
                return a * c_[i] + b * c_[i + 1];
        }
    }

    // The not-a-knot conditions express c_0 and c_{n-1} through their two
    // neighbors; substituting them into the first and last interior moment
    // equations leaves a pure tridiagonal system for c_1..c_{n-2}.
    void solve_second_derivatives() {
        const std::size_t n = x_.size();
        const std::size_t m = n - 2; // interior unknowns
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

        std::vector<double> sub(m, 0.0), diag(m, 0.0), sup(m, 0.0), rhs(m, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t k = i - 1;
            sub[k] = h[i - 1];
            diag[k] = 2.0 * (h[i - 1] + h[i]);
            sup[k] = h[i];
            rhs[k] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
        }
        // c_0 = (1 + h0/h1) c_1 - (h0/h1) c_2
        const double r0 = h[0] / h[1];
        diag[0] += h[0] * (1.0 + r0);
        sup[0] -= h[0] * r0;
        // c_{n-1} = (1 + h_{n-2}/h_{n-3}) c_{n-2} - (h_{n-2}/h_{n-3}) c_{n-3}
        const double r1 = h[n - 2] / h[n - 3];
        diag[m - 1] += h[n - 2] * (1.0 + r1);
        sub[m - 1] -= h[n - 2] * r1;

        // Thomas sweep
        for (std::size_t k = 1; k < m; ++k) {
            const double w = sub[k] / diag[k - 1];
            diag[k] -= w * sup[k - 1];
            rhs[k] -= w * rhs[k - 1];
        }
        std::vector<double> c(m);
        c[m - 1] = rhs[m - 1] / diag[m - 1];
        for (std::size_t k = m - 1; k-- > 0;)
            c[k] = (rhs[k] - sup[k] * c[k + 1]) / diag[k];

        for (std::size_t i = 0; i < m; ++i) c_[i + 1] = c[i];
        c_[0] = (1.0 + r0) * c_[1] - r0 * c_[2];
        c_[n - 1] = (1.0 + r1) * c_[n - 2] - r1 * c_[n - 3];
    }
};

} // namespace revspec::detail
