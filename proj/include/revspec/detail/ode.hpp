#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "revspec/errors.hpp"

namespace revspec::ode {

// Dormand-Prince 5(4) with the classic quartic continuous extension.
// The RHS is autonomous-friendly: rhs(t, y, dy).

template <int N>
struct DenseStep {
    double t0 = 0, h = 0;
    std::array<std::array<double, 5>, N> rcont{};

    std::array<double, N> at(double t) const {
        const double theta = (t - t0) / h;
        const double th1 = 1.0 - theta;
        std::array<double, N> y;
        for (int i = 0; i < N; ++i) {
            const auto& rc = rcont[i];
            y[i] = rc[0] + theta * (rc[1] + th1 * (rc[2] + theta * (rc[3] + th1 * rc[4])));
        }
        return y;
    }
};

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 0.0;   // 0: choose automatically
    double h_max = 0.0;    // 0: no cap
    long max_steps = 50'000'000;
};

template <int N, typename RHS>
class Dopri5 {
public:
    using Vec = std::array<double, N>;

    Dopri5(RHS rhs, const StepControl& ctl) : rhs_(rhs), ctl_(ctl) {}

    void start(double t0, const Vec& y0) {
        t_ = t0;
        y_ = y0;
        rhs_(t_, y_.data(), k1_.data());
        h_ = 0.0;
        steps_ = 0;
    }

    double time() const { return t_; }
    const Vec& state() const { return y_; }

    // Advances one accepted step toward t_end (never past it). Returns false
    // once t_end is reached. The dense interpolant of the accepted step is
    // stored in `dense`.
    bool step(double t_end, DenseStep<N>& dense) {
        const double dir = (t_end >= t_) ? 1.0 : -1.0;
        if (dir * (t_end - t_) <= 0.0) return false;
        if (h_ == 0.0) h_ = initial_step(t_end, dir);
        bool rejected = false;
        for (;;) {
            if (++steps_ > ctl_.max_steps)
                throw StepFailure("dopri5: step budget exhausted");
            double h = h_;
            if (dir * (t_ + h - t_end) > 0.0) h = t_end - t_;
            if (std::abs(h) < 1e-14 * (std::abs(t_) + 1.0)) {
                // step underflow; land exactly on t_end
                h = t_end - t_;
            }

            Vec k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, y1{}, ytmp{};
            auto stage = [&](const std::array<double, 6>& a) {
                for (int i = 0; i < N; ++i) {
                    const double acc = a[0] * k1_[i] + a[1] * k2[i] + a[2] * k3[i] +
                                       a[3] * k4[i] + a[4] * k5[i] + a[5] * k6[i];
                    ytmp[i] = y_[i] + h * acc;
                }
            };

            stage({1.0 / 5, 0, 0, 0, 0, 0});
            rhs_(t_ + h / 5, ytmp.data(), k2.data());
            stage({3.0 / 40, 9.0 / 40, 0, 0, 0, 0});
            rhs_(t_ + 3 * h / 10, ytmp.data(), k3.data());
            stage({44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0});
            rhs_(t_ + 4 * h / 5, ytmp.data(), k4.data());
            stage({19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0});
            rhs_(t_ + 8 * h / 9, ytmp.data(), k5.data());
            stage({9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0});
            rhs_(t_ + h, ytmp.data(), k6.data());
            for (int i = 0; i < N; ++i)
                y1[i] = y_[i] + h * (35.0 / 384 * k1_[i] + 500.0 / 1113 * k3[i] +
                                     125.0 / 192 * k4[i] - 2187.0 / 6784 * k5[i] +
                                     11.0 / 84 * k6[i]);
            rhs_(t_ + h, y1.data(), k7.data());

            double err = 0;
            for (int i = 0; i < N; ++i) {
                const double e = h * (71.0 / 57600 * k1_[i] - 71.0 / 16695 * k3[i] +
                                      71.0 / 1920 * k4[i] - 17253.0 / 339200 * k5[i] +
                                      22.0 / 525 * k6[i] - 1.0 / 40 * k7[i]);
                const double sc =
                    ctl_.abs_tol + ctl_.rel_tol * std::max(std::abs(y_[i]), std::abs(y1[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / N);

            const double fac = 0.9 * std::pow(std::max(err, 1e-30), -0.2);
            double fac_clamped = std::clamp(fac, 0.2, rejected ? 1.0 : 5.0);
            double h_next = h * fac_clamped;
            if (ctl_.h_max > 0.0) h_next = dir * std::min(std::abs(h_next), ctl_.h_max);

            if (err <= 1.0) {
                dense.t0 = t_;
                dense.h = h;
                for (int i = 0; i < N; ++i) {
                    const double dy = y1[i] - y_[i];
                    auto& rc = dense.rcont[i];
                    rc[0] = y_[i];
                    rc[1] = dy;
                    rc[2] = h * k1_[i] - dy;
                    rc[3] = dy - h * k7[i] - rc[2];
                    rc[4] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                 d6 * k6[i] + d7 * k7[i]);
                }
                t_ += h;
                y_ = y1;
                k1_ = k7; // FSAL
                h_ = h_next;
                return true;
            }
            rejected = true;
            h_ = h_next;
        }
    }

private:
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;

    double initial_step(double t_end, double dir) const {
        double scale = 0;
        for (int i = 0; i < N; ++i)
            scale = std::max(scale, std::abs(k1_[i]) / (1.0 + std::abs(y_[i])));
        double h0 = std::pow(std::max(ctl_.rel_tol, 1e-16), 0.2) / std::max(scale, 1e-4);
        h0 = std::min(h0, std::abs(t_end - t_));
        if (ctl_.h_max > 0.0) h0 = std::min(h0, ctl_.h_max);
        return dir * std::max(h0, 1e-10);
    }

    RHS rhs_;
    StepControl ctl_;
    double t_ = 0, h_ = 0;
    Vec y_{};
    Vec k1_{};
    long steps_ = 0;
};

} // namespace revspec::ode
