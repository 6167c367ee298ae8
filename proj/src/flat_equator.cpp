#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "revspec/detail/quadrature.hpp"
#include "revspec/detail/spline.hpp"
#include "revspec/profile.hpp"

// Profile with an infinite-order flat equator. The equator deficit on the
// north side is f(s) + h(s), where h(s) = exp(-1/s) and f integrates a
// lacunary series of bumps: the j-th term is supported on (4^-j, 2*4^-j)
// with mass j^-j * 4^-j, so f is constant on every gap [4^-k/2, 4^-k].
// The south deficit is h alone. Away from the core both deficits are
// continued by a derivative-level blend that keeps r strictly monotone on
// each side and reaches the poles with unit slope.

namespace revspec {

namespace {

using ::expl;
using ::expm1l;

// smooth step: 0 for x <= 0, 1 for x >= 1
struct SmoothStep {
    static long double phi(long double x) { return x > 0 ? expl(-1.0L / x) : 0.0L; }
    static long double dphi(long double x) { return x > 0 ? expl(-1.0L / x) / (x * x) : 0.0L; }
    static long double ddphi(long double x) {
        return x > 0 ? expl(-1.0L / x) * (1 - 2 * x) / (x * x * x * x) : 0.0L;
    }
    static void jet(long double x, long double out[3]) {
        if (x <= 0) { out[0] = out[1] = out[2] = 0; return; }
        if (x >= 1) { out[0] = 1; out[1] = out[2] = 0; return; }
        const long double a = phi(x), b = phi(1 - x);
        const long double da = dphi(x), db = -dphi(1 - x);
        const long double dda = ddphi(x), ddb = ddphi(1 - x);
        const long double S = a + b, dS = da + db, ddS = dda + ddb;
        out[0] = a / S;
        out[1] = (da * S - a * dS) / (S * S);
        out[2] = (dda * S - a * ddS) / (S * S) - 2 * dS * (da * S - a * dS) / (S * S * S);
    }
};

// C-infinity bump on (0,1) with a widened top, peak value 1 at 1/2
struct SoftBump {
    static void jet(long double x, long double out[3]) {
        if (x <= 0 || x >= 1) { out[0] = out[1] = out[2] = 0; return; }
        const long double q = x * (1 - x);
        const long double u = (1.0L - 1.0L / (4 * q)) / 4.0L;
        const long double du = (1 - 2 * x) / (16 * q * q);
        const long double ddu =
            -((1 - 2 * x) * (1 - 2 * x) / (8 * q * q * q) + 1.0L / (8 * q * q));
        const long double B = expl(u);
        out[0] = B;
        out[1] = B * du;
        out[2] = B * (du * du + ddu);
    }
};

// un-normalized bump for the series in f
long double chi_raw(long double x) {
    if (x <= 0 || x >= 1) return 0;
    return expl(-1.0L / (x * (1 - x)));
}

long double chi_raw_derivative(long double x) {
    if (x <= 0 || x >= 1) return 0;
    const long double q = x * (1 - x);
    return chi_raw(x) * (1 - 2 * x) / (q * q);
}

class FlatEquatorBackend final : public ProfileBackend {
public:
    explicit FlatEquatorBackend(const FlatEquatorParams& params) : prm_(params) {
        if (!(prm_.m > 0)) throw ConfigError("flat_equator: m must be positive");
        if (prm_.j_min < 1 || prm_.j_max < prm_.j_min)
            throw ConfigError("flat_equator: bad truncation indices");
        const double support_hi = 2.0 * std::pow(4.0, -prm_.j_min);
        if (!(prm_.s_core > support_hi))
            throw ConfigError("flat_equator: s_core must exceed the widest bump support");
        if (!(prm_.s_blend > prm_.s_core && prm_.s_blend < prm_.m / 2))
            throw ConfigError("flat_equator: need s_core < s_blend < m/2");

        build_chi_table();
        for (int j = prm_.j_min; j <= prm_.j_max; ++j) {
            weights_.push_back(
                std::pow(static_cast<long double>(j), -static_cast<long double>(j)));
            lo_.push_back(std::pow(4.0L, -static_cast<long double>(j)));
        }
        calibrate_side(Branch::North);
        calibrate_side(Branch::South);
        build_outer_tables();
    }

    ProfileJet eval(double sigma) const override {
        const double smax = prm_.m / 2;
        const Branch side = sigma >= smax ? Branch::North : Branch::South;
        const double s = std::abs(sigma - smax);
        const double sgn = (side == Branch::North) ? -1.0 : 1.0; // dr/dsigma = sgn * V'(s)
        long double V, dV, ddV;
        if (s <= prm_.s_core) {
            V = core_deficit(side, s);
            dV = core_deficit_derivative(side, s);
            ddV = core_deficit_second(side, s);
        } else {
            outer_jet(side, s, V, dV, ddV);
        }
        return {static_cast<double>(1.0L - V), sgn * static_cast<double>(dV),
                static_cast<double>(-ddV)};
    }

    double meridian_half_length() const override { return prm_.m; }
    double sigma_max() const override { return prm_.m / 2; }
    double r_max() const override { return 1.0; }

    nlohmann::json config() const override {
        return {{"kind", "flat_equator"},
                {"m", prm_.m},
                {"params",
                 {{"j_min", prm_.j_min},
                  {"j_max", prm_.j_max},
                  {"s_core", prm_.s_core},
                  {"s_blend", prm_.s_blend}}}};
    }

    bool has_exact_deficit() const override { return true; }
    double deficit_range() const override { return prm_.s_core; }

    long double deficit(Branch side, long double s) const override {
        if (s <= 0) return 0;
        if (static_cast<double>(s) > prm_.s_core) return ProfileBackend::deficit(side, s);
        return core_deficit(side, s);
    }

    long double deficit_derivative(Branch side, long double s) const override {
        if (s <= 0) return 0;
        if (static_cast<double>(s) > prm_.s_core)
            return ProfileBackend::deficit_derivative(side, s);
        return core_deficit_derivative(side, s);
    }

    long double deficit_difference(Branch side, long double s_hi, long double s_lo) const override {
        if (s_lo > s_hi) return -deficit_difference(side, s_lo, s_hi);
        if (static_cast<double>(s_hi) > prm_.s_core)
            return deficit(side, s_hi) - deficit(side, s_lo);
        long double diff = h_difference(s_hi, s_lo);
        if (side == Branch::North) diff += f_difference(s_hi, s_lo);
        return diff;
    }

private:
    FlatEquatorParams prm_;
    long double chi_norm_ = 0;                 // normalization of the bump
    std::vector<long double> chi_cum_;         // cumulative of chi_raw at uniform anchors
    static constexpr int kChiCells = 1024;
    std::vector<long double> weights_;         // j^-j
    std::vector<long double> lo_;              // 4^-j; bump support is (lo, 2 lo)
    long double blend_amp_[2] = {0, 0};        // bump amplitude per side (0=South, 1=North)
    detail::CubicSpline outer_V_[2];

    static long double h(long double s) { return s > 0 ? expl(-1.0L / s) : 0.0L; }
    static long double dh(long double s) { return s > 0 ? expl(-1.0L / s) / (s * s) : 0.0L; }
    static long double ddh(long double s) {
        return s > 0 ? expl(-1.0L / s) * (1 - 2 * s) / (s * s * s * s) : 0.0L;
    }
    static long double dddh(long double s) {
        if (s <= 0) return 0;
        return expl(-1.0L / s) * (1 - 6 * s + 6 * s * s) / (s * s * s * s * s * s);
    }

    static long double h_difference(long double s_hi, long double s_lo) {
        if (s_lo <= 0) return h(s_hi);
        // h(s_hi) - h(s_lo) = -h(s_hi) * expm1(-(s_hi - s_lo)/(s_hi s_lo))
        const long double d = (s_hi - s_lo) / (s_hi * s_lo);
        return -h(s_hi) * expm1l(-d);
    }

    void build_chi_table() {
        chi_cum_.assign(kChiCells + 1, 0.0L);
        for (int i = 1; i <= kChiCells; ++i) {
            const long double a = static_cast<long double>(i - 1) / kChiCells;
            const long double b = static_cast<long double>(i) / kChiCells;
            chi_cum_[i] = chi_cum_[i - 1] +
                          quad::fixed_gl<long double>(chi_raw, a, b, quad::rule31<long double>());
        }
        chi_norm_ = 1.0L / chi_cum_[kChiCells];
    }

    // integral of chi_raw over [0, x]; table anchor plus a short exact panel
    long double chi_cumulative(long double x) const {
        if (x <= 0) return 0;
        if (x >= 1) return chi_cum_[kChiCells];
        const int i = std::min<int>(static_cast<int>(x * kChiCells), kChiCells - 1);
        const long double a = static_cast<long double>(i) / kChiCells;
        return chi_cum_[i] +
               quad::fixed_gl<long double>(chi_raw, a, x, quad::rule31<long double>());
    }

    // integral of chi_raw over a window, accurate relative to its own size
    long double chi_window(long double x_lo, long double x_hi) const {
        x_lo = std::max<long double>(x_lo, 0.0L);
        x_hi = std::min<long double>(x_hi, 1.0L);
        if (x_hi <= x_lo) return 0;
        if (x_lo == 0.0L && x_hi == 1.0L) return chi_cum_[kChiCells];
        return quad::adaptive_gl<long double>(chi_raw, x_lo, x_hi, {1e-17, 1e-60, 20000});
    }

    // f(s_hi) - f(s_lo) without cancellation: each bump contributes the mass
    // of the clipped window, an integral of a positive function.
    long double f_difference(long double s_hi, long double s_lo) const {
        long double sum = 0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            const long double lo = lo_[k];
            if (s_lo >= 2 * lo || s_hi <= lo) continue;
            sum += weights_[k] * lo * chi_norm_ *
                   chi_window((s_lo - lo) / lo, (s_hi - lo) / lo);
        }
        return sum;
    }

    long double f_value(long double s) const {
        long double sum = 0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            const long double lo = lo_[k];
            if (s <= lo) continue;
            if (s >= 2 * lo) {
                sum += weights_[k] * lo; // full mass
            } else {
                sum += weights_[k] * lo * chi_norm_ * chi_cumulative((s - lo) / lo);
            }
        }
        return sum;
    }

    long double f_derivative(long double s) const {
        long double sum = 0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            const long double lo = lo_[k];
            if (s <= lo || s >= 2 * lo) continue;
            sum += weights_[k] * chi_norm_ * chi_raw((s - lo) / lo);
        }
        return sum;
    }

    long double f_second(long double s) const {
        long double sum = 0;
        for (std::size_t k = 0; k < weights_.size(); ++k) {
            const long double lo = lo_[k];
            if (s <= lo || s >= 2 * lo) continue;
            sum += weights_[k] * chi_norm_ * chi_raw_derivative((s - lo) / lo) / lo;
        }
        return sum;
    }

    long double core_deficit(Branch side, long double s) const {
        long double v = h(s);
        if (side == Branch::North) v += f_value(s);
        return v;
    }
    long double core_deficit_derivative(Branch side, long double s) const {
        long double v = dh(s);
        if (side == Branch::North) v += f_derivative(s);
        return v;
    }
    long double core_deficit_second(Branch side, long double s) const {
        long double v = ddh(s);
        if (side == Branch::North) v += f_second(s);
        return v;
    }
    long double core_deficit_third(Branch side, long double s) const {
        // used only inside the blend window, past every bump support
        (void)side;
        return dddh(s);
    }

    // V'(s) = (1-W) core' + W (1 + A * bump); W steps over [s_core, s_blend],
    // the bump is supported on (s_blend, m/2). out = (V', V'', V''').
    void blend_jet(Branch side, long double s, long double out[3]) const {
        const long double L = prm_.m / 2;
        const long double A = blend_amp_[side == Branch::North ? 1 : 0];
        long double W[3], B[3];
        const long double wscale = 1.0L / (prm_.s_blend - prm_.s_core);
        SmoothStep::jet((s - prm_.s_core) * wscale, W);
        W[1] *= wscale;
        W[2] *= wscale * wscale;
        const long double bscale = 1.0L / (L - prm_.s_blend);
        SoftBump::jet((s - prm_.s_blend) * bscale, B);
        B[1] *= bscale;
        B[2] *= bscale * bscale;
        const long double c0 = core_deficit_derivative(side, s);
        const long double c1 = core_deficit_second(side, s);
        const long double c2 = core_deficit_third(side, s);
        out[0] = (1 - W[0]) * c0 + W[0] * (1 + A * B[0]);
        out[1] = (1 - W[0]) * c1 + W[1] * (1 + A * B[0] - c0) + W[0] * A * B[1];
        out[2] = (1 - W[0]) * c2 + W[2] * (1 + A * B[0] - c0) +
                 W[1] * (2 * A * B[1] - 2 * c1) + W[0] * A * B[2];
    }

    void calibrate_side(Branch side) {
        const long double L = prm_.m / 2;
        auto base_slope = [&](long double s) {
            long double W[3];
            SmoothStep::jet((s - prm_.s_core) / (prm_.s_blend - prm_.s_core), W);
            return (1 - W[0]) * core_deficit_derivative(side, s) + W[0];
        };
        const long double base_mass =
            core_deficit(side, prm_.s_core) +
            quad::adaptive_gl<long double>(base_slope, (long double)prm_.s_core, L,
                                           {1e-14, 1e-18, 20000});
        auto bump_term = [&](long double s) {
            long double B[3];
            SoftBump::jet((s - prm_.s_blend) / (L - prm_.s_blend), B);
            return B[0];
        };
        const long double bump_mass = quad::adaptive_gl<long double>(
            bump_term, (long double)prm_.s_blend, L, {1e-14, 1e-18, 20000});
        const long double A = (1.0L - base_mass) / bump_mass;
        if (!(A > -1.0L))
            throw ConstraintViolation(
                "flat_equator: blend amplitude would break monotonicity; widen the blend window");
        blend_amp_[side == Branch::North ? 1 : 0] = A;
    }

    void build_outer_tables() {
        const double L = prm_.m / 2;
        const int n = 2001;
        for (int sidx = 0; sidx < 2; ++sidx) {
            const Branch side = sidx == 1 ? Branch::North : Branch::South;
            std::vector<double> xs(n), vs(n);
            long double acc = core_deficit(side, prm_.s_core);
            double prev = prm_.s_core;
            for (int i = 0; i < n; ++i) {
                const double s = prm_.s_core + (L - prm_.s_core) * i / (n - 1);
                xs[i] = s;
                if (i > 0) {
                    acc += quad::adaptive_gl<long double>(
                        [&](long double t) {
                            long double out[3];
                            blend_jet(side, t, out);
                            return out[0];
                        },
                        (long double)prev, (long double)s, {1e-13, 1e-17, 4000});
                }
                vs[i] = static_cast<double>(acc);
                prev = s;
            }
            outer_V_[sidx] = detail::CubicSpline(std::move(xs), std::move(vs));
        }
    }

    void outer_jet(Branch side, double s, long double& V, long double& dV, long double& ddV) const {
        const auto& table = outer_V_[side == Branch::North ? 1 : 0];
        V = table.value(std::min(s, table.max_x()));
        long double out[3];
        blend_jet(side, s, out);
        dV = out[0];
        ddV = out[1];
    }
};

} // namespace

ProfileFunction make_flat_equator(const FlatEquatorParams& params) {
    ProfileFlags flags;
    flags.flat_equator = true;
    return ProfileFunction(std::make_shared<FlatEquatorBackend>(params), ProfileKind::FlatEquator,
                           "flat_equator", flags);
}

} // namespace revspec
