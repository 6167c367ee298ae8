#include "revspec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revspec/detail/roots.hpp"
#include "revspec/detail/spline.hpp"

namespace revspec {

namespace {
constexpr double kPi = std::numbers::pi_v<double>;
}

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::Round: return "round";
        case ProfileKind::SymmetricBase: return "symmetric_base";
        case ProfileKind::CorDDeformed: return "cor_d";
        case ProfileKind::FlatEquator: return "flat_equator";
        case ProfileKind::Tabulated: return "tabulated";
        case ProfileKind::Derived: return "derived";
    }
    return "unknown";
}

long double ProfileBackend::deficit(Branch side, long double s) const {
    const double sm = sigma_max();
    const double sigma = (side == Branch::North) ? sm + static_cast<double>(s)
                                                 : sm - static_cast<double>(s);
    return static_cast<long double>(r_max()) - static_cast<long double>(eval(sigma).r);
}

long double ProfileBackend::deficit_derivative(Branch side, long double s) const {
    const double sm = sigma_max();
    const double sigma = (side == Branch::North) ? sm + static_cast<double>(s)
                                                 : sm - static_cast<double>(s);
    const double slope = eval(sigma).dr;
    return (side == Branch::North) ? -static_cast<long double>(slope)
                                   : static_cast<long double>(slope);
}

long double ProfileBackend::deficit_difference(Branch side, long double s_hi, long double s_lo) const {
    return deficit(side, s_hi) - deficit(side, s_lo);
}

double ProfileBackend::deficit_range() const {
    return std::min(sigma_max(), meridian_half_length() - sigma_max());
}

ProfileFunction::ProfileFunction(std::shared_ptr<const ProfileBackend> backend, ProfileKind kind,
                                 std::string name, ProfileFlags flags)
    : backend_(std::move(backend)), kind_(kind), name_(std::move(name)), flags_(flags) {
    if (!backend_) throw ConfigError("ProfileFunction: null backend");
}

// ---- round ------------------------------------------------------------------

namespace {

class RoundBackend final : public ProfileBackend {
public:
    explicit RoundBackend(double radius) : a_(radius) {
        if (!(radius > 0)) throw ConfigError("round: radius must be positive");
    }
    ProfileJet eval(double sigma) const override {
        const double x = sigma / a_;
        return {a_ * std::sin(x), std::cos(x), -std::sin(x) / a_};
    }
    double meridian_half_length() const override { return kPi * a_; }
    double sigma_max() const override { return kPi * a_ / 2; }
    double r_max() const override { return a_; }
    nlohmann::json config() const override {
        return {{"kind", "round"}, {"m", kPi * a_}, {"params", {{"radius", a_}}}};
    }

private:
    double a_;
};

class SymmetricBaseBackend final : public ProfileBackend {
public:
    SymmetricBaseBackend(double m, std::vector<double> coeffs)
        : m_(m), coeffs_(std::move(coeffs)) {
        if (!(m > 0)) throw ConfigError("symmetric_base: m must be positive");
        if (coeffs_.empty()) throw ConfigError("symmetric_base: empty coefficient list");
        double rm = 0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            rm += coeffs_[k] * ((k % 2 == 0) ? 1.0 : -1.0);
        r_max_ = rm;
    }
    ProfileJet eval(double sigma) const override {
        const double w = kPi / m_;
        double r = 0, dr = 0, ddr = 0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const double fk = (2.0 * static_cast<double>(k) + 1.0) * w;
            const double s = std::sin(fk * sigma), c = std::cos(fk * sigma);
            r += coeffs_[k] * s;
            dr += coeffs_[k] * fk * c;
            ddr -= coeffs_[k] * fk * fk * s;
        }
        return {r, dr, ddr};
    }
    double meridian_half_length() const override { return m_; }
    double sigma_max() const override { return m_ / 2; }
    double r_max() const override { return r_max_; }
    nlohmann::json config() const override {
        return {{"kind", "symmetric_base"},
                {"m", m_},
                {"params", {{"coefficients", coeffs_}}}};
    }

private:
    double m_;
    std::vector<double> coeffs_;
    double r_max_;
};

class TabulatedBackend final : public ProfileBackend {
public:
    TabulatedBackend(double m, std::vector<double> sigma, std::vector<double> r)
        : m_(m), sigma_(sigma), r_(r), spline_(std::move(sigma), std::move(r)) {
        if (!(m > 0)) throw ConfigError("tabulated: m must be positive");
        if (std::abs(spline_.min_x()) > 1e-12 * m || std::abs(spline_.max_x() - m) > 1e-12 * m)
            throw ConfigError("tabulated: grid must span [0, m]");
        locate_maximum();
    }
    ProfileJet eval(double sigma) const override {
        return {spline_.value(sigma), spline_.derivative(sigma), spline_.second_derivative(sigma)};
    }
    double meridian_half_length() const override { return m_; }
    double sigma_max() const override { return sigma_max_; }
    double r_max() const override { return r_max_; }
    nlohmann::json config() const override {
        return {{"kind", "tabulated"},
                {"m", m_},
                {"params", {{"sigma", sigma_}, {"r", r_}}}};
    }

private:
    double m_;
    std::vector<double> sigma_, r_;
    detail::CubicSpline spline_;
    double sigma_max_ = 0, r_max_ = 0;

    void locate_maximum() {
        // coarse argmax over the knots, then a bracketed root-find on r'
        const auto& xs = spline_.knots();
        std::size_t best = 0;
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (spline_.value(xs[i]) > spline_.value(xs[best])) best = i;
        double lo = xs[best > 0 ? best - 1 : 0];
        double hi = xs[std::min(best + 1, xs.size() - 1)];
        const double dlo = spline_.derivative(lo), dhi = spline_.derivative(hi);
        if (dlo > 0 && dhi < 0) {
            sigma_max_ = roots::brent([&](double x) { return spline_.derivative(x); }, lo, hi,
                                      1e-13 * m_);
        } else {
            sigma_max_ = xs[best];
        }
        sigma_max_ = std::clamp(sigma_max_, xs.front(), xs.back());
        r_max_ = spline_.value(sigma_max_);
    }
};

} // namespace

ProfileFunction make_round(double radius) {
    return ProfileFunction(std::make_shared<RoundBackend>(radius), ProfileKind::Round, "round");
}

ProfileFunction make_symmetric_base(double m, std::vector<double> coefficients, std::string name) {
    return ProfileFunction(std::make_shared<SymmetricBaseBackend>(m, std::move(coefficients)),
                           ProfileKind::SymmetricBase, std::move(name));
}

ProfileFunction make_quartic_flat() {
    ProfileFlags flags;
    flags.flat_equator = true; // r'' vanishes at the equator (finite order)
    return ProfileFunction(
        std::make_shared<SymmetricBaseBackend>(kPi, std::vector<double>{0.75, 1.0 / 12.0}),
        ProfileKind::SymmetricBase, "quartic_flat", flags);
}

ProfileFunction make_tabulated(double m, std::vector<double> sigma, std::vector<double> r,
                               std::string name) {
    ProfileFlags flags;
    flags.low_accuracy = true;
    return ProfileFunction(std::make_shared<TabulatedBackend>(m, std::move(sigma), std::move(r)),
                           ProfileKind::Tabulated, std::move(name), flags);
}

ProfileFunction make_from_backend(std::shared_ptr<const ProfileBackend> backend, ProfileKind kind,
                                  std::string name, ProfileFlags flags) {
    return ProfileFunction(std::move(backend), kind, std::move(name), flags);
}

// ---- operations --------------------------------------------------------------

ValidationReport validate(const ProfileFunction& p, double tol) {
    ValidationReport rep;
    const double m = p.m();
    const double scale = std::max(1.0, p.r_max());

    auto push = [&](const std::string& name, bool pass, double residual, const char* code) {
        rep.checks.push_back({name, pass, residual});
        if (!pass && code) rep.error_codes.emplace_back(code);
    };

    const double r0 = p.r(0.0), rm = p.r(m);
    push("r(0) = 0", std::abs(r0) <= tol * scale, std::abs(r0), "BoundarySlope");
    push("r(m) = 0", std::abs(rm) <= tol * scale, std::abs(rm), "BoundarySlope");

    const double d0 = p.dr(0.0), dm = p.dr(m);
    push("r'(0) = 1", std::abs(d0 - 1.0) <= tol, std::abs(d0 - 1.0), "BoundarySlope");
    push("r'(m) = -1", std::abs(dm + 1.0) <= tol, std::abs(dm + 1.0), "BoundarySlope");

    // dense interior scan
    const int n = 2048;
    bool positive = true;
    double min_r = std::numeric_limits<double>::infinity();
    int sign_changes = 0;
    double prev_dr = p.dr(0.5 * m / n);
    double change_pos = -1;
    for (int i = 1; i <= n; ++i) {
        const double sigma = (i - 0.5) * m / n;
        const ProfileJet jet = p.eval(sigma);
        min_r = std::min(min_r, jet.r);
        if (jet.r <= 0) positive = false;
        if (prev_dr > 0 && jet.dr < 0) {
            ++sign_changes;
            change_pos = sigma;
        } else if (prev_dr < 0 && jet.dr > 0) {
            ++sign_changes;
            change_pos = sigma;
        }
        if (jet.dr != 0.0) prev_dr = jet.dr;
    }
    (void)change_pos;
    push("r > 0 on (0,m)", positive, positive ? min_r : -min_r, "Negative");
    push("unique critical point of r'", sign_changes == 1, static_cast<double>(sign_changes),
         "NonUnimodal");

    const double smax = p.sigma_max();
    const bool interior = smax > 0 && smax < m;
    push("sigma_max interior", interior, interior ? 0.0 : 1.0, "NonUnimodal");
    const double dr_at_max = std::abs(p.dr(smax));
    push("r'(sigma_max) = 0", dr_at_max <= std::sqrt(tol), dr_at_max, "NonUnimodal");

    // dedupe error codes, preserve first occurrence order
    std::vector<std::string> codes;
    for (auto& c : rep.error_codes)
        if (std::find(codes.begin(), codes.end(), c) == codes.end()) codes.push_back(c);
    rep.error_codes = std::move(codes);

    rep.valid = true;
    for (const auto& c : rep.checks) rep.valid = rep.valid && c.pass;
    return rep;
}

double curvature(const ProfileFunction& p, double sigma) {
    if (!(sigma > 0.0 && sigma < p.m()))
        throw OutOfDomain("curvature: sigma must lie in (0, m)");
    const ProfileJet jet = p.eval(sigma);
    return -jet.ddr / jet.r;
}

double partial_inverse(const ProfileFunction& p, double rho, Branch branch, double tol_root) {
    const double rmax = p.r_max();
    if (rho < 0.0 || rho > rmax * (1.0 + 1e-12) + tol_root)
        throw OutOfRange("partial_inverse: rho outside [0, r_max]");
    const double smax = p.sigma_max();
    // a flat or quadratic top stalls the residual; snap to the critical point
    if (rho >= rmax - tol_root) return smax;
    double lo, hi;
    if (branch == Branch::South) {
        lo = 0.0;
        hi = smax;
    } else {
        lo = smax;
        hi = p.m();
    }
    auto g = [&](double sigma) { return p.r(sigma) - rho; };
    auto dg = [&](double sigma) { return p.dr(sigma); };
    const double glo = g(lo), ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (std::signbit(glo) == std::signbit(ghi)) {
        // rho below both endpoint values can only happen from roundoff at 0
        return (std::abs(glo) < std::abs(ghi)) ? lo : hi;
    }
    const double guess = lo + (hi - lo) * 0.5;
    return roots::newton_bracketed(g, dg, lo, hi, guess, tol_root);
}

double superlevel_length(const ProfileFunction& p, double rho, double tol_root) {
    return partial_inverse(p, rho, Branch::North, tol_root) -
           partial_inverse(p, rho, Branch::South, tol_root);
}

} // namespace revspec
