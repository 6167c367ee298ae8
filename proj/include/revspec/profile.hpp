#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "revspec/errors.hpp"

namespace revspec {

enum class ProfileKind { Round, SymmetricBase, CorDDeformed, FlatEquator, Tabulated, Derived };
enum class Branch { South, North };

std::string to_string(ProfileKind k);

// r and its first two derivatives at one point.
struct ProfileJet {
    double r;
    double dr;
    double ddr;
};

// Behavioral flags carried by a profile through the pipelines.
struct ProfileFlags {
    bool low_accuracy = false;                     // tabulated / interpolated data
    bool flat_equator = false;                     // r''(sigma_max) = 0; guards the closed forms
    bool smoothness_unverified_at_midpoint = false; // rearrangement of an infinitely flat input
};

// Backends supply the metric's single datum r on [0, m]. All backends are
// immutable after construction; evaluation is safe from many threads.
class ProfileBackend {
public:
    virtual ~ProfileBackend() = default;

    virtual ProfileJet eval(double sigma) const = 0;
    virtual double meridian_half_length() const = 0;
    virtual double sigma_max() const = 0;
    virtual double r_max() const = 0;
    virtual nlohmann::json config() const = 0;

    // Equator deficit r_max - r(sigma_max -/+ s) with derivative, in extended
    // precision. The generic implementation differences eval(); kinds with a
    // closed-form deficit override it (needed when the deficit is far below
    // double resolution relative to r_max).
    virtual long double deficit(Branch side, long double s) const;
    virtual long double deficit_derivative(Branch side, long double s) const;
    // deficit(s_hi) - deficit(s_lo), cancellation-free where possible
    virtual long double deficit_difference(Branch side, long double s_hi, long double s_lo) const;
    virtual bool has_exact_deficit() const { return false; }
    // largest s for which the deficit forms above are exact
    virtual double deficit_range() const;
};

class ProfileFunction {
public:
    ProfileFunction() = default;
    ProfileFunction(std::shared_ptr<const ProfileBackend> backend, ProfileKind kind,
                    std::string name, ProfileFlags flags = {});

    bool valid_handle() const { return backend_ != nullptr; }

    ProfileJet eval(double sigma) const { return backend_->eval(sigma); }
    double r(double sigma) const { return backend_->eval(sigma).r; }
    double dr(double sigma) const { return backend_->eval(sigma).dr; }
    double ddr(double sigma) const { return backend_->eval(sigma).ddr; }

    double m() const { return backend_->meridian_half_length(); }
    double sigma_max() const { return backend_->sigma_max(); }
    double r_max() const { return backend_->r_max(); }

    ProfileKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const ProfileFlags& flags() const { return flags_; }
    const ProfileBackend& backend() const { return *backend_; }
    std::shared_ptr<const ProfileBackend> backend_ptr() const { return backend_; }
    nlohmann::json config() const { return backend_->config(); }

private:
    std::shared_ptr<const ProfileBackend> backend_;
    ProfileKind kind_ = ProfileKind::Round;
    std::string name_;
    ProfileFlags flags_;
};

// ---- builtin constructors -------------------------------------------------

ProfileFunction make_round(double radius = 1.0);

// r(sigma) = sum_k c_k sin((2k+1) pi sigma / m); symmetric about m/2.
ProfileFunction make_symmetric_base(double m, std::vector<double> coefficients,
                                    std::string name = "symmetric_base");

// Symmetric base whose profile is sin(s) - sin(s)^3/3: the curvature vanishes
// to exactly second order at the equator.
ProfileFunction make_quartic_flat();

struct FlatEquatorParams {
    double m = 3.14159265358979323846;
    int j_min = 1;        // first retained term of the bump series
    int j_max = 12;       // truncation index of the bump series
    double s_core = 0.55; // exact deficit region half-width
    double s_blend = 0.8; // end of the blend window toward the poles
};

// Infinite-order flat equator built from the plateau-bump series plus
// exp(-1/s); see the demo subcommand for the instability it produces.
ProfileFunction make_flat_equator(const FlatEquatorParams& params = {});

ProfileFunction make_tabulated(double m, std::vector<double> sigma, std::vector<double> r,
                               std::string name = "tabulated");

ProfileFunction make_from_backend(std::shared_ptr<const ProfileBackend> backend,
                                  ProfileKind kind, std::string name, ProfileFlags flags = {});

// ---- operations ------------------------------------------------------------

struct ValidationCheck {
    std::string name;
    bool pass;
    double residual;
};

struct ValidationReport {
    bool valid = false;
    std::vector<ValidationCheck> checks;
    std::vector<std::string> error_codes; // NonUnimodal / BoundarySlope / Negative
};

ValidationReport validate(const ProfileFunction& p, double tol = 1e-8);

// K = -r''/r at an interior point.
double curvature(const ProfileFunction& p, double sigma);

// Inverse of r restricted to one monotone branch.
double partial_inverse(const ProfileFunction& p, double rho, Branch branch,
                       double tol_root = 1e-12);

// length({ sigma : r(sigma) >= rho }) = sigma_N(rho) - sigma_S(rho)
double superlevel_length(const ProfileFunction& p, double rho, double tol_root = 1e-12);

} // namespace revspec
