#pragma once

#include <optional>
#include <vector>

#include "revspec/detail/ode.hpp"
#include "revspec/profile.hpp"

namespace revspec::flow {

// Point of the unit tangent bundle in geodesic polar coordinates. theta and
// beta are kept unwrapped so winding numbers are exact integers after
// rounding; reduce mod 2 pi only for presentation.
struct FlowState {
    double sigma = 0;
    double theta = 0;
    double beta = 0;
    double t = 0; // accumulated arc length
};

struct FlowDerivative {
    double dsigma, dtheta, dbeta;
};

enum class ReturnEventKind { EquatorCrossingNorth, EquatorCrossingSouth, TurningPoint };

struct ReturnEvent {
    ReturnEventKind kind;
    FlowState state;
    double time;
};

struct FlowOptions {
    double tol = 1e-10;             // integrator relative tolerance
    double sigma_floor_factor = 1e-6; // sigma_floor = factor * m
    double beta_floor = 1e-6;        // meridian guard around pi/2
    double tau_cap_factor = 1e4;     // tau_cap = factor * m
    double tol_close_state = 1e-6;   // classify_type closure in (sigma, beta)
    double tol_close_theta = 1e-5;   // classify_type closure in theta mod 2 pi
};

// Reeb vector field in geodesic polar coordinates.
FlowDerivative reeb_field(const ProfileFunction& p, const FlowState& s);

double clairaut(const ProfileFunction& p, const FlowState& s);

struct Trajectory {
    std::vector<ode::DenseStep<3>> steps;
    double t_begin = 0, t_end = 0;
    FlowState initial, final_state;

    FlowState at(double t) const;
};

// Adaptive integration of the geodesic flow over [0, t_end] (t_end may be
// negative). The orbit must stay inside the sigma floor band.
Trajectory integrate(const ProfileFunction& p, const FlowState& s0, double t_end,
                     const FlowOptions& opt = {});

struct ReturnData {
    double tau = 0;         // first return time to {sigma = sigma_max, sin beta > 0}
    double theta_shift = 0; // unwrapped theta variation along the arc
    double beta0 = 0;
    bool meridian = false;  // handled by the closed form tau = 2m
    std::vector<ReturnEvent> events;
};

ReturnData first_return(const ProfileFunction& p, double beta0, const FlowOptions& opt = {});

std::vector<ReturnData> first_return_batch(const ProfileFunction& p,
                                           const std::vector<double>& betas,
                                           const FlowOptions& opt = {});

// First tangency with a parallel and the angular discrepancy
// Delta(t) = theta(t) - theta(0) - cos(beta0) t / r_max.
double tau1(const ProfileFunction& p, double beta0, const FlowOptions& opt = {});
double discrepancy(const ProfileFunction& p, double beta0, double t, const FlowOptions& opt = {});
// max over [0, tau(v)] of |Delta|, the stability functional of the equator
double max_discrepancy_over_return(const ProfileFunction& p, double beta0,
                                   const FlowOptions& opt = {});

struct TypeResult {
    bool closed = false;
    int p = 0, q = 0;
    double length = 0;
    double residual_state = 0; // closure residual in (sigma, beta)
    double residual_theta = 0; // distance of the theta shift from 2 pi Z
};

// Integrates q consecutive returns from eta and tests orbit closure.
TypeResult classify_type(const ProfileFunction& p, double eta, int q,
                         const FlowOptions& opt = {});

// Dynamical continuation between isospectral metrics: flow v to the Birkhoff
// section of g1, copy (theta, beta) to the section of g2, flow back.
FlowState conjugacy_eval(const ProfileFunction& g1, const ProfileFunction& g2,
                         const FlowState& v, const FlowOptions& opt = {});

} // namespace revspec::flow
