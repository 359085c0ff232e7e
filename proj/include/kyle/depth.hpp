#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "kyle/grid.hpp"
#include "kyle/volatility.hpp"

namespace kyle {

// Adaptive Simpson quadrature for smooth integrands.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12);

// Depth time scale D_t = integral over [t, T] of e^{2m(u-t)} du, in closed
// form for a constant growth rate m.
double compute_depth_scale(double growth_rate, double t, double horizon);
// General-rate overload by adaptive quadrature; cross-checks the closed form.
double compute_depth_scale(const std::function<double(double)>& growth_rate,
                           double t, double horizon);

// G_t = eps^{2H-1} sigma_t^2 D_t for the deterministic-growth family.
double depth_deterministic(double sigma_t, double depth_scale, const FractionalParams& fp);

// Solution of the coupled depth ODEs in reversed time tau = T - t:
//   dg_low/dtau  = sigma_low^2  + 2*intensity_to_high*(sqrt(g_low g_high) - g_low)
//   dg_high/dtau = sigma_high^2 + 2*intensity_to_low *(sqrt(g_low g_high) - g_high)
// from g_low(0) = g_high(0) = 0. Values are in table units: the depth itself
// is eps^{2H-1} * g_state(T - t).
struct MarkovOdeTable {
    double horizon = 0.0;
    std::vector<double> tau;  // uniform nodes on [0, horizon]
    std::vector<double> g_low;
    std::vector<double> g_high;
};

// Classical fourth-order Runge-Kutta; throws on fewer than 16 steps or if a
// negative depth value is produced (reported with the offending tau).
MarkovOdeTable solve_markov_odes(double sigma_low, double sigma_high,
                                 double intensity_to_high, double intensity_to_low,
                                 double horizon, std::size_t ode_steps);

// tau,G_L,G_H rows for external inspection.
void write_depth_table(std::ostream& os, const MarkovOdeTable& table);

// Spline view of the ODE table plus cumulative integrals of 1/sqrt(g), which
// make per-segment integrals of the mean-reversion rate cheap and accurate up
// to the tau = 0 square-root singularity.
class MarkovDepthTable {
  public:
    MarkovDepthTable(const TwoStateMarkovVol& model, double horizon, std::size_t ode_steps);

    const TwoStateMarkovVol& model() const { return model_; }
    double horizon() const { return nodes_.horizon; }
    const MarkovOdeTable& nodes() const { return nodes_; }

    double sigma2(Regime r) const;
    // Natural cubic spline through the ODE nodes.
    double g(Regime r, double tau) const;
    // phi_r(tau) = integral over [0, tau] of dr / sqrt(g_r); evaluated from a
    // cumulative Simpson table on a uniform sqrt(tau) grid.
    double phi(Regime r, double tau) const;

  private:
    double spline_eval(Regime r, double tau) const;
    double phi_integrand(Regime r, double q) const;

    TwoStateMarkovVol model_;
    MarkovOdeTable nodes_;
    std::array<std::vector<double>, 2> second_deriv_;
    double q_step_ = 0.0;
    std::array<std::vector<double>, 2> phi_nodes_;
};

// Expected-depth process used by the equilibrium simulation: mean-reversion
// rate kappa_t, its per-step integrals, and the depth G_t.
class DepthCurve {
  public:
    static DepthCurve closed_form(double growth_rate, double horizon,
                                  const FractionalParams& fp);
    static DepthCurve markov(std::shared_ptr<const MarkovDepthTable> table,
                             const FractionalParams& fp);

    bool is_markov() const { return table_ != nullptr; }
    const MarkovDepthTable* table() const { return table_.get(); }
    double horizon() const { return horizon_; }
    const FractionalParams& fractional() const { return frac_; }
    double growth_rate() const { return growth_rate_; }

    // kappa_t = eps^{2H-1} sigma_t^2 / G_t; the regime picks the table branch
    // and is ignored by the closed form. +infinity at t = horizon.
    double kappa(double t, Regime regime) const;
    // Integral of kappa over [a, b] holding the regime fixed: exact log form
    // for the closed-form curve, per-segment Simpson for the table, and
    // +infinity as soon as b reaches the horizon.
    double kappa_integral(double a, double b, Regime regime) const;
    // G_t given the realized sigma (closed form) or the regime (table).
    double depth(double t, double sigma_t, Regime regime) const;

  private:
    DepthCurve() = default;

    std::shared_ptr<const MarkovDepthTable> table_;
    double growth_rate_ = 0.0;
    double horizon_ = 0.0;
    FractionalParams frac_{0.75, 0.01};
};

// Builds the depth curve matching a volatility model: closed form for the
// constant and growth variants, ODE table for the Markov variant.
DepthCurve make_depth_curve(const VolModel& model, double horizon,
                            const FractionalParams& fp, std::size_t ode_steps);

// Containment checks for the depth process: the uniform volatility-bound
// envelope sigma_lo^2 eps^{2H-1}(T-t) <= G_t <= sigma_hi^2 eps^{2H-1}(T-t)
// and the forward-second-moment upper bound
// G_t <= eps^{2H-1} * integral over [t, T] of E[sigma_u^2 | F_t] du.
struct BoundsReport {
    std::size_t points = 0;
    std::size_t envelope_violations = 0;
    std::size_t expectation_violations = 0;
    double worst_rel_slack = 0.0;  // most negative slack over all checks
    bool pass = false;
};

BoundsReport check_bounds(const DepthCurve& curve, const VolModel& model,
                          const TimeGrid& grid);

// Monte Carlo / quadrature verification of the defining fixed point
//   sqrt(G_t) = E[ integral over [t, T] of eps^{2H-1} sigma_s^2 / (2 sqrt(G_s)) ds | F_t ].
// Markov curves are probed over exact regime paths in table units (the
// eps^{H-1/2} factor cancels); deterministic curves reduce to a quadrature
// identity checked with a 1e-6 relative band and zero SE.
struct FixedPointProbe {
    double t = 0.0;
    Regime regime = Regime::low;
    double target = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    bool pass = false;
    bool inconclusive = false;  // SE exceeded half the target
};

std::vector<FixedPointProbe> verify_fixed_point(const DepthCurve& curve,
                                                const VolModel& model,
                                                std::size_t n_paths,
                                                std::uint64_t master_seed);

}  // namespace kyle
