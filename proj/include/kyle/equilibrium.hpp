#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kyle/depth.hpp"
#include "kyle/grid.hpp"
#include "kyle/stats.hpp"
#include "kyle/volatility.hpp"

namespace kyle {

// Primitive constants of one economy; the liquidation value itself is chosen
// per path (drawn from the prior or pinned by an offset).
struct MarketParams {
    double prior_mean = 0.0;       // P0
    double prior_variance = 0.04;  // Sigma0
    double horizon = 1.0;          // T
    FractionalParams frac{0.75, 0.01};
};

struct SimOptions {
    bool with_strategy = true;  // simulate the trading rate and kernel memory
    bool draw_value = true;     // v ~ N(P0, Sigma0); else v = P0 + value_offset
    double value_offset = 0.0;
    double beta_scale = 1.0;    // scaling of the feedback component of the rate
};

// One equilibrium realization on the grid. The mean-reversion-dependent
// entries (impact, reversion, rate, deviation) are NaN at the terminal node,
// where the posterior variance has been driven to zero.
struct SimPath {
    double value = 0.0;             // liquidation value v of this path
    std::vector<double> sigma;      // noise-trading volatility
    std::vector<Regime> regime;     // Markov variant only, else empty
    std::vector<double> depth_g;    // expected-depth process G_t
    std::vector<double> variance;   // posterior variance Sigma_t
    std::vector<double> clock;      // directing process tau_t
    std::vector<double> impact;     // price impact lambda_t
    std::vector<double> reversion;  // mean-reversion rate kappa_t
    std::vector<double> price;      // market price P_t
    std::vector<double> flow;       // cumulative order flow Y_t
    std::vector<double> memory;     // kernel process psi_t (with_strategy only)
    std::vector<double> rate;       // trading rate theta_t (with_strategy only)
    std::vector<double> deviation;  // h_t = (P_t - v)/sqrt(Sigma_t)
    std::size_t clamp_count = 0;    // volatility bound hits along the path
    bool early_stop = false;        // variance fell below 1e-14 * Sigma0
};

// Simulates one path: exact-exponential posterior-variance update driven by
// per-step integrals of the mean-reversion rate, price update dP = lambda dY,
// and the order flow dY = theta dt + noise with the kernel-memory drift and
// the Brownian part eps^{H-1/2} sigma dW. The same Brownian driver serves the
// price, the flow, and the kernel process.
SimPath simulate_path(const MarketParams& params, const VolModel& vol,
                      const DepthCurve& depth, const TimeGrid& grid,
                      const SimOptions& opts, std::uint64_t master_seed,
                      std::uint64_t path_index);

// lambda = sqrt(Sigma / G); domain error when G <= 0 or Sigma < 0.
double price_impact(double variance, double depth_g);

// kappa = eps^{2H-1} sigma^2 / G; domain error when G <= 0.
double mean_reversion(double sigma, double depth_g, const FractionalParams& fp);

// theta = (kappa/lambda)(v - P) - (H - 1/2) psi; domain error when lambda <= 0.
double strategy(double value, double price, double impact, double reversion,
                double memory, double hurst);

// lambda_t = e^{mt} sigma_v / (eps^{H-1/2} sigma_t), sigma_v^2 = Sigma0 / D_0;
// the closed impact form of the deterministic-growth family.
double impact_deterministic(double t, double growth_rate, double sigma_t,
                            double sigma_v, const FractionalParams& fp);

// E[theta_t | v, F_0] = eps^{H-1/2} e^{2mt} sigma0 (v - P0) / (sigma_v D_0)
// for the deterministic-growth family with value gap v - P0.
double expected_trading_rate(const MarketParams& params, double growth_rate,
                             double sigma0, double value_gap, double t);

// A = E[ integral over [0,T] of psi (v - P) dt | F_0, v ], by trapezoid over
// independent strategy paths with the value pinned at P0 + value_offset.
MeanEstimate estimate_A(const MarketParams& params, const VolModel& vol,
                        const DepthCurve& depth, const TimeGrid& grid,
                        double value_offset, std::size_t n_paths,
                        std::uint64_t master_seed);

// Value process J_k = ((v - P_k)^2 + Sigma_k) / (2 lambda_k)
//   + (H-1/2) * (running trapezoid of psi (v - P) - a_estimate); terminal NaN.
std::vector<double> value_function(const SimPath& path, const TimeGrid& grid,
                                   double hurst, double a_estimate);

// Left-point path integrals of the insider accounts.
struct PathAccounts {
    double profit = 0.0;      // sum (v - P) theta dt
    double cost = 0.0;        // sum eps^{2H-1} lambda sigma^2 dt
    double correction = 0.0;  // sum psi (v - P) dt
};

PathAccounts path_accounts(const SimPath& path, const TimeGrid& grid,
                           const FractionalParams& fp);

// Ensemble identity: profit = cost - (H-1/2) * correction, paired per path.
struct DecompositionReport {
    MeanEstimate profit;
    MeanEstimate cost;
    MeanEstimate correction;
    MeanEstimate gap;  // profit - cost + (H-1/2) correction
    bool pass = false;
};

DecompositionReport profit_cost_decomposition(std::span<const PathAccounts> accounts,
                                              double hurst);

// Largest relative gap of Sigma_k against (Sigma0/T)(T - tau_k) on the path.
double time_change_gap(const SimPath& path, double prior_variance, double horizon);

}  // namespace kyle
