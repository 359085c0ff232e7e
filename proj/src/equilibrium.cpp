#include "kyle/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kyle/fbm.hpp"
#include "kyle/rng.hpp"

namespace kyle {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_setup(const MarketParams& params, const VolModel& vol,
                 const DepthCurve& depth, const TimeGrid& grid) {
    if (!(params.prior_variance > 0.0))
        throw std::invalid_argument("simulate_path: prior variance must be positive");
    if (std::abs(params.horizon - grid.horizon) > 1e-12 * (1.0 + params.horizon))
        throw std::invalid_argument("simulate_path: params/grid horizon mismatch");
    if (std::abs(depth.horizon() - grid.horizon) > 1e-12 * (1.0 + grid.horizon))
        throw std::invalid_argument("simulate_path: depth/grid horizon mismatch");
    if (depth.fractional().hurst != params.frac.hurst ||
        depth.fractional().eps != params.frac.eps)
        throw std::invalid_argument("simulate_path: depth/params fractional mismatch");
    if (std::holds_alternative<TwoStateMarkovVol>(vol) != depth.is_markov())
        throw std::invalid_argument("simulate_path: depth/volatility mismatch");
    if (grid.n_steps < 16) throw std::invalid_argument("simulate_path: need at least 16 steps");
}

}  // namespace

SimPath simulate_path(const MarketParams& params, const VolModel& vol,
                      const DepthCurve& depth, const TimeGrid& grid,
                      const SimOptions& opts, std::uint64_t master_seed,
                      std::uint64_t path_index) {
    check_setup(params, vol, depth, grid);
    const std::size_t n = grid.n_steps;
    const double dt = grid.dt();
    const double horizon = grid.horizon;
    const FractionalParams& fp = params.frac;
    const double half_weight = fp.half_weight();
    const double noise_weight = fp.eps_pow_h_half();

    auto brownian = make_engine(master_seed, Stream::brownian, path_index);
    auto vol_diffusion = make_engine(master_seed, Stream::vol_diffusion, path_index);
    auto vol_jumps = make_engine(master_seed, Stream::vol_jumps, path_index);

    SimPath out;
    {
        VolPath vp = simulate_vol(vol, grid, vol_diffusion, vol_jumps);
        out.sigma = std::move(vp.sigma);
        out.regime = std::move(vp.regime);
        out.clamp_count = vp.clamp_count;
    }
    if (opts.draw_value) {
        auto value_engine = make_engine(master_seed, Stream::value_draw, path_index);
        std::normal_distribution<double> prior(params.prior_mean,
                                               std::sqrt(params.prior_variance));
        out.value = prior(value_engine);
    } else {
        out.value = params.prior_mean + opts.value_offset;
    }

    const std::vector<double> dw = sample_brownian(grid, brownian);
    if (opts.with_strategy) out.memory = kernel_psi(grid, fp, dw);

    auto regime_at = [&out](std::size_t k) {
        return out.regime.empty() ? Regime::low : out.regime[k];
    };

    out.depth_g.resize(n + 1);
    out.variance.resize(n + 1);
    out.clock.resize(n + 1);
    out.impact.assign(n + 1, kNan);
    out.reversion.assign(n + 1, kNan);
    out.deviation.assign(n + 1, kNan);
    out.price.resize(n + 1);
    out.flow.resize(n + 1);
    if (opts.with_strategy) out.rate.assign(n + 1, kNan);

    const double floor = 1e-14 * params.prior_variance;
    double integral = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = k == n ? horizon : grid.t(k);
        out.depth_g[k] = depth.depth(t, out.sigma[k], regime_at(k));
        out.variance[k] = params.prior_variance * std::exp(-integral);
        out.clock[k] = horizon * (-std::expm1(-integral));
        if (k < n) {
            if (out.variance[k] < floor) out.early_stop = true;
            out.impact[k] = std::sqrt(out.variance[k] / out.depth_g[k]);
            out.reversion[k] = depth.kappa(t, regime_at(k));
            const double next = k + 1 == n ? horizon : grid.t(k + 1);
            integral += depth.kappa_integral(t, next, regime_at(k));
        }
    }

    out.price[0] = params.prior_mean;
    out.flow[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double gap = out.value - out.price[k];
        const double beta = out.reversion[k] / out.impact[k];
        const double shock = noise_weight * out.sigma[k] * dw[k];
        double dy;
        if (opts.with_strategy) {
            out.rate[k] = opts.beta_scale * beta * gap - half_weight * out.memory[k];
            dy = out.rate[k] * dt + half_weight * out.memory[k] * dt + shock;
        } else {
            dy = opts.beta_scale * beta * gap * dt + shock;
        }
        out.flow[k + 1] = out.flow[k] + dy;
        out.price[k + 1] = out.price[k] + out.impact[k] * dy;
        if (out.variance[k] >= floor)
            out.deviation[k] = (out.price[k] - out.value) / std::sqrt(out.variance[k]);
    }
    return out;
}

double price_impact(double variance, double depth_g) {
    if (!(depth_g > 0.0)) throw std::domain_error("price_impact: depth must be positive");
    if (variance < 0.0) throw std::domain_error("price_impact: negative variance");
    return std::sqrt(variance / depth_g);
}

double mean_reversion(double sigma, double depth_g, const FractionalParams& fp) {
    if (!(depth_g > 0.0)) throw std::domain_error("mean_reversion: depth must be positive");
    return fp.eps_pow_2h1() * sigma * sigma / depth_g;
}

double strategy(double value, double price, double impact, double reversion,
                double memory, double hurst) {
    if (!(impact > 0.0)) throw std::domain_error("strategy: impact must be positive");
    return reversion / impact * (value - price) - (hurst - 0.5) * memory;
}

double impact_deterministic(double t, double growth_rate, double sigma_t,
                            double sigma_v, const FractionalParams& fp) {
    return std::exp(growth_rate * t) * sigma_v / (fp.eps_pow_h_half() * sigma_t);
}

double expected_trading_rate(const MarketParams& params, double growth_rate,
                             double sigma0, double value_gap, double t) {
    const double d0 = compute_depth_scale(growth_rate, 0.0, params.horizon);
    const double sigma_v = std::sqrt(params.prior_variance / d0);
    return params.frac.eps_pow_h_half() * std::exp(2.0 * growth_rate * t) * sigma0 *
           value_gap / (sigma_v * d0);
}

MeanEstimate estimate_A(const MarketParams& params, const VolModel& vol,
                        const DepthCurve& depth, const TimeGrid& grid,
                        double value_offset, std::size_t n_paths,
                        std::uint64_t master_seed) {
    if (n_paths < 2) throw std::invalid_argument("estimate_A: need at least 2 paths");
    SimOptions opts;
    opts.with_strategy = true;
    opts.draw_value = false;
    opts.value_offset = value_offset;
    const double dt = grid.dt();
    std::vector<double> samples(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const SimPath path = simulate_path(params, vol, depth, grid, opts, master_seed, i);
        double acc = 0.0;
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            const double f0 = path.memory[k] * (path.value - path.price[k]);
            const double f1 = path.memory[k + 1] * (path.value - path.price[k + 1]);
            acc += 0.5 * dt * (f0 + f1);
        }
        samples[i] = acc;
    }
    return mc_mean(samples);
}

std::vector<double> value_function(const SimPath& path, const TimeGrid& grid,
                                   double hurst, double a_estimate) {
    if (path.memory.empty())
        throw std::invalid_argument("value_function: path lacks the kernel memory");
    const std::size_t n = grid.n_steps;
    const double dt = grid.dt();
    const double hw = hurst - 0.5;
    std::vector<double> j(n + 1, kNan);
    double running = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0) {
            const double f0 = path.memory[k - 1] * (path.value - path.price[k - 1]);
            const double f1 = path.memory[k] * (path.value - path.price[k]);
            running += 0.5 * dt * (f0 + f1);
        }
        if (k < n) {
            const double gap = path.value - path.price[k];
            j[k] = (gap * gap + path.variance[k]) / (2.0 * path.impact[k]) +
                   hw * (running - a_estimate);
        }
    }
    return j;
}

PathAccounts path_accounts(const SimPath& path, const TimeGrid& grid,
                           const FractionalParams& fp) {
    if (path.rate.empty() || path.memory.empty())
        throw std::invalid_argument("path_accounts: path lacks the strategy arrays");
    const double dt = grid.dt();
    const double eps_scale = fp.eps_pow_2h1();
    PathAccounts acc;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double gap = path.value - path.price[k];
        acc.profit += gap * path.rate[k] * dt;
        acc.cost += eps_scale * path.impact[k] * path.sigma[k] * path.sigma[k] * dt;
        acc.correction += path.memory[k] * gap * dt;
    }
    return acc;
}

DecompositionReport profit_cost_decomposition(std::span<const PathAccounts> accounts,
                                              double hurst) {
    const double hw = hurst - 0.5;
    std::vector<double> profit(accounts.size());
    std::vector<double> cost(accounts.size());
    std::vector<double> correction(accounts.size());
    std::vector<double> gap(accounts.size());
    for (std::size_t i = 0; i < accounts.size(); ++i) {
        profit[i] = accounts[i].profit;
        cost[i] = accounts[i].cost;
        correction[i] = accounts[i].correction;
        gap[i] = accounts[i].profit - accounts[i].cost + hw * accounts[i].correction;
    }
    DecompositionReport report;
    report.profit = mc_mean(profit);
    report.cost = mc_mean(cost);
    report.correction = mc_mean(correction);
    report.gap = mc_mean(gap);
    report.pass = std::abs(report.gap.mean) <= 3.0 * report.gap.se;
    return report;
}

double time_change_gap(const SimPath& path, double prior_variance, double horizon) {
    double worst = 0.0;
    for (std::size_t k = 0; k < path.variance.size(); ++k) {
        const double implied = prior_variance / horizon * (horizon - path.clock[k]);
        const double denom = path.variance[k] > 0.0 ? path.variance[k] : prior_variance;
        worst = std::max(worst, std::abs(path.variance[k] - implied) / denom);
    }
    return worst;
}

}  // namespace kyle
