#include "kyle/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kyle {

namespace {

void validate_constant(const ConstantVol& m) {
    if (m.sigma0 <= 0.0) throw std::invalid_argument("volatility: sigma0 must be positive");
}

void validate_growth(const DeterministicGrowthVol& m) {
    if (m.sigma0 <= 0.0) throw std::invalid_argument("volatility: sigma0 must be positive");
    if (m.vol_of_vol < 0.0) throw std::invalid_argument("volatility: vol_of_vol must be nonnegative");
    if (!(m.sigma_min > 0.0) || !(m.sigma_min <= m.sigma_max))
        throw std::invalid_argument("volatility: need 0 < sigma_min <= sigma_max");
    if (m.sigma0 < m.sigma_min || m.sigma0 > m.sigma_max)
        throw std::invalid_argument("volatility: sigma0 outside [sigma_min, sigma_max]");
}

void validate_markov(const TwoStateMarkovVol& m) {
    if (m.sigma_low <= 0.0) throw std::invalid_argument("volatility: sigma_low must be positive");
    if (!(m.sigma_low < m.sigma_high))
        throw std::invalid_argument("volatility: need sigma_low < sigma_high");
    if (m.intensity_to_high < 0.0 || m.intensity_to_low < 0.0)
        throw std::invalid_argument("volatility: intensities must be nonnegative");
}

VolPath simulate_constant(const ConstantVol& m, const TimeGrid& grid) {
    VolPath out;
    out.sigma.assign(grid.n_nodes(), m.sigma0);
    return out;
}

VolPath simulate_growth(const DeterministicGrowthVol& m, const TimeGrid& grid,
                        std::mt19937_64& diffusion) {
    VolPath out;
    out.sigma.resize(grid.n_nodes());
    out.sigma[0] = m.sigma0;
    const double dt = grid.dt();
    const double drift_factor = std::exp(m.growth_rate * dt);
    std::normal_distribution<double> gauss(0.0, std::sqrt(dt));
    for (std::size_t k = 0; k + 1 < grid.n_nodes(); ++k) {
        double next = out.sigma[k] * drift_factor;
        if (m.vol_of_vol > 0.0) next += m.vol_of_vol * out.sigma[k] * gauss(diffusion);
        if (next < m.sigma_min) {
            next = m.sigma_min;
            ++out.clamp_count;
        } else if (next > m.sigma_max) {
            next = m.sigma_max;
            ++out.clamp_count;
        }
        out.sigma[k + 1] = next;
    }
    return out;
}

VolPath simulate_markov(const TwoStateMarkovVol& m, const TimeGrid& grid,
                        std::mt19937_64& jumps) {
    VolPath out;
    const std::size_t n = grid.n_nodes();
    out.sigma.resize(n);
    out.regime.resize(n);

    // Exact event times: exponential holding times with state-dependent rate.
    Regime state = m.start;
    double t = 0.0;
    const double horizon = grid.horizon;
    while (true) {
        const double rate = state == Regime::low ? m.intensity_to_high : m.intensity_to_low;
        if (rate <= 0.0) break;  // absorbing: no further jumps
        std::exponential_distribution<double> holding(rate);
        t += holding(jumps);
        if (t > horizon) break;
        out.jump_times.push_back(t);
        state = state == Regime::low ? Regime::high : Regime::low;
    }

    // Last-value sampling onto the grid: regime at t_k is the state after all
    // jumps at times <= t_k.
    state = m.start;
    std::size_t next_jump = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double tk = grid.t(k);
        while (next_jump < out.jump_times.size() && out.jump_times[next_jump] <= tk) {
            state = state == Regime::low ? Regime::high : Regime::low;
            ++next_jump;
        }
        out.regime[k] = state;
        out.sigma[k] = state == Regime::low ? m.sigma_low : m.sigma_high;
    }
    return out;
}

}  // namespace

void validate_model(const VolModel& model) {
    std::visit([](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantVol>) validate_constant(m);
        else if constexpr (std::is_same_v<T, DeterministicGrowthVol>) validate_growth(m);
        else validate_markov(m);
    }, model);
}

double initial_sigma(const VolModel& model) {
    return std::visit([](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantVol>) return m.sigma0;
        else if constexpr (std::is_same_v<T, DeterministicGrowthVol>) return m.sigma0;
        else return m.start == Regime::low ? m.sigma_low : m.sigma_high;
    }, model);
}

VolPath simulate_vol(const VolModel& model, const TimeGrid& grid,
                     std::mt19937_64& diffusion, std::mt19937_64& jumps) {
    validate_model(model);
    return std::visit([&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantVol>) return simulate_constant(m, grid);
        else if constexpr (std::is_same_v<T, DeterministicGrowthVol>) return simulate_growth(m, grid, diffusion);
        else return simulate_markov(m, grid, jumps);
    }, model);
}

double conditional_mean(const VolModel& model, double sigma_t, double t, double u) {
    if (u < t) throw std::invalid_argument("conditional_mean: need u >= t");
    const auto* growth = std::get_if<DeterministicGrowthVol>(&model);
    if (growth == nullptr)
        throw std::invalid_argument("conditional_mean: only the growth variant has this form");
    return sigma_t * std::exp(growth->growth_rate * (u - t));
}

VolBounds vol_bounds(const VolModel& model, double horizon) {
    return std::visit([horizon](const auto& m) -> VolBounds {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantVol>) {
            return {m.sigma0, m.sigma0, false};
        } else if constexpr (std::is_same_v<T, DeterministicGrowthVol>) {
            if (m.vol_of_vol > 0.0) return {m.sigma_min, m.sigma_max, true};
            const double end = m.sigma0 * std::exp(m.growth_rate * horizon);
            return {std::min(m.sigma0, end), std::max(m.sigma0, end), false};
        } else {
            return {m.sigma_low, m.sigma_high, false};
        }
    }, model);
}

double second_moment_forward(const VolModel& model, double t, double u,
                             double sigma_t, Regime regime_t) {
    if (u < t) throw std::invalid_argument("second_moment_forward: need u >= t");
    return std::visit([&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantVol>) {
            return m.sigma0 * m.sigma0;
        } else if constexpr (std::is_same_v<T, DeterministicGrowthVol>) {
            const double g = 2.0 * m.growth_rate + m.vol_of_vol * m.vol_of_vol;
            return sigma_t * sigma_t * std::exp(g * (u - t));
        } else {
            const double lo2 = m.sigma_low * m.sigma_low;
            const double hi2 = m.sigma_high * m.sigma_high;
            const double q = m.intensity_to_high + m.intensity_to_low;
            const double start_high = regime_t == Regime::high ? 1.0 : 0.0;
            if (q <= 0.0) return start_high > 0.5 ? hi2 : lo2;
            const double pi_high = m.intensity_to_high / q;
            const double p_high = pi_high + (start_high - pi_high) * std::exp(-q * (u - t));
            return lo2 + (hi2 - lo2) * p_high;
        }
    }, model);
}

}  // namespace kyle
