#pragma once

#include <cstddef>
#include <random>
#include <variant>
#include <vector>

#include "kyle/grid.hpp"

namespace kyle {

// Flat noise-trading volatility.
struct ConstantVol {
    double sigma0 = 1.0;
};

// dsigma = m sigma dt + nu sigma dM with M a Brownian motion independent of
// the order-flow driver. nu = 0 reduces to the exact exponential sigma0 e^{mt}.
// With nu > 0 simulated values are clamped to [sigma_min, sigma_max] so that
// uniform volatility bounds stay machine-checkable; clamps are counted.
struct DeterministicGrowthVol {
    double sigma0 = 1.0;
    double growth_rate = 0.0;  // m
    double vol_of_vol = 0.0;   // nu
    double sigma_min = 1e-6;
    double sigma_max = 1e6;
};

enum class Regime : int { low = 0, high = 1 };

// Two-state continuous-time Markov chain: sigma jumps between sigma_low and
// sigma_high with exponential holding times.
struct TwoStateMarkovVol {
    double sigma_low = 0.5;
    double sigma_high = 2.0;
    double intensity_to_high = 1.0;  // jump rate while in the low state
    double intensity_to_low = 1.0;   // jump rate while in the high state
    Regime start = Regime::low;
};

using VolModel = std::variant<ConstantVol, DeterministicGrowthVol, TwoStateMarkovVol>;

// One volatility realization sampled at the grid nodes.
struct VolPath {
    std::vector<double> sigma;       // n_nodes() values
    std::vector<Regime> regime;      // Markov variant only, else empty
    std::vector<double> jump_times;  // Markov variant only: exact event times in (0, T]
    std::size_t clamp_count = 0;     // growth variant: number of bound hits
};

struct VolBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool clamped = false;  // true when the bounds are enforced by truncation
};

// Throws std::invalid_argument when a variant violates its parameter domain.
void validate_model(const VolModel& model);

double initial_sigma(const VolModel& model);

// Simulate sigma on the grid. `diffusion` drives the growth variant and
// `jumps` drives the Markov event clock; unused engines are left untouched.
// Markov jumps are placed at exact event times, then sampled onto the grid by
// last-value interpolation.
VolPath simulate_vol(const VolModel& model, const TimeGrid& grid,
                     std::mt19937_64& diffusion, std::mt19937_64& jumps);

// E[sigma_u | sigma_t] = sigma_t e^{m (u - t)}; growth variant only.
double conditional_mean(const VolModel& model, double sigma_t, double t, double u);

// Tight pathwise bounds of sigma over [0, horizon]. For the growth variant
// with nu > 0 these are the configured truncation bounds (flagged).
VolBounds vol_bounds(const VolModel& model, double horizon);

// E[sigma_u^2 | state at time t]. Exact for every variant: the growth variant
// uses sigma_t^2 e^{(2m + nu^2)(u - t)} (ignoring clamps), the Markov variant
// the closed-form occupancy of the two-state chain started from regime_t.
double second_moment_forward(const VolModel& model, double t, double u,
                             double sigma_t, Regime regime_t);

}  // namespace kyle
