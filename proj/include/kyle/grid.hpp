#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace kyle {

// Uniform time grid on [0, horizon] with n_steps intervals.
struct TimeGrid {
    double horizon = 1.0;
    std::size_t n_steps = 0;

    TimeGrid(double horizon_, std::size_t n_steps_)
        : horizon(horizon_), n_steps(n_steps_) {
        if (horizon <= 0.0)
            throw std::invalid_argument("TimeGrid: horizon must be positive");
        if (n_steps == 0)
            throw std::invalid_argument("TimeGrid: need at least one step");
    }

    double dt() const { return horizon / static_cast<double>(n_steps); }
    double t(std::size_t k) const { return dt() * static_cast<double>(k); }
    std::size_t n_nodes() const { return n_steps + 1; }
};

// Hurst exponent and the smoothing shift of the mollified kernel.
struct FractionalParams {
    double hurst = 0.75;
    double eps = 0.01;

    FractionalParams(double hurst_, double eps_) : hurst(hurst_), eps(eps_) {
        if (hurst < 0.5 || hurst > 1.0)
            throw std::invalid_argument("FractionalParams: hurst must lie in [1/2, 1]");
        if (eps <= 0.0)
            throw std::invalid_argument("FractionalParams: eps must be positive");
    }

    // eps^(2H-1), the factor scaling instantaneous order-flow variance.
    double eps_pow_2h1() const { return std::pow(eps, 2.0 * hurst - 1.0); }
    // eps^(H-1/2), the weight of the Brownian part of the smoothed noise.
    double eps_pow_h_half() const { return std::pow(eps, hurst - 0.5); }
    // H - 1/2, the weight of the kernel-memory drift part.
    double half_weight() const { return hurst - 0.5; }
};

} // namespace kyle
