#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kyle/grid.hpp"

namespace kyle {

// Brownian increments plus the derived kernel quantities on one grid.
struct NoisePath {
    std::vector<double> dw;  // n_steps increments
    std::vector<double> w;   // n_steps+1 running sum, w[0] = 0
    std::vector<double> psi; // n_steps+1 kernel-weighted history, psi[0] = 0
    std::vector<double> b;   // n_steps+1 smoothed fractional path, b[0] = 0
};

// N(0, dt) increments of the driving Brownian motion.
std::vector<double> sample_brownian(const TimeGrid& grid, std::mt19937_64& engine);

// Convolution of increments with the power kernel (lag + shift)^exponent,
// left-point in the increments: out[k] = sum_{j<k} (t_k - t_j + shift)^e dW_j.
std::vector<double> kernel_convolve(const TimeGrid& grid, double exponent, double shift,
                                    const std::vector<double>& dw);

// Kernel-weighted shock history psi driving the predictable part of the
// smoothed noise; exponent H - 3/2, shift eps.
std::vector<double> kernel_psi(const TimeGrid& grid, const FractionalParams& fp,
                               const std::vector<double>& dw);

// Smoothed fractional path via its semimartingale form:
// (H - 1/2) * cumulative trapezoid of psi + eps^(H-1/2) * W.
std::vector<double> fbm_semimartingale(const TimeGrid& grid, const FractionalParams& fp,
                                       const std::vector<double>& dw,
                                       const std::vector<double>& psi);

// Direct kernel evaluation of the smoothed path (shift = eps) or, with
// shift = 0, of the limiting fractional path on the same increments.
std::vector<double> fbm_kernel_direct(const TimeGrid& grid, double hurst, double shift,
                                      const std::vector<double>& dw);

// Fractional Brownian covariance (|t|^2H + |s|^2H - |t-s|^2H) / 2.
double fbm_covariance(double t, double s, double hurst);

// Exact joint samples of fractional Brownian motion at the given times via
// dense covariance factorization (Cholesky with one jitter retry). Rows are
// independent samples, columns follow `times`. Grid size capped at 4096.
struct FbmSamples {
    std::vector<double> times;
    std::size_t n_samples = 0;
    std::vector<double> data; // n_samples * times.size(), row-major

    double at(std::size_t sample, std::size_t idx) const {
        return data[sample * times.size() + idx];
    }
};

FbmSamples exact_fbm(const std::vector<double>& times, double hurst,
                     std::size_t n_samples, std::uint64_t master_seed);

} // namespace kyle
