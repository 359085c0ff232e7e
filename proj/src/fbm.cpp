#include "kyle/fbm.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "kyle/rng.hpp"

namespace kyle {

std::vector<double> sample_brownian(const TimeGrid& grid, std::mt19937_64& engine) {
    std::normal_distribution<double> normal(0.0, std::sqrt(grid.dt()));
    std::vector<double> dw(grid.n_steps);
    for (double& x : dw) x = normal(engine);
    return dw;
}

std::vector<double> kernel_convolve(const TimeGrid& grid, double exponent, double shift,
                                    const std::vector<double>& dw) {
    const std::size_t n = grid.n_steps;
    if (dw.size() != n)
        throw std::invalid_argument("kernel_convolve: increment count does not match grid");
    if (shift < 0.0)
        throw std::invalid_argument("kernel_convolve: negative kernel shift");
    const double dt = grid.dt();
    std::vector<double> weight(n);
    for (std::size_t d = 1; d <= n; ++d)
        weight[d - 1] = std::pow(static_cast<double>(d) * dt + shift, exponent);
    std::vector<double> out(n + 1, 0.0);
    // out[k] = sum_{j<k} weight[k-j-1] * dw[j]; tight dot product per node.
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        const double* wk = weight.data() + (k - 1);
        for (std::size_t j = 0; j < k; ++j) acc += wk[-static_cast<std::ptrdiff_t>(j)] * dw[j];
        out[k] = acc;
    }
    return out;
}

std::vector<double> kernel_psi(const TimeGrid& grid, const FractionalParams& fp,
                               const std::vector<double>& dw) {
    return kernel_convolve(grid, fp.hurst - 1.5, fp.eps, dw);
}

std::vector<double> fbm_semimartingale(const TimeGrid& grid, const FractionalParams& fp,
                                       const std::vector<double>& dw,
                                       const std::vector<double>& psi) {
    const std::size_t n = grid.n_steps;
    if (dw.size() != n || psi.size() != n + 1)
        throw std::invalid_argument("fbm_semimartingale: input sizes do not match grid");
    const double dt = grid.dt();
    const double c_mem = fp.half_weight();
    const double c_bm = fp.eps_pow_h_half();
    std::vector<double> b(n + 1, 0.0);
    double w = 0.0;
    double integral = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        w += dw[k];
        integral += 0.5 * (psi[k] + psi[k + 1]) * dt;
        b[k + 1] = c_mem * integral + c_bm * w;
    }
    return b;
}

std::vector<double> fbm_kernel_direct(const TimeGrid& grid, double hurst, double shift,
                                      const std::vector<double>& dw) {
    return kernel_convolve(grid, hurst - 0.5, shift, dw);
}

double fbm_covariance(double t, double s, double hurst) {
    if (t < 0.0 || s < 0.0)
        throw std::domain_error("fbm_covariance: negative time");
    if (hurst <= 0.0 || hurst > 1.0)
        throw std::domain_error("fbm_covariance: hurst outside (0, 1]");
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
}

FbmSamples exact_fbm(const std::vector<double>& times, double hurst,
                     std::size_t n_samples, std::uint64_t master_seed) {
    const std::size_t n = times.size();
    if (n == 0)
        throw std::invalid_argument("exact_fbm: empty time list");
    if (n > 4096)
        throw std::invalid_argument("exact_fbm: grid larger than 4096 nodes");
    for (double t : times)
        if (t <= 0.0) throw std::domain_error("exact_fbm: times must be positive");

    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cov(i, j) = fbm_covariance(times[i], times[j], hurst);

    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        Eigen::MatrixXd jittered = cov;
        jittered.diagonal().array() += 1e-12;
        llt.compute(jittered);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("exact_fbm: covariance not positive definite after jitter");
    }
    const Eigen::MatrixXd chol = llt.matrixL();

    FbmSamples out;
    out.times = times;
    out.n_samples = n_samples;
    out.data.resize(n_samples * n);
    Eigen::VectorXd z(n);
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto engine = make_engine(master_seed, Stream::gaussian_vector, s);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = normal(engine);
        Eigen::VectorXd x = chol * z;
        for (std::size_t i = 0; i < n; ++i) out.data[s * n + i] = x(static_cast<Eigen::Index>(i));
    }
    return out;
}

} // namespace kyle
