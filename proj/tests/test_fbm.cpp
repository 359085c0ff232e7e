#include <cmath>
#include <vector>

#include "doctest.h"
#include "kyle/fbm.hpp"
#include "kyle/rng.hpp"
#include "kyle/stats.hpp"

using namespace kyle;

TEST_CASE("kernel history single step anchor") {
    TimeGrid grid(1.0, 1);
    std::vector<double> dw{1.0};
    std::vector<double> psi = kernel_psi(grid, FractionalParams(0.75, 1.0), dw);
    REQUIRE(psi.size() == 2);
    CHECK(psi[0] == 0.0);
    CHECK(psi[1] == doctest::Approx(0.59460355750136053).epsilon(1e-14));
}

TEST_CASE("kernel convolution matches the quadratic-cost definition") {
    TimeGrid grid(2.0, 64);
    auto engine = make_engine(11, Stream::brownian, 0);
    std::vector<double> dw = sample_brownian(grid, engine);
    REQUIRE(dw.size() == 64);
    const double exponent = -0.8;
    const double shift = 0.03;
    std::vector<double> fast = kernel_convolve(grid, exponent, shift, dw);
    for (std::size_t k = 0; k <= 64; ++k) {
        double direct = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            direct += std::pow(grid.t(k) - grid.t(j) + shift, exponent) * dw[j];
        CHECK(fast[k] == doctest::Approx(direct).epsilon(1e-12));
    }
    CHECK_THROWS_AS(kernel_convolve(grid, exponent, -0.1, dw), std::invalid_argument);
    std::vector<double> short_dw(10);
    CHECK_THROWS_AS(kernel_convolve(grid, exponent, shift, short_dw),
                    std::invalid_argument);
}

TEST_CASE("hurst one-half collapses to the driving brownian motion") {
    TimeGrid grid(1.0, 256);
    auto engine = make_engine(12, Stream::brownian, 1);
    std::vector<double> dw = sample_brownian(grid, engine);
    std::vector<double> w(257, 0.0);
    for (std::size_t k = 0; k < 256; ++k) w[k + 1] = w[k] + dw[k];

    std::vector<double> limit = fbm_kernel_direct(grid, 0.5, 0.0, dw);
    std::vector<double> psi = kernel_psi(grid, FractionalParams(0.5, 0.01), dw);
    std::vector<double> semi = fbm_semimartingale(grid, FractionalParams(0.5, 0.01), dw, psi);
    for (std::size_t k = 0; k <= 256; ++k) {
        CHECK(limit[k] == doctest::Approx(w[k]).epsilon(1e-13));
        CHECK(semi[k] == doctest::Approx(w[k]).epsilon(1e-13));
    }
}

TEST_CASE("semimartingale form tracks the direct kernel sum") {
    FractionalParams fp(0.75, 0.01);
    TimeGrid grid(1.0, 2048);
    double worst = 0.0;
    for (std::uint64_t path = 0; path < 2; ++path) {
        auto engine = make_engine(13, Stream::brownian, path);
        std::vector<double> dw = sample_brownian(grid, engine);
        std::vector<double> psi = kernel_psi(grid, fp, dw);
        std::vector<double> semi = fbm_semimartingale(grid, fp, dw, psi);
        std::vector<double> direct = fbm_kernel_direct(grid, fp.hurst, fp.eps, dw);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k <= 2048; ++k) {
            num = std::max(num, std::abs(semi[k] - direct[k]));
            den = std::max(den, std::abs(direct[k]));
        }
        worst = std::max(worst, num / den);
    }
    CHECK(worst < 1e-2);
}

TEST_CASE("smoothing width ladder converges to the limit kernel") {
    TimeGrid grid(1.0, 1024);
    const double hurst = 0.6;
    const std::size_t samples = 500;
    std::vector<double> limit(1024), w1(1024), w2(1024), w3(1024);
    for (std::size_t j = 0; j < 1024; ++j) {
        const double lag = 1.0 - grid.t(j);
        limit[j] = std::pow(lag, hurst - 0.5);
        w1[j] = std::pow(lag + 0.1, hurst - 0.5);
        w2[j] = std::pow(lag + 0.01, hurst - 0.5);
        w3[j] = std::pow(lag + 0.001, hurst - 0.5);
    }
    double mse1 = 0.0, mse2 = 0.0, mse3 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        auto engine = make_engine(14, Stream::brownian, i);
        std::vector<double> dw = sample_brownian(grid, engine);
        double b0 = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0;
        for (std::size_t j = 0; j < 1024; ++j) {
            b0 += limit[j] * dw[j];
            b1 += w1[j] * dw[j];
            b2 += w2[j] * dw[j];
            b3 += w3[j] * dw[j];
        }
        mse1 += (b1 - b0) * (b1 - b0);
        mse2 += (b2 - b0) * (b2 - b0);
        mse3 += (b3 - b0) * (b3 - b0);
    }
    CHECK(mse1 > mse2);
    CHECK(mse2 > mse3);
}

TEST_CASE("covariance closed form") {
    CHECK(fbm_covariance(2.0, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(2.0, 1.0, 0.75) ==
          doctest::Approx(1.414213562373095).epsilon(1e-14));
    CHECK(fbm_covariance(0.5, 0.25, 0.75) ==
          doctest::Approx(0.17677669529663688).epsilon(1e-14));
    CHECK(fbm_covariance(1.0, 1.0, 0.9) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(fbm_covariance(-1.0, 1.0, 0.75), std::domain_error);
    CHECK_THROWS_AS(fbm_covariance(1.0, 1.0, 1.5), std::domain_error);
}

TEST_CASE("exact sampler matches the covariance and is deterministic") {
    std::vector<double> times = {0.25, 0.5, 0.75, 1.0};
    const std::size_t n = 20000;
    FbmSamples s = exact_fbm(times, 0.75, n, 99);

    std::vector<double> sq(n), cross(n);
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = s.at(i, 3) * s.at(i, 3);
        cross[i] = s.at(i, 1) * s.at(i, 3);
    }
    MeanEstimate var_t1 = mc_mean(sq);
    CHECK(std::abs(var_t1.mean - 1.0) < 3.0 * var_t1.se);
    MeanEstimate cov_half = mc_mean(cross);
    CHECK(std::abs(cov_half.mean - fbm_covariance(0.5, 1.0, 0.75)) < 3.0 * cov_half.se);

    FbmSamples again = exact_fbm(times, 0.75, 4, 99);
    FbmSamples other = exact_fbm(times, 0.75, 4, 100);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(again.at(i, 2) == s.at(i, 2));
        CHECK(other.at(i, 2) != s.at(i, 2));
    }

    CHECK_THROWS_AS(exact_fbm({}, 0.75, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(exact_fbm({0.0, 1.0}, 0.75, 4, 1), std::domain_error);
}

TEST_CASE("brownian sampler has the grid variance") {
    TimeGrid grid(1.0, 8192);
    auto engine = make_engine(15, Stream::brownian, 0);
    std::vector<double> dw = sample_brownian(grid, engine);
    StreamingMoments m;
    for (double x : dw) m.add(x);
    CHECK(m.count() == 8192);
    CHECK(std::abs(m.mean()) < 4.0 * std::sqrt(grid.dt() / 8192.0));
    CHECK(m.variance() == doctest::Approx(grid.dt()).epsilon(0.05));
}
