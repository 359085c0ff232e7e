#include "kyle/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kyle {

void StreamingMoments::add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void StreamingMoments::merge(const StreamingMoments& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double n = na + nb;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    n_ += other.n_;
}

double StreamingMoments::variance() const {
    if (n_ < 2) throw std::domain_error("StreamingMoments: variance needs at least two samples");
    return m2_ / static_cast<double>(n_ - 1);
}

double StreamingMoments::std_dev() const { return std::sqrt(variance()); }

double StreamingMoments::std_error() const {
    return std_dev() / std::sqrt(static_cast<double>(n_));
}

MeanEstimate mc_mean(std::span<const double> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("mc_mean: need at least two samples");
    StreamingMoments m;
    for (double x : samples) m.add(x);
    return MeanEstimate{m.mean(), m.std_error(), m.count()};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

KsResult ks_normal(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 100)
        throw std::invalid_argument("ks_normal: need at least 100 samples");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    double stat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = normal_cdf(s[i]);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        stat = std::max(stat, std::max(f - lo, hi - f));
    }
    KsResult r;
    r.statistic = stat;
    r.critical = 1.628 / std::sqrt(static_cast<double>(n));
    r.n = n;
    r.pass = stat <= r.critical;
    return r;
}

DriftResult martingale_probe(std::span<const double> before,
                             std::span<const double> after,
                             bool one_sided_nonnegative) {
    if (before.size() != after.size())
        throw std::invalid_argument("martingale_probe: mismatched sample sizes");
    if (before.size() < 2)
        throw std::invalid_argument("martingale_probe: need at least two samples");
    StreamingMoments m;
    for (std::size_t i = 0; i < before.size(); ++i) m.add(after[i] - before[i]);
    DriftResult r;
    r.mean = m.mean();
    r.se = m.std_error();
    r.z = r.se > 0.0 ? r.mean / r.se : 0.0;
    r.pass = one_sided_nonnegative ? r.z >= -3.0 : std::abs(r.z) <= 3.0;
    r.strictly_positive = r.z > 2.0;
    return r;
}

CorrResult corr_probe(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("corr_probe: mismatched sample sizes");
    const std::size_t n = x.size();
    if (n < 10)
        throw std::invalid_argument("corr_probe: need at least ten samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    CorrResult r;
    if (sxx <= 0.0 || syy <= 0.0)
        throw std::domain_error("corr_probe: degenerate sample (zero variance)");
    r.r = sxy / std::sqrt(sxx * syy);
    r.fisher_z = std::atanh(std::clamp(r.r, -0.999999999, 0.999999999));
    r.band = 3.0 / std::sqrt(static_cast<double>(n - 3));
    r.pass = std::abs(r.fisher_z) <= r.band;
    return r;
}

std::string CheckLine::render() const {
    char buf[256];
    const char* tag = inconclusive ? "INCONCLUSIVE" : (pass ? "PASS" : "FAIL");
    std::snprintf(buf, sizeof(buf), "%-12s %-46s value=%.12g target=%.12g band=%.12g",
                  tag, name.c_str(), value, target, band);
    return std::string(buf);
}

} // namespace kyle
