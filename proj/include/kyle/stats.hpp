#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kyle {

// One-pass mean/variance accumulator (Welford update) with an exact merge,
// so ensembles reduced in chunks agree with a single sequential pass.
class StreamingMoments {
  public:
    void add(double x);
    void merge(const StreamingMoments& other);

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const; // unbiased, needs count >= 2
    double std_dev() const;
    double std_error() const;

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

MeanEstimate mc_mean(std::span<const double> samples);

double normal_cdf(double x);

// One-sample Kolmogorov-Smirnov test against the standard normal at the 1%
// level (asymptotic critical value 1.628/sqrt(n)). Requires n >= 100.
struct KsResult {
    double statistic = 0.0;
    double critical = 0.0;
    std::size_t n = 0;
    bool pass = false;
};

KsResult ks_normal(std::span<const double> samples);

// Drift of paired increments: two-sided zero test (martingale) or one-sided
// nonnegativity test (submartingale), both on a 3-SE band. strictly_positive
// reports whether the drift clears +2 SE.
struct DriftResult {
    double mean = 0.0;
    double se = 0.0;
    double z = 0.0;
    bool pass = false;
    bool strictly_positive = false;
};

DriftResult martingale_probe(std::span<const double> before,
                             std::span<const double> after,
                             bool one_sided_nonnegative = false);

// Pearson correlation with a Fisher-z zero test (band 3/sqrt(n-3)).
struct CorrResult {
    double r = 0.0;
    double fisher_z = 0.0;
    double band = 0.0;
    bool pass = false;
};

CorrResult corr_probe(std::span<const double> x, std::span<const double> y);

// Uniform record for statistical and deterministic checks, rendered into
// experiment summaries.
struct CheckLine {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double band = 0.0;
    bool pass = false;
    bool inconclusive = false;

    std::string render() const;
};

} // namespace kyle
