// Acceptance harness: one line per criterion, exit 0 only if all pass.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kyle/depth.hpp"
#include "kyle/ensemble.hpp"
#include "kyle/equilibrium.hpp"
#include "kyle/fbm.hpp"
#include "kyle/grid.hpp"
#include "kyle/rng.hpp"
#include "kyle/stats.hpp"
#include "kyle/volatility.hpp"

using namespace kyle;

namespace {

int g_failures = 0;

std::string g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void report(int idx, const std::string& slug, bool pass, const std::string& detail) {
    if (!pass) ++g_failures;
    std::printf("[%s] %02d %-24s :: %s\n", pass ? "PASS" : "FAIL", idx, slug.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

void run_criterion(int idx, const std::string& slug,
                   const std::function<std::pair<bool, std::string>()>& body,
                   double budget_secs = 0.0) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [ok, text] = body();
        pass = ok;
        detail = std::move(text);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::string stamp = " [" + g(secs) + "s";
    if (budget_secs > 0.0) {
        if (secs > budget_secs) pass = false;
        stamp += ", budget " + g(budget_secs) + "s";
    }
    report(idx, slug, pass, detail + stamp + "]");
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t late_node(std::size_t n_steps) {
    const auto k = static_cast<std::size_t>(std::llround(0.99 * double(n_steps)));
    return std::min(std::max<std::size_t>(k, 1), n_steps - 1);
}

MarketParams base_market(double hurst, double eps) {
    MarketParams mp;
    mp.prior_mean = 0.0;
    mp.prior_variance = 0.04;
    mp.horizon = 1.0;
    mp.frac = FractionalParams(hurst, eps);
    return mp;
}

DeterministicGrowthVol unit_growth() {
    DeterministicGrowthVol g;
    g.sigma0 = 1.0;
    g.growth_rate = 1.0;
    return g;
}

struct QuarterProbes {
    std::vector<double> inv_a0, inv_a1, inv_b0, inv_b1;
    std::vector<double> lam_a0, lam_a1, lam_b0, lam_b1;
    std::vector<double> dinv_a, dinv_b, dy_a, dy_b;

    explicit QuarterProbes(std::size_t n) {
        for (auto* v : {&inv_a0, &inv_a1, &inv_b0, &inv_b1, &lam_a0, &lam_a1,
                        &lam_b0, &lam_b1, &dinv_a, &dinv_b, &dy_a, &dy_b})
            v->assign(n, 0.0);
    }

    void record(std::size_t i, const SimPath& p, std::size_t n) {
        const std::size_t k0 = 0, k1 = n / 4, k2 = n / 2, k3 = 3 * n / 4;
        lam_a0[i] = p.impact[k0];
        lam_a1[i] = p.impact[k2];
        lam_b0[i] = p.impact[k1];
        lam_b1[i] = p.impact[k3];
        inv_a0[i] = 1.0 / p.impact[k0];
        inv_a1[i] = 1.0 / p.impact[k2];
        inv_b0[i] = 1.0 / p.impact[k1];
        inv_b1[i] = 1.0 / p.impact[k3];
        dinv_a[i] = inv_a1[i] - inv_a0[i];
        dinv_b[i] = inv_b1[i] - inv_b0[i];
        dy_a[i] = p.flow[k2] - p.flow[k0];
        dy_b[i] = p.flow[k3] - p.flow[k1];
    }
};

// 01: flat volatility at H = 1/2 collapses to the constant-impact solution.
std::pair<bool, std::string> criterion_classical() {
    MarketParams mp = base_market(0.5, 1.0);
    VolModel vol = ConstantVol{1.0};
    DepthCurve curve = make_depth_curve(vol, mp.horizon, mp.frac, 64);
    const std::size_t n = 512, paths = 50;
    TimeGrid grid(mp.horizon, n);
    SimOptions opts;
    double worst_impact = 0.0, worst_pvol = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
        SimPath p = simulate_path(mp, vol, curve, grid, opts, 7001, i);
        for (std::size_t k = 0; k < n; ++k) {
            worst_impact = std::max(worst_impact, std::abs(p.impact[k] - 0.2) / 0.2);
            worst_pvol =
                std::max(worst_pvol, std::abs(p.impact[k] * p.sigma[k] - 0.2) / 0.2);
        }
    }
    const bool ok = worst_impact <= 1e-12 && worst_pvol <= 1e-12;
    return {ok, "max rel dev: impact=" + g(worst_impact) +
                    " price-vol=" + g(worst_pvol) + " (tol 1e-12, " +
                    std::to_string(paths) + "x" + std::to_string(n) + ")"};
}

// 02: smoothed-kernel terminal MSE falls with the width; exact joint samples
// reproduce the closed-form covariance.
std::pair<bool, std::string> criterion_fbm() {
    const double T = 1.0;
    const std::size_t n = 4096, samples = 2000;
    const std::array<double, 3> widths = {0.1, 0.01, 0.001};
    TimeGrid grid(T, n);
    bool ladders_ok = true;
    std::string ladder_txt;
    for (double hurst : {0.6, 0.9}) {
        std::vector<double> limit(n);
        std::array<std::vector<double>, 3> weights;
        for (std::size_t j = 0; j < n; ++j) {
            const double lag = T - grid.t(j);
            limit[j] = std::pow(lag, hurst - 0.5);
            for (std::size_t e = 0; e < 3; ++e)
                weights[e].push_back(std::pow(lag + widths[e], hurst - 0.5));
        }
        std::vector<std::array<double, 3>> sq(samples);
        parallel_for(samples, [&](std::size_t i) {
            auto engine = make_engine(7002, Stream::brownian,
                                      i + (hurst > 0.7 ? samples : 0));
            std::vector<double> dw = sample_brownian(grid, engine);
            double b0 = 0.0;
            std::array<double, 3> be{0.0, 0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                b0 += limit[j] * dw[j];
                for (std::size_t e = 0; e < 3; ++e) be[e] += weights[e][j] * dw[j];
            }
            for (std::size_t e = 0; e < 3; ++e) {
                const double d = be[e] - b0;
                sq[i][e] = d * d;
            }
        });
        std::array<double, 3> mse{0.0, 0.0, 0.0};
        for (const auto& s : sq)
            for (std::size_t e = 0; e < 3; ++e) mse[e] += s[e] / double(samples);
        ladders_ok = ladders_ok && mse[0] > mse[1] && mse[1] > mse[2];
        ladder_txt += " H=" + g(hurst) + ":" + g(mse[0]) + ">" + g(mse[1]) + ">" +
                      g(mse[2]);
    }

    std::vector<double> times;
    for (std::size_t k = 1; k <= 16; ++k) times.push_back(T * double(k) / 16.0);
    FbmSamples fbm = exact_fbm(times, 0.75, 10000, 7003);
    const std::vector<std::pair<std::size_t, std::size_t>> pairs = {
        {0, 0}, {3, 3}, {7, 7}, {11, 11}, {15, 15},
        {0, 7}, {3, 11}, {7, 15}, {0, 15}, {5, 10}};
    std::vector<double> prod(fbm.n_samples);
    std::size_t cov_ok = 0;
    double worst_z = 0.0;
    for (const auto& [a, b] : pairs) {
        for (std::size_t i = 0; i < fbm.n_samples; ++i)
            prod[i] = fbm.at(i, a) * fbm.at(i, b);
        MeanEstimate est = mc_mean(prod);
        const double target = fbm_covariance(times[a], times[b], 0.75);
        if (std::abs(est.mean - target) <= 3.0 * est.se) ++cov_ok;
        worst_z = std::max(worst_z, std::abs(est.mean - target) / est.se);
    }
    const bool ok = ladders_ok && cov_ok == pairs.size();
    return {ok, "mse" + ladder_txt + "; cov pairs " + std::to_string(cov_ok) +
                    "/10 in 3 SE (worst z=" + g(worst_z) + ")"};
}

// 03: drift-plus-Brownian form vs direct kernel sum on shared increments.
std::pair<bool, std::string> criterion_identity() {
    const FractionalParams fp(0.75, 0.01);
    const std::vector<std::pair<std::size_t, double>> cases = {{4096, 1e-2},
                                                               {16384, 1e-3}};
    bool ok = true;
    std::string txt;
    for (const auto& [n, band] : cases) {
        TimeGrid grid(1.0, n);
        double worst = 0.0;
        for (std::uint64_t path = 0; path < 2; ++path) {
            auto engine = make_engine(7004, Stream::brownian, path);
            std::vector<double> dw = sample_brownian(grid, engine);
            std::vector<double> psi = kernel_psi(grid, fp, dw);
            std::vector<double> semi = fbm_semimartingale(grid, fp, dw, psi);
            std::vector<double> direct = fbm_kernel_direct(grid, fp.hurst, fp.eps, dw);
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k <= n; ++k) {
                num = std::max(num, std::abs(semi[k] - direct[k]));
                den = std::max(den, std::abs(direct[k]));
            }
            worst = std::max(worst, num / den);
        }
        ok = ok && worst <= band;
        if (!txt.empty()) txt += ", ";
        txt += "N=" + std::to_string(n) + ": " + g(worst) + " (tol " + g(band) + ")";
    }
    return {ok, txt};
}

// 04: regime-switching run bridges the price to the value; standardized
// deviation stays normal late on the finest grid.
std::pair<bool, std::string> criterion_bridge() {
    MarketParams mp = base_market(0.75, 0.01);
    VolModel vol = TwoStateMarkovVol{};
    DepthCurve curve = make_depth_curve(vol, mp.horizon, mp.frac, 4096);
    SimOptions opts;
    opts.with_strategy = false;
    const std::size_t paths = 2000;
    const std::array<std::size_t, 3> ladder = {256, 1024, 4096};
    std::vector<double> medians;
    KsResult ks;
    for (std::size_t idx = 0; idx < ladder.size(); ++idx) {
        const std::size_t n = ladder[idx];
        TimeGrid grid(mp.horizon, n);
        const std::size_t k99 = late_node(n);
        std::vector<double> gaps(paths), hs(paths);
        parallel_for(paths, [&](std::size_t i) {
            SimPath p = simulate_path(mp, vol, curve, grid, opts, 7005, i);
            gaps[i] = std::abs(p.price[n - 1] - p.value);
            hs[i] = p.deviation[k99];
        });
        medians.push_back(median_of(gaps));
        if (idx + 1 == ladder.size()) ks = ks_normal(hs);
    }
    const bool mono = medians[0] > medians[1] && medians[1] > medians[2];
    const bool ok = mono && ks.pass;
    return {ok, "medians " + g(medians[0]) + ">" + g(medians[1]) + ">" +
                    g(medians[2]) + "; KS=" + g(ks.statistic) +
                    " (crit " + g(ks.critical) + ")"};
}

// 05: reciprocal impact drifts like a martingale orthogonal to the flow;
// impact itself trends upward.
std::pair<bool, std::string> criterion_depth_martingale() {
    MarketParams mp = base_market(0.75, 0.01);
    VolModel vol = TwoStateMarkovVol{};
    DepthCurve curve = make_depth_curve(vol, mp.horizon, mp.frac, 4096);
    const std::size_t n = 512, paths = 10000;
    TimeGrid grid(mp.horizon, n);
    SimOptions opts;
    opts.with_strategy = false;
    QuarterProbes probes(paths);
    parallel_for(paths, [&](std::size_t i) {
        SimPath p = simulate_path(mp, vol, curve, grid, opts, 7006, i);
        probes.record(i, p, n);
    });
    DriftResult m1 = martingale_probe(probes.inv_a0, probes.inv_a1, false);
    DriftResult m2 = martingale_probe(probes.inv_b0, probes.inv_b1, false);
    DriftResult s1 = martingale_probe(probes.lam_a0, probes.lam_a1, true);
    DriftResult s2 = martingale_probe(probes.lam_b0, probes.lam_b1, true);
    CorrResult c1 = corr_probe(probes.dinv_a, probes.dy_a);
    CorrResult c2 = corr_probe(probes.dinv_b, probes.dy_b);
    const bool strict = s1.strictly_positive || s2.strictly_positive;
    const bool ok =
        m1.pass && m2.pass && s1.pass && s2.pass && strict && c1.pass && c2.pass;
    return {ok, "inv-z=" + g(m1.z) + "/" + g(m2.z) + " up-z=" + g(s1.z) + "/" +
                    g(s2.z) + " corr-r=" + g(c1.r) + "/" + g(c2.r) +
                    (strict ? " (strictly up)" : " (no strict rise)")};
}

// 06: depth containment bounds, ODE self-consistency, defining fixed point.
std::pair<bool, std::string> criterion_depth_certification() {
    const FractionalParams fp(0.75, 0.01);
    const double T = 1.0;
    TimeGrid grid(T, 256);

    VolModel flat = ConstantVol{1.0};
    VolModel growth = unit_growth();
    VolModel markov = TwoStateMarkovVol{};

    BoundsReport b1 = check_bounds(make_depth_curve(flat, T, fp, 64), flat, grid);
    BoundsReport b2 = check_bounds(make_depth_curve(growth, T, fp, 64), growth, grid);
    auto table = std::make_shared<MarkovDepthTable>(std::get<TwoStateMarkovVol>(markov),
                                                    T, 4096);
    DepthCurve mcurve = DepthCurve::markov(table, fp);
    BoundsReport b3 = check_bounds(mcurve, markov, grid);
    const bool bounds_ok = b1.pass && b2.pass && b3.pass;

    MarkovOdeTable fine = solve_markov_odes(0.5, 2.0, 1.0, 1.0, T, 8192);
    const MarkovOdeTable& coarse = table->nodes();
    double halving = 0.0;
    for (std::size_t k = 0; k < coarse.tau.size(); ++k) {
        halving = std::max(halving, std::abs(coarse.g_low[k] - fine.g_low[2 * k]) /
                                        coarse.g_low.back());
        halving = std::max(halving, std::abs(coarse.g_high[k] - fine.g_high[2 * k]) /
                                        coarse.g_high.back());
    }
    const bool halving_ok = halving <= 1e-8;

    std::size_t fp_ok = 0, fp_total = 0;
    double worst_fp_z = 0.0;
    bool conclusive = true;
    for (const FixedPointProbe& p : verify_fixed_point(mcurve, markov, 4000, 7007)) {
        ++fp_total;
        if (p.pass) ++fp_ok;
        conclusive = conclusive && !p.inconclusive;
        if (p.std_error > 0.0)
            worst_fp_z =
                std::max(worst_fp_z, std::abs(p.estimate - p.target) / p.std_error);
    }
    std::size_t det_ok = 0, det_total = 0;
    for (const FixedPointProbe& p :
         verify_fixed_point(make_depth_curve(growth, T, fp, 64), growth, 0, 7007)) {
        ++det_total;
        if (p.pass) ++det_ok;
    }
    const bool ok = bounds_ok && halving_ok && fp_ok == fp_total &&
                    fp_total == 8 && conclusive && det_ok == det_total;
    return {ok, "bounds slack=" + g(std::min({b1.worst_rel_slack, b2.worst_rel_slack,
                                              b3.worst_rel_slack})) +
                    "; halving=" + g(halving) + "; fixed point " +
                    std::to_string(fp_ok) + "/" + std::to_string(fp_total) +
                    " (worst z=" + g(worst_fp_z) + "), quadrature " +
                    std::to_string(det_ok) + "/" + std::to_string(det_total)};
}

// 07: ensemble mean of the trading rate against the closed form.
std::pair<bool, std::string> criterion_expected_rate() {
    MarketParams mp = base_market(0.5, 0.01);
    VolModel vol = unit_growth();
    DepthCurve curve = make_depth_curve(vol, mp.horizon, mp.frac, 64);
    const std::size_t n = 512, paths = 10000;
    TimeGrid grid(mp.horizon, n);
    SimOptions opts;
    opts.draw_value = false;
    opts.value_offset = 0.1;
    std::vector<double> r0(paths), r_half(paths);
    parallel_for(paths, [&](std::size_t i) {
        SimPath p = simulate_path(mp, vol, curve, grid, opts, 7008, i);
        r0[i] = p.rate[0];
        r_half[i] = p.rate[n / 2];
    });
    MeanEstimate e0 = mc_mean(r0);
    MeanEstimate eh = mc_mean(r_half);
    const double target0 = expected_trading_rate(mp, 1.0, 1.0, 0.1, 0.0);
    const double targeth = expected_trading_rate(mp, 1.0, 1.0, 0.1, 0.5);
    const bool ok0 = std::abs(e0.mean - target0) <= std::max(3.0 * e0.se, 1e-9);
    const bool okh = std::abs(eh.mean - targeth) <= 3.0 * eh.se;
    return {ok0 && okh,
            "t=0: " + g(e0.mean) + " vs " + g(target0) + " (se " + g(e0.se) +
                "); t=0.5: " + g(eh.mean) + " vs " + g(targeth) + " (se " +
                g(eh.se) + ")"};
}

// 08: realized profit balances the execution cost net of the weighted
// memory correction; the weight vanishes at H = 1/2.
std::pair<bool, std::string> criterion_profit_decomposition() {
    VolModel vol = TwoStateMarkovVol{};
    const std::size_t n = 1024, paths = 10000;
    SimOptions opts;

    auto run = [&](double hurst) {
        MarketParams mp = base_market(hurst, 0.01);
        TimeGrid grid(mp.horizon, n);
        DepthCurve curve = make_depth_curve(vol, mp.horizon, mp.frac, 4096);
        std::vector<PathAccounts> acc(paths);
        parallel_for(paths, [&](std::size_t i) {
            SimPath p = simulate_path(mp, vol, curve, grid, opts, 7009, i);
            acc[i] = path_accounts(p, grid, mp.frac);
        });
        return profit_cost_decomposition(acc, hurst);
    };

    DecompositionReport frac = run(0.75);
    DecompositionReport cls = run(0.5);
    const double frac_z = frac.gap.mean / frac.gap.se;
    const double cls_z = cls.gap.mean / cls.gap.se;
    // The weighted correction (H - 1/2) * integral carries weight zero at
    // H = 1/2, so its estimate is identically 0; the raw integral mean is
    // printed alongside for transparency.
    const double weighted_cls = 0.0 * cls.correction.mean;
    const bool ok = frac.pass && cls.pass && weighted_cls == 0.0;
    return {ok, "H=0.75 gap z=" + g(frac_z) + " (profit " + g(frac.profit.mean) +
                    ", cost " + g(frac.cost.mean) + ", corr " +
                    g(frac.correction.mean) + "); H=0.5 gap z=" + g(cls_z) +
                    ", weighted corr=" + g(weighted_cls) + " (raw " +
                    g(cls.correction.mean) + " se " + g(cls.correction.se) + ")"};
}

// 09: scaling the feedback rate by 0.8 or 1.2 must lower mean profit by more
// than 2 paired SEs in both volatility models.
std::pair<bool, std::string> criterion_optimality() {
    const std::size_t n = 512, paths = 4000;
    const std::array<double, 3> scales = {0.8, 1.0, 1.2};
    bool ok = true;
    std::string txt;
    for (int model = 0; model < 2; ++model) {
        VolModel vol = model == 0 ? VolModel(ConstantVol{1.0})
                                  : VolModel(TwoStateMarkovVol{});
        MarketParams mp = base_market(0.75, 0.01);
        DepthCurve curve = make_depth_curve(vol, mp.horizon, mp.frac, 4096);
        TimeGrid grid(mp.horizon, n);
        std::array<std::vector<double>, 3> profits;
        for (std::size_t s = 0; s < scales.size(); ++s) {
            profits[s].assign(paths, 0.0);
            SimOptions opts;
            opts.beta_scale = scales[s];
            auto& out = profits[s];
            parallel_for(paths, [&, s](std::size_t i) {
                SimPath p = simulate_path(mp, vol, curve, grid, opts, 7010, i);
                out[i] = path_accounts(p, grid, mp.frac).profit;
            });
        }
        txt += model == 0 ? "flat:" : " markov:";
        std::vector<double> diff(paths);
        for (std::size_t s = 0; s < scales.size(); ++s) {
            if (scales[s] == 1.0) continue;
            for (std::size_t i = 0; i < paths; ++i)
                diff[i] = profits[s][i] - profits[1][i];
            MeanEstimate d = mc_mean(diff);
            const double z = d.mean / d.se;
            const bool drop = d.mean < 0.0 && -d.mean > 2.0 * d.se;
            ok = ok && drop;
            txt += " s" + g(scales[s]) + " z=" + g(z);
        }
    }
    return {ok, txt};
}

// 10: impact-figure orderings under both sigma conventions, plus the frozen
// starting-impact anchor.
std::pair<bool, std::string> criterion_figures() {
    const double T = 1.0, m = 1.0, s0 = 1.0;
    const double d0 = compute_depth_scale(m, 0.0, T);
    const double sigma_v = std::sqrt(0.04 / d0);
    const std::size_t n = 256;
    TimeGrid grid(T, n);

    auto lam = [&](double hurst, double eps, bool evolving, double t) {
        const double st = evolving ? s0 * std::exp(m * t) : s0;
        return impact_deterministic(t, m, st, sigma_v, FractionalParams(hurst, eps));
    };

    const std::array<double, 3> hs = {0.6, 0.75, 0.9};
    const std::array<double, 3> es = {0.1, 0.01, 0.001};
    double worst_h = 1e300, worst_e = 1e300;
    for (int conv = 0; conv < 2; ++conv) {
        const bool evolving = conv == 0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = grid.t(k);
            for (std::size_t c = 0; c + 1 < 3; ++c) {
                worst_h = std::min(worst_h, lam(hs[c + 1], 0.01, evolving, t) -
                                                lam(hs[c], 0.01, evolving, t));
                worst_e = std::min(worst_e, lam(0.6, es[c + 1], evolving, t) -
                                                lam(0.6, es[c], evolving, t));
            }
        }
    }
    const double anchor = lam(0.6, 0.01, true, 0.0);
    const bool anchor_ok = std::abs(anchor - 0.17734) <= 1e-5;
    const bool ok = worst_h > 0.0 && worst_e > 0.0 && anchor_ok;
    return {ok, "min gaps: hurst-ladder " + g(worst_h) + ", width-ladder " +
                    g(worst_e) + "; anchor " + g(anchor) + " vs 0.17734 (tol 1e-5)"};
}

// 11: posterior variance is the linear function of the clock everywhere; the
// classical clock is the calendar time.
std::pair<bool, std::string> criterion_time_change() {
    MarketParams mp = base_market(0.75, 0.01);
    VolModel vol = TwoStateMarkovVol{};
    DepthCurve curve = make_depth_curve(vol, mp.horizon, mp.frac, 4096);
    const std::size_t n = 1024;
    TimeGrid grid(mp.horizon, n);
    SimOptions opts;
    opts.with_strategy = false;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 64; ++i) {
        SimPath p = simulate_path(mp, vol, curve, grid, opts, 7011, i);
        worst = std::max(worst, time_change_gap(p, mp.prior_variance, mp.horizon));
    }

    MarketParams cls = base_market(0.5, 1.0);
    VolModel flat = ConstantVol{1.0};
    DepthCurve ccurve = make_depth_curve(flat, cls.horizon, cls.frac, 64);
    double worst_clock = 0.0;
    for (std::uint64_t i = 0; i < 8; ++i) {
        SimPath p = simulate_path(cls, flat, ccurve, grid, opts, 7011, i);
        for (std::size_t k = 0; k <= n; ++k)
            worst_clock = std::max(worst_clock, std::abs(p.clock[k] - grid.t(k)));
    }
    const bool ok = worst <= 1e-8 && worst_clock <= 1e-8;
    return {ok, "variance-vs-clock rel gap " + g(worst) +
                    "; classical clock gap " + g(worst_clock) + " (tol 1e-8)"};
}

}  // namespace

int main() {
    std::printf("acceptance: 11 criteria\n");
    run_criterion(1, "classical-impact", criterion_classical, 10.0);
    run_criterion(2, "fbm-approximation", criterion_fbm, 60.0);
    run_criterion(3, "semimartingale-identity", criterion_identity);
    run_criterion(4, "bridge-convergence", criterion_bridge, 180.0);
    run_criterion(5, "depth-martingale", criterion_depth_martingale, 180.0);
    run_criterion(6, "depth-certification", criterion_depth_certification);
    run_criterion(7, "expected-rate", criterion_expected_rate);
    run_criterion(8, "profit-decomposition", criterion_profit_decomposition);
    run_criterion(9, "optimality", criterion_optimality);
    run_criterion(10, "impact-figures", criterion_figures);
    run_criterion(11, "time-change", criterion_time_change);
    if (g_failures == 0)
        std::printf("acceptance: all 11 criteria passed\n");
    else
        std::printf("acceptance: %d of 11 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
