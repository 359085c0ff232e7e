#include "kyle/depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kyle/csv.hpp"
#include "kyle/rng.hpp"
#include "kyle/stats.hpp"

namespace kyle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double simpson_slice(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double fm, double eps, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return simpson_slice(f, a, fa, m, fm, flm, 0.5 * eps, left, depth - 1) +
           simpson_slice(f, m, fm, b, fb, frm, 0.5 * eps, right, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_slice(f, a, fa, b, fb, fm, tol, whole, 48);
}

double compute_depth_scale(double growth_rate, double t, double horizon) {
    if (t > horizon + 1e-12 * (1.0 + std::abs(horizon)))
        throw std::invalid_argument("compute_depth_scale: t beyond the horizon");
    const double remaining = std::max(horizon - t, 0.0);
    if (std::abs(growth_rate) < 1e-14) return remaining;
    return std::expm1(2.0 * growth_rate * remaining) / (2.0 * growth_rate);
}

double compute_depth_scale(const std::function<double(double)>& growth_rate,
                           double t, double horizon) {
    if (t > horizon + 1e-12 * (1.0 + std::abs(horizon)))
        throw std::invalid_argument("compute_depth_scale: t beyond the horizon");
    auto inner = [&](double u) {
        return integrate(growth_rate, t, u, 1e-12);
    };
    return integrate([&](double u) { return std::exp(2.0 * inner(u)); }, t, horizon, 1e-11);
}

double depth_deterministic(double sigma_t, double depth_scale, const FractionalParams& fp) {
    if (sigma_t <= 0.0) throw std::invalid_argument("depth_deterministic: sigma must be positive");
    if (depth_scale < 0.0) throw std::invalid_argument("depth_deterministic: negative depth scale");
    return fp.eps_pow_2h1() * sigma_t * sigma_t * depth_scale;
}

MarkovOdeTable solve_markov_odes(double sigma_low, double sigma_high,
                                 double intensity_to_high, double intensity_to_low,
                                 double horizon, std::size_t ode_steps) {
    if (!(sigma_low > 0.0) || !(sigma_high >= sigma_low))
        throw std::invalid_argument("solve_markov_odes: need 0 < sigma_low <= sigma_high");
    if (intensity_to_high < 0.0 || intensity_to_low < 0.0)
        throw std::invalid_argument("solve_markov_odes: intensities must be nonnegative");
    if (!(horizon > 0.0)) throw std::invalid_argument("solve_markov_odes: horizon must be positive");
    if (ode_steps < 16) throw std::invalid_argument("solve_markov_odes: need at least 16 steps");

    const double s2l = sigma_low * sigma_low;
    const double s2h = sigma_high * sigma_high;
    auto deriv = [&](double gl, double gh, double& dl, double& dh) {
        const double cross = std::sqrt(std::max(gl, 0.0) * std::max(gh, 0.0));
        dl = s2l + 2.0 * intensity_to_high * (cross - gl);
        dh = s2h + 2.0 * intensity_to_low * (cross - gh);
    };

    MarkovOdeTable out;
    out.horizon = horizon;
    out.tau.resize(ode_steps + 1);
    out.g_low.resize(ode_steps + 1);
    out.g_high.resize(ode_steps + 1);
    out.tau[0] = 0.0;
    out.g_low[0] = 0.0;
    out.g_high[0] = 0.0;

    const double h = horizon / static_cast<double>(ode_steps);
    double gl = 0.0, gh = 0.0;
    for (std::size_t i = 0; i < ode_steps; ++i) {
        double k1l, k1h, k2l, k2h, k3l, k3h, k4l, k4h;
        deriv(gl, gh, k1l, k1h);
        deriv(gl + 0.5 * h * k1l, gh + 0.5 * h * k1h, k2l, k2h);
        deriv(gl + 0.5 * h * k2l, gh + 0.5 * h * k2h, k3l, k3h);
        deriv(gl + h * k3l, gh + h * k3h, k4l, k4h);
        gl += h / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l);
        gh += h / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
        const double tau = h * static_cast<double>(i + 1);
        if (gl < -1e-12 || gh < -1e-12) {
            std::ostringstream msg;
            msg << "solve_markov_odes: negative depth at tau = " << tau;
            throw std::runtime_error(msg.str());
        }
        out.tau[i + 1] = tau;
        out.g_low[i + 1] = gl;
        out.g_high[i + 1] = gh;
    }
    out.tau[ode_steps] = horizon;
    return out;
}

void write_depth_table(std::ostream& os, const MarkovOdeTable& table) {
    os << "tau,G_L,G_H\n";
    for (std::size_t i = 0; i < table.tau.size(); ++i) {
        os << csv_number(table.tau[i]) << ',' << csv_number(table.g_low[i]) << ','
           << csv_number(table.g_high[i]) << '\n';
    }
}

namespace {

// Second derivatives of the natural cubic spline on a uniform grid.
std::vector<double> natural_spline(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) return m;
    std::vector<double> diag(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        diag[i] = 4.0;
        rhs[i] = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
    }
    // Thomas sweep on the interior block with unit off-diagonals.
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        const double upper = (i + 2 < n) ? m[i + 1] : 0.0;
        m[i] = (rhs[i] - upper) / diag[i];
        if (i == 1) break;
    }
    return m;
}

}  // namespace

MarkovDepthTable::MarkovDepthTable(const TwoStateMarkovVol& model, double horizon,
                                   std::size_t ode_steps)
    : model_(model),
      nodes_(solve_markov_odes(model.sigma_low, model.sigma_high, model.intensity_to_high,
                               model.intensity_to_low, horizon, ode_steps)) {
    validate_model(VolModel(model));
    const double h = horizon / static_cast<double>(ode_steps);
    second_deriv_[0] = natural_spline(nodes_.g_low, h);
    second_deriv_[1] = natural_spline(nodes_.g_high, h);

    // Cumulative Simpson table of 2q / sqrt(g(q^2)) on a uniform q = sqrt(tau)
    // grid; the substitution removes the inverse-square-root singularity at 0.
    const std::size_t q_cells = 1u << 15;
    q_step_ = std::sqrt(horizon) / static_cast<double>(q_cells);
    for (int r = 0; r < 2; ++r) {
        auto& phi = phi_nodes_[r];
        phi.assign(q_cells + 1, 0.0);
        const Regime regime = static_cast<Regime>(r);
        double prev_f = phi_integrand(regime, 0.0);
        for (std::size_t i = 0; i < q_cells; ++i) {
            const double q0 = q_step_ * static_cast<double>(i);
            const double q1 = q_step_ * static_cast<double>(i + 1);
            const double fm = phi_integrand(regime, 0.5 * (q0 + q1));
            const double f1 = phi_integrand(regime, q1);
            phi[i + 1] = phi[i] + q_step_ / 6.0 * (prev_f + 4.0 * fm + f1);
            prev_f = f1;
        }
    }
}

double MarkovDepthTable::sigma2(Regime r) const {
    const double s = r == Regime::low ? model_.sigma_low : model_.sigma_high;
    return s * s;
}

double MarkovDepthTable::spline_eval(Regime r, double tau) const {
    const auto& y = r == Regime::low ? nodes_.g_low : nodes_.g_high;
    const auto& m = second_deriv_[static_cast<int>(r)];
    const std::size_t cells = y.size() - 1;
    const double h = nodes_.horizon / static_cast<double>(cells);
    const double x = std::clamp(tau, 0.0, nodes_.horizon);
    std::size_t j = std::min(static_cast<std::size_t>(x / h), cells - 1);
    const double s = x - h * static_cast<double>(j);
    const double slope = (y[j + 1] - y[j]) / h - h * (2.0 * m[j] + m[j + 1]) / 6.0;
    return y[j] + s * (slope + s * (0.5 * m[j] + s * (m[j + 1] - m[j]) / (6.0 * h)));
}

double MarkovDepthTable::g(Regime r, double tau) const { return spline_eval(r, tau); }

double MarkovDepthTable::phi_integrand(Regime r, double q) const {
    if (q <= 0.0) return 2.0 / std::sqrt(sigma2(r));
    const double depth = std::max(spline_eval(r, q * q), 1e-300);
    return 2.0 * q / std::sqrt(depth);
}

double MarkovDepthTable::phi(Regime r, double tau) const {
    if (tau <= 0.0) return 0.0;
    const auto& nodes = phi_nodes_[static_cast<int>(r)];
    const double q_max = q_step_ * static_cast<double>(nodes.size() - 1);
    const double q = std::min(std::sqrt(tau), q_max);
    std::size_t j = std::min(static_cast<std::size_t>(q / q_step_), nodes.size() - 2);
    const double q0 = q_step_ * static_cast<double>(j);
    const double d = q - q0;
    if (d <= 0.0) return nodes[j];
    const double f0 = phi_integrand(r, q0);
    const double fm = phi_integrand(r, q0 + 0.5 * d);
    const double f1 = phi_integrand(r, q);
    return nodes[j] + d / 6.0 * (f0 + 4.0 * fm + f1);
}

DepthCurve DepthCurve::closed_form(double growth_rate, double horizon,
                                   const FractionalParams& fp) {
    if (!(horizon > 0.0)) throw std::invalid_argument("DepthCurve: horizon must be positive");
    DepthCurve c;
    c.growth_rate_ = growth_rate;
    c.horizon_ = horizon;
    c.frac_ = fp;
    return c;
}

DepthCurve DepthCurve::markov(std::shared_ptr<const MarkovDepthTable> table,
                              const FractionalParams& fp) {
    if (!table) throw std::invalid_argument("DepthCurve: missing table");
    DepthCurve c;
    c.horizon_ = table->horizon();
    c.table_ = std::move(table);
    c.frac_ = fp;
    return c;
}

double DepthCurve::kappa(double t, Regime regime) const {
    if (t >= horizon_) return kInf;
    if (table_) return table_->sigma2(regime) / table_->g(regime, horizon_ - t);
    return 1.0 / compute_depth_scale(growth_rate_, t, horizon_);
}

double DepthCurve::kappa_integral(double a, double b, Regime regime) const {
    if (a < 0.0 || b < a) throw std::invalid_argument("kappa_integral: need 0 <= a <= b");
    if (b > horizon_ + 1e-9 * (1.0 + horizon_))
        throw std::invalid_argument("kappa_integral: b beyond the horizon");
    if (b >= horizon_) return kInf;
    if (a == b) return 0.0;
    if (!table_) {
        const double da = compute_depth_scale(growth_rate_, a, horizon_);
        const double db = compute_depth_scale(growth_rate_, b, horizon_);
        return std::log(da / db) - 2.0 * growth_rate_ * (b - a);
    }
    // Composite Simpson in reversed time tau = horizon - s, split on the ODE
    // cells so each piecewise-cubic spline segment is sampled at its own
    // midpoint.
    const double s2 = table_->sigma2(regime);
    const auto& nodes = table_->nodes();
    const std::size_t cells = nodes.tau.size() - 1;
    const double h = horizon_ / static_cast<double>(cells);
    const double lo = horizon_ - b;
    const double hi = horizon_ - a;
    const std::size_t j0 = std::min(static_cast<std::size_t>(lo / h), cells - 1);
    double sum = 0.0;
    for (std::size_t j = j0; j < cells; ++j) {
        const double cell_lo = h * static_cast<double>(j);
        if (cell_lo >= hi) break;
        const double c0 = std::max(lo, cell_lo);
        const double c1 = std::min(hi, h * static_cast<double>(j + 1));
        if (c1 <= c0) continue;
        const double f0 = 1.0 / table_->g(regime, c0);
        const double fm = 1.0 / table_->g(regime, 0.5 * (c0 + c1));
        const double f1 = 1.0 / table_->g(regime, c1);
        sum += (c1 - c0) / 6.0 * (f0 + 4.0 * fm + f1);
    }
    return s2 * sum;
}

double DepthCurve::depth(double t, double sigma_t, Regime regime) const {
    if (table_) return frac_.eps_pow_2h1() * table_->g(regime, horizon_ - t);
    const double scale = compute_depth_scale(growth_rate_, t, horizon_);
    return depth_deterministic(sigma_t, scale, frac_);
}

DepthCurve make_depth_curve(const VolModel& model, double horizon,
                            const FractionalParams& fp, std::size_t ode_steps) {
    validate_model(model);
    if (const auto* markov = std::get_if<TwoStateMarkovVol>(&model)) {
        auto table = std::make_shared<MarkovDepthTable>(*markov, horizon, ode_steps);
        return DepthCurve::markov(std::move(table), fp);
    }
    double rate = 0.0;
    if (const auto* growth = std::get_if<DeterministicGrowthVol>(&model)) rate = growth->growth_rate;
    return DepthCurve::closed_form(rate, horizon, fp);
}

BoundsReport check_bounds(const DepthCurve& curve, const VolModel& model,
                          const TimeGrid& grid) {
    validate_model(model);
    if (std::holds_alternative<TwoStateMarkovVol>(model) != curve.is_markov())
        throw std::invalid_argument("check_bounds: curve/model mismatch");
    const double horizon = curve.horizon();
    const VolBounds vb = vol_bounds(model, horizon);
    const double lo2 = vb.lower * vb.lower;
    const double hi2 = vb.upper * vb.upper;
    const double scale = hi2 * horizon;  // normalization for relative slack

    BoundsReport report;
    auto record = [&report, scale](double slack, std::size_t& counter, double tol) {
        const double rel = slack / scale;
        report.worst_rel_slack = std::min(report.worst_rel_slack, rel);
        if (rel < -tol) ++counter;
    };

    const auto* growth = std::get_if<DeterministicGrowthVol>(&model);
    const auto* markov = std::get_if<TwoStateMarkovVol>(&model);

    for (std::size_t k = 0; k < grid.n_nodes(); ++k) {
        const double t = k + 1 == grid.n_nodes() ? horizon : grid.t(k);
        const double remaining = horizon - t;
        ++report.points;
        if (markov != nullptr) {
            const MarkovDepthTable* table = curve.table();
            if (table == nullptr) throw std::invalid_argument("check_bounds: curve/model mismatch");
            const double q = markov->intensity_to_high + markov->intensity_to_low;
            const double pi_high = q > 0.0 ? markov->intensity_to_high / q : 0.0;
            const double stationary2 = lo2 + (hi2 - lo2) * pi_high;
            for (int r = 0; r < 2; ++r) {
                const Regime regime = static_cast<Regime>(r);
                const double value = table->g(regime, remaining);
                record(value - lo2 * remaining, report.envelope_violations, 1e-12);
                record(hi2 * remaining - value, report.envelope_violations, 1e-12);
                const double own2 = table->sigma2(regime);
                const double expectation =
                    q > 0.0 ? stationary2 * remaining +
                                  (own2 - stationary2) * (-std::expm1(-q * remaining)) / q
                            : own2 * remaining;
                record(expectation - value, report.expectation_violations, 1e-9);
            }
        } else {
            const double d = compute_depth_scale(curve.growth_rate(), t, horizon);
            double sigmas[2];
            std::size_t n_sigma = 1;
            if (growth != nullptr && growth->vol_of_vol > 0.0) {
                sigmas[0] = vb.lower;
                sigmas[1] = vb.upper;
                n_sigma = 2;
            } else if (growth != nullptr) {
                sigmas[0] = growth->sigma0 * std::exp(growth->growth_rate * t);
            } else {
                sigmas[0] = initial_sigma(model);
            }
            const double nu2 = growth != nullptr ? growth->vol_of_vol * growth->vol_of_vol : 0.0;
            const double rate2 = 2.0 * curve.growth_rate() + nu2;
            const double moment_scale =
                std::abs(rate2) < 1e-14 ? remaining : std::expm1(rate2 * remaining) / rate2;
            for (std::size_t s = 0; s < n_sigma; ++s) {
                const double value = sigmas[s] * sigmas[s] * d;
                record(value - lo2 * remaining, report.envelope_violations, 1e-12);
                record(hi2 * remaining - value, report.envelope_violations, 1e-12);
                record(sigmas[s] * sigmas[s] * moment_scale - value,
                       report.expectation_violations, 1e-9);
            }
        }
    }
    report.pass = report.envelope_violations == 0 && report.expectation_violations == 0;
    return report;
}

std::vector<FixedPointProbe> verify_fixed_point(const DepthCurve& curve, const VolModel& model,
                                                std::size_t n_paths, std::uint64_t master_seed) {
    validate_model(model);
    if (std::holds_alternative<TwoStateMarkovVol>(model) != curve.is_markov())
        throw std::invalid_argument("verify_fixed_point: curve/model mismatch");
    const double horizon = curve.horizon();
    const double probes[4] = {0.0, 0.25 * horizon, 0.5 * horizon, 0.75 * horizon};
    std::vector<FixedPointProbe> out;

    if (!curve.is_markov()) {
        const double m = curve.growth_rate();
        for (double t : probes) {
            FixedPointProbe p;
            p.t = t;
            p.target = std::sqrt(compute_depth_scale(m, t, horizon));
            // s = horizon - r^2 removes the endpoint singularity of 1/sqrt(D);
            // at r = 0 the integrand has the finite limit e^{m (horizon - t)}.
            p.estimate = integrate(
                [&](double r) {
                    const double s = horizon - r * r;
                    if (s >= horizon) return std::exp(m * (horizon - t));
                    return std::exp(m * (s - t)) * r /
                           std::sqrt(compute_depth_scale(m, s, horizon));
                },
                0.0, std::sqrt(horizon - t), 1e-11);
            p.std_error = 0.0;
            p.pass = std::abs(p.estimate - p.target) <= 1e-6 * p.target;
            p.inconclusive = false;
            out.push_back(p);
        }
        return out;
    }

    const MarkovDepthTable* table = curve.table();
    const TwoStateMarkovVol mk = table->model();
    if (n_paths < 2) throw std::invalid_argument("verify_fixed_point: need at least 2 paths");
    std::size_t probe_idx = 0;
    for (double t : probes) {
        for (int r = 0; r < 2; ++r) {
            const Regime start = static_cast<Regime>(r);
            StreamingMoments acc;
            for (std::size_t i = 0; i < n_paths; ++i) {
                auto engine = make_engine(master_seed, Stream::vol_jumps,
                                          probe_idx * n_paths + i);
                Regime state = start;
                double s = t;
                double value = 0.0;
                while (s < horizon) {
                    const double rate = state == Regime::low ? mk.intensity_to_high
                                                             : mk.intensity_to_low;
                    const double s2 = table->sigma2(state);
                    if (rate <= 0.0) {
                        value += 0.5 * s2 * table->phi(state, horizon - s);
                        break;
                    }
                    std::exponential_distribution<double> holding(rate);
                    const double next = s + holding(engine);
                    if (next >= horizon) {
                        value += 0.5 * s2 * table->phi(state, horizon - s);
                        break;
                    }
                    value += 0.5 * s2 *
                             (table->phi(state, horizon - s) - table->phi(state, horizon - next));
                    state = state == Regime::low ? Regime::high : Regime::low;
                    s = next;
                }
                acc.add(value);
            }
            FixedPointProbe p;
            p.t = t;
            p.regime = start;
            p.target = std::sqrt(table->g(start, horizon - t));
            p.estimate = acc.mean();
            p.std_error = acc.std_error();
            p.inconclusive = p.std_error > 0.5 * p.target;
            p.pass = std::abs(p.estimate - p.target) <= 3.0 * p.std_error;
            out.push_back(p);
            ++probe_idx;
        }
    }
    return out;
}

}  // namespace kyle
