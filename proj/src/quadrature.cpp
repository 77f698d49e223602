#include "smallball/quadrature.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smallball/bounds.hpp"
#include "smallball/errors.hpp"

namespace smallball::quadrature {

namespace {

constexpr double kPi = std::numbers::pi;

struct PanelResult {
    double value = 0.0;
    double err = 0.0;
    std::uint64_t evals = 0;
};

// Romberg (trapezoid + Richardson) on one smooth panel.
PanelResult romberg(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, double abs_tol, int max_levels = 22) {
    PanelResult res;
    if (!(b > a)) return res;
    constexpr int kMax = 26;
    double table[kMax][kMax];
    const double h0 = b - a;
    double fa = f(a), fb = f(b);
    res.evals = 2;
    table[0][0] = 0.5 * h0 * (fa + fb);
    double prev = table[0][0];
    for (int k = 1; k <= max_levels; ++k) {
        const std::uint64_t steps = 1ULL << (k - 1);
        const double h = h0 / static_cast<double>(1ULL << k);
        double sum = 0.0;
        for (std::uint64_t i = 0; i < steps; ++i)
            sum += f(a + h * static_cast<double>(2 * i + 1));
        res.evals += steps;
        table[k][0] = 0.5 * table[k - 1][0] + h * sum;
        double pow4 = 1.0;
        for (int j = 1; j <= k; ++j) {
            pow4 *= 4.0;
            table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (pow4 - 1.0);
        }
        const double cur = table[k][k];
        const double err = std::abs(cur - prev);
        if (k >= 3 && err <= std::max(abs_tol, rel_tol * std::abs(cur))) {
            res.value = cur;
            res.err = err;
            return res;
        }
        prev = cur;
    }
    res.value = prev;
    res.err = std::abs(table[max_levels][max_levels] - table[max_levels - 1][max_levels - 1]);
    return res;
}

// Upper tail integral_x^inf r^{a-1} e^{-r} dr, bounded analytically. Used to
// pick truncation radii; the controlling estimate for a >= 1 is the same
// inequality gamma_tail_bound implements.
double gamma_upper_tail_bound(double a, double x) {
    if (x <= 0.0) return std::tgamma(a);
    if (a >= 1.0 && x >= a) return bounds::gamma_tail_bound(x, a);
    if (a <= 1.0 && x >= 1.0) return std::pow(x, a - 1.0) * std::exp(-x);
    // Fallback for small x: whole integral.
    return std::tgamma(a);
}

} // namespace

std::pair<double, double> binomial_ci(std::uint64_t hits, std::uint64_t samples,
                                      double confidence) {
    if (samples < 1) throw std::invalid_argument("binomial_ci: samples must be >= 1");
    if (hits > samples) throw std::invalid_argument("binomial_ci: hits > samples");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("binomial_ci: confidence must be in (0,1)");
    using dist = boost::math::binomial_distribution<double>;
    const double tail = 0.5 * (1.0 - confidence);
    const double n = static_cast<double>(samples);
    const double k = static_cast<double>(hits);
    const double lo =
        hits == 0 ? 0.0
                  : dist::find_lower_bound_on_p(n, k, tail, dist::clopper_pearson_exact_interval);
    const double hi =
        hits == samples
            ? 1.0
            : dist::find_upper_bound_on_p(n, k, tail, dist::clopper_pearson_exact_interval);
    return {lo, hi};
}

McEstimate estimate_small_ball(const models::VectorModel& model,
                               const geometry::QuasiNormSpec& norm, double t,
                               std::uint64_t samples, std::uint64_t seed,
                               double confidence) {
    if (model.dim() != norm.n)
        throw std::invalid_argument("estimate_small_ball: model/norm dimension mismatch");
    const double p = norm.p;
    return estimate_small_ball(
        model, [p](std::span<const double> x) { return geometry::lp_quasinorm(x, p); }, t,
        samples, seed, confidence);
}

McEstimate estimate_small_ball(const models::VectorModel& model,
                               const std::function<double(std::span<const double>)>& norm,
                               double t, std::uint64_t samples, std::uint64_t seed,
                               double confidence) {
    if (samples < 1) throw std::invalid_argument("estimate_small_ball: samples must be >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("estimate_small_ball: t must be > 0");
    std::uint64_t hits = 0;
    model.for_each_sample(samples, seed, [&](std::span<const double> x) {
        if (norm(x) <= t) ++hits;
    });
    McEstimate est;
    est.samples = samples;
    est.hits = hits;
    est.seed = seed;
    est.confidence = confidence;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(samples);
    std::tie(est.ci_low, est.ci_high) = binomial_ci(hits, samples, confidence);
    return est;
}

QuadResult radial_integral(const std::function<double(double)>& g, int n,
                           const RadialOptions& opts) {
    if (n < 1) throw std::invalid_argument("radial_integral: n must be >= 1");
    const double area = geometry::sphere_area(n);
    const auto f = [&](double r) { return std::pow(r, n - 1) * g(r); };

    std::vector<double> pts{0.0};
    for (double b : opts.breakpoints)
        if (b > 0.0) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    QuadResult out;
    double tail_bound = 0.0;

    if (opts.truncation_radius) {
        pts.push_back(std::max(*opts.truncation_radius, pts.back()));
        double err = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            auto pr = romberg(f, pts[i], pts[i + 1], opts.rel_tol, opts.abs_tol);
            out.value += pr.value;
            err += pr.err;
            out.evaluations += pr.evals;
        }
        out.abs_error_estimate = err * area;
        out.value *= area;
        return out;
    }

    if (opts.gaussian_decay) {
        // g = h(r) exp(-c r^2) with h eventually nonincreasing: truncate where
        // the analytic tail drops below the tolerance.
        const double c = *opts.gaussian_decay;
        if (!(c > 0.0)) throw std::invalid_argument("radial_integral: decay must be > 0");
        double r_cut = std::max(pts.back(), std::sqrt((0.5 * n + 8.0) / c));
        for (int i = 0; i < 400; ++i) {
            const double envelope = std::abs(g(r_cut)) * std::exp(c * r_cut * r_cut);
            tail_bound = envelope * 0.5 * std::pow(c, -0.5 * n) *
                         gamma_upper_tail_bound(0.5 * n, c * r_cut * r_cut);
            out.evaluations += 1;
            if (tail_bound <= 0.5 * opts.abs_tol || r_cut > 1e6) break;
            r_cut *= 1.2;
        }
        pts.push_back(r_cut);

        double err = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            auto pr = romberg(f, pts[i], pts[i + 1], opts.rel_tol, opts.abs_tol);
            out.value += pr.value;
            err += pr.err;
            out.evaluations += pr.evals;
        }
        out.abs_error_estimate = (err + tail_bound) * area;
        out.value *= area;
        return out;
    }

    // No decay hint: integrate the panel structure, then keep doubling the
    // domain until two consecutive segments are negligible.
    double err = 0.0;
    double r_hi = std::max(pts.back() * 2.0, 1.0);
    pts.push_back(r_hi);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto pr = romberg(f, pts[i], pts[i + 1], opts.rel_tol, opts.abs_tol);
        out.value += pr.value;
        err += pr.err;
        out.evaluations += pr.evals;
    }
    int quiet = 0;
    for (int iter = 0; iter < 60 && quiet < 2; ++iter) {
        auto pr = romberg(f, r_hi, 2.0 * r_hi, opts.rel_tol, opts.abs_tol);
        out.value += pr.value;
        err += pr.err;
        out.evaluations += pr.evals;
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value));
        quiet = std::abs(pr.value) <= 0.25 * tol ? quiet + 1 : 0;
        r_hi *= 2.0;
    }
    if (quiet < 2)
        throw convergence_error("radial_integral: tail did not settle within the domain budget");
    out.abs_error_estimate = err * area;
    out.value *= area;
    return out;
}

namespace {

// Radial profile of |phi| for models built from Gaussian layers and point
// masses; nullopt when |phi| has no radial closed shape.
std::optional<std::function<double(double)>>
abs_charfun_profile(const models::VectorModel& model) {
    using models::VectorModel;
    switch (model.kind()) {
    case VectorModel::Kind::standard_gaussian:
        return [](double r) { return std::exp(-0.5 * r * r); };
    case VectorModel::Kind::smoothed: {
        auto base = abs_charfun_profile(model.base());
        if (!base) return std::nullopt;
        const double s2 = model.smoothing() * model.smoothing();
        return [base = std::move(*base), s2](double r) {
            return base(r) * std::exp(-0.5 * s2 * r * r);
        };
    }
    case VectorModel::Kind::weighted_sum:
        if (model.matrix().is_zero())
            return [](double) { return 1.0; };
        return std::nullopt;
    }
    return std::nullopt;
}

// Splits a model into (core, extra Gaussian weight): smoothing layers
// contribute exp(-s^2 |xi|^2 / 2) factors to the weight.
const models::VectorModel& peel_smoothing(const models::VectorModel& model, double& var_acc) {
    if (model.kind() == models::VectorModel::Kind::smoothed) {
        var_acc += model.smoothing() * model.smoothing();
        return peel_smoothing(model.base(), var_acc);
    }
    return model;
}

} // namespace

QuadResult weighted_charfun_integral(const models::VectorModel& model, double t,
                                     const McIntegralOptions& mc) {
    if (t < 0.0) throw std::invalid_argument("weighted_charfun_integral: t must be >= 0");
    const int n = model.dim();

    if (auto profile = abs_charfun_profile(model)) {
        const double t2 = t * t;
        // Point mass needs the Gaussian weight to make the integral finite.
        const bool constant_phi =
            model.kind() == models::VectorModel::Kind::weighted_sum && model.matrix().is_zero();
        double decay = 0.5 * t2;
        if (!constant_phi) decay += 0.5; // every Gaussian layer stacks at least this
        if (!(decay > 0.0))
            throw not_applicable_error(
                "weighted_charfun_integral: |phi| is not integrable at t = 0; "
                "use the smoothed bound");
        RadialOptions opts;
        opts.gaussian_decay = decay;
        opts.rel_tol = 1e-10;
        opts.abs_tol = 1e-14;
        return radial_integral(
            [&](double r) { return (*profile)(r) * std::exp(-0.5 * t2 * r * r); }, n, opts);
    }

    // Monte Carlo fallback: the weight is an unnormalized N(0, I/t_eff^2)
    // density, so the integral is (2 pi)^{n/2} t_eff^{-n} E |phi_core(Z/t_eff)|
    // plus any smoothing layers folded into t_eff.
    double var = t * t;
    const models::VectorModel& core = peel_smoothing(model, var);
    if (!(var > 0.0))
        throw not_applicable_error(
            "weighted_charfun_integral: |phi| of an atomic model is not integrable; "
            "smooth the model or use a different bound");
    const double t_eff = std::sqrt(var);

    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> xi(static_cast<std::size_t>(n));
    rng::for_each_sample(mc.seed, mc.samples, [&](rng::Engine& eng) {
        for (int i = 0; i < n; i += 2) {
            double g0, g1;
            eng.next_gaussian_pair(g0, g1);
            xi[static_cast<std::size_t>(i)] = g0 / t_eff;
            if (i + 1 < n) xi[static_cast<std::size_t>(i) + 1] = g1 / t_eff;
        }
        const double v = std::abs(core.charfun(xi));
        sum += v;
        sum_sq += v * v;
    });
    const double m = static_cast<double>(mc.samples);
    const double mean = sum / m;
    const double var_est = std::max(0.0, sum_sq / m - mean * mean) * m / (m - 1.0);
    const double scale = std::pow(2.0 * kPi, 0.5 * n) * std::pow(t_eff, -n);
    // Normal-approximation CI half-width at the requested confidence:
    // z = sqrt(2) erfinv(conf) is the two-sided standard normal quantile.
    const double z = std::sqrt(2.0) * boost::math::erf_inv(mc.confidence);
    QuadResult out;
    out.value = scale * mean;
    out.abs_error_estimate = scale * z * std::sqrt(var_est / m);
    out.evaluations = mc.samples;
    return out;
}

namespace {

// Mean of e^{-i u <e1, sigma>} over the unit sphere: the radial Fourier
// kernel. Omega_n(0) = 1.
double sphere_kernel(int n, double u) {
    const double au = std::abs(u);
    if (au < 1e-7) return 1.0 - u * u / (2.0 * n);
    switch (n) {
    case 1:
        return std::cos(u);
    case 2:
        return boost::math::cyl_bessel_j(0.0, au);
    case 3:
        return std::sin(au) / au;
    default: {
        const double nu = 0.5 * n - 1.0;
        return std::tgamma(0.5 * n) * std::pow(2.0 / au, nu) *
               boost::math::cyl_bessel_j(nu, au);
    }
    }
}

} // namespace

QuadResult sobolev_norm_gaussian(int n, SobolevParamsView params) {
    if (n < 1) throw std::invalid_argument("sobolev_norm_gaussian: n must be >= 1");
    if (!(params.beta > 0.0))
        throw std::invalid_argument("sobolev_norm_gaussian: beta must be > 0");
    if (!(params.p > 1.0 && params.p <= 2.0))
        throw std::invalid_argument("sobolev_norm_gaussian: p must be in (1,2]");

    const double beta = params.beta;
    const double p = params.p;
    const double area = geometry::sphere_area(n);

    // Symbol of the transform: (1 + r^2)^{beta/2} e^{-r^2/2}, and the radius
    // beyond which r^{n-1} * symbol is numerically zero.
    const auto symbol = [beta](double r) {
        return std::pow(1.0 + r * r, 0.5 * beta) * std::exp(-0.5 * r * r);
    };
    double r_in = 10.0;
    while (std::pow(r_in, n - 1) * symbol(r_in) > 1e-22 && r_in < 64.0) r_in += 2.0;

    std::uint64_t evals = 0;

    // h(rho) = (2 pi)^{-n} |S^{n-1}| int_0^inf r^{n-1} symbol(r) Omega_n(r rho) dr,
    // with oscillation-sized panels so Romberg sees smooth pieces.
    const double inv_norm = std::pow(2.0 * kPi, -n) * area;
    const auto h = [&](double rho) {
        const double panel = std::min(2.0, kPi / std::max(rho, 1.0));
        double acc = 0.0;
        double a = 0.0;
        while (a < r_in) {
            const double b = std::min(a + panel, r_in);
            auto pr = romberg(
                [&](double r) {
                    return std::pow(r, n - 1) * symbol(r) * sphere_kernel(n, r * rho);
                },
                a, b, 1e-11, 1e-14, 16);
            acc += pr.value;
            evals += pr.evals;
            a = b;
        }
        return inv_norm * acc;
    };

    // Scan h outward until it sinks below its own noise floor; sign changes
    // become breakpoints of the outer |h|^p integral. h decays like a
    // Gaussian, so past the floor only roundoff remains.
    const double h0 = h(0.0);
    std::vector<double> zeros;
    double h_max = std::abs(h0);
    double r_out = 4.0;
    double prev_rho = 0.0, prev_val = h0;
    int quiet = 0;
    for (double rho = 0.25; quiet < 4 && rho < 40.0; rho += 0.25) {
        const double val = h(rho);
        h_max = std::max(h_max, std::abs(val));
        if ((prev_val < 0.0) != (val < 0.0) && prev_val != 0.0) {
            double a = prev_rho, b = rho, fa = prev_val;
            for (int i = 0; i < 60; ++i) {
                const double mid = 0.5 * (a + b);
                const double fm = h(mid);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            zeros.push_back(0.5 * (a + b));
        }
        quiet = std::abs(val) < 1e-13 * h_max ? quiet + 1 : 0;
        r_out = rho;
        prev_rho = rho;
        prev_val = val;
    }

    RadialOptions opts;
    opts.breakpoints = zeros;
    opts.truncation_radius = r_out;
    // |h|^p with p < 2 has a fractional-power kink at each zero of h, which
    // caps the Romberg order at O(h^{p+1}); a few 1e-8 of relative slack
    // keeps those panels affordable while staying far inside the 1e-6
    // accuracy the norm consumers rely on.
    opts.rel_tol = p == 2.0 ? 1e-9 : 3e-8;
    opts.abs_tol = std::pow(1e-13 * h_max, p);
    QuadResult lp = radial_integral(
        [&](double rho) { return std::pow(std::abs(h(rho)), p); }, n, opts);

    QuadResult out;
    out.value = std::pow(lp.value, 1.0 / p);
    out.abs_error_estimate =
        lp.value > 0.0 ? out.value * (lp.abs_error_estimate / lp.value) / p : 0.0;
    out.evaluations = evals;
    return out;
}

} // namespace smallball::quadrature
