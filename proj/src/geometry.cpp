#include "smallball/geometry.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "smallball/quadrature.hpp"
#include "smallball/rng.hpp"

namespace smallball::geometry {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

QuasiNormSpec::QuasiNormSpec(double p_, int n_) : p(p_), n(n_) {
    if (!(p > 0.0)) throw std::invalid_argument("quasi-norm exponent p must be > 0");
    if (n < 1) throw std::invalid_argument("dimension n must be >= 1");
}

bool QuasiNormSpec::is_infinity() const { return std::isinf(p); }

double lp_quasinorm(std::span<const double> x, double p) {
    if (x.empty()) throw std::invalid_argument("lp_quasinorm: empty vector");
    if (!(p > 0.0)) throw std::invalid_argument("lp_quasinorm: p must be > 0");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double v : x) s += std::abs(v);
        return s;
    }
    // Scale by the max to keep |v|^p away from overflow/underflow for
    // extreme p.
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double quasinorm_constant(const QuasiNormSpec& spec) {
    if (spec.is_infinity()) return 1.0;
    return std::max(1.0, std::exp2(1.0 / spec.p - 1.0));
}

double lp_ball_volume(int n, double p) {
    if (n < 1) throw std::invalid_argument("lp_ball_volume: n must be >= 1");
    if (!(p > 0.0)) throw std::invalid_argument("lp_ball_volume: p must be > 0");
    double log_vol;
    if (std::isinf(p)) {
        log_vol = n * std::log(2.0);
    } else {
        log_vol = n * (std::log(2.0) + std::lgamma(1.0 + 1.0 / p)) -
                  std::lgamma(1.0 + n / p);
    }
    if (log_vol > std::log(std::numeric_limits<double>::max()))
        throw std::range_error("lp_ball_volume: volume overflows double for n=" +
                               std::to_string(n) + ", p=" + std::to_string(p));
    return std::exp(log_vol);
}

double sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("sphere_area: n must be >= 1");
    return 2.0 * std::exp(0.5 * n * std::log(kPi) - std::lgamma(0.5 * n));
}

GaussianMeasureEstimate gaussian_measure(const QuasiNormSpec& spec, double radius,
                                         std::uint64_t samples, std::uint64_t seed,
                                         double confidence) {
    if (!(radius > 0.0)) throw std::invalid_argument("gaussian_measure: radius must be > 0");

    GaussianMeasureEstimate est;
    if (spec.p == 2.0) {
        est.method = GaussianMeasureEstimate::Method::closed_form;
        est.value = std::isinf(radius)
                        ? 1.0
                        : boost::math::gamma_p(0.5 * spec.n, 0.5 * radius * radius);
        return est;
    }

    if (samples == 0)
        throw std::invalid_argument(
            "gaussian_measure: sample count required for p != 2 (no closed form)");

    // One shared standard-normal stream per (n, seed): nested bodies get
    // monotone measures without Monte Carlo noise.
    const int n = spec.n;
    std::uint64_t hits = 0;
    std::vector<double> x(static_cast<std::size_t>(n));
    rng::for_each_sample(seed, samples, [&](rng::Engine& eng) {
        for (int i = 0; i < n; i += 2) {
            double g0, g1;
            eng.next_gaussian_pair(g0, g1);
            x[static_cast<std::size_t>(i)] = g0;
            if (i + 1 < n) x[static_cast<std::size_t>(i) + 1] = g1;
        }
        if (lp_quasinorm(x, spec.p) <= radius) ++hits;
    });

    est.method = GaussianMeasureEstimate::Method::monte_carlo;
    est.value = static_cast<double>(hits) / static_cast<double>(samples);
    est.ci = quadrature::binomial_ci(hits, samples, confidence);
    est.samples = samples;
    return est;
}

} // namespace smallball::geometry
