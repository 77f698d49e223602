#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

namespace smallball::geometry {

// Descriptor of an l_p quasi-norm on R^n, 0 < p <= infinity. For p >= 1 this
// is a genuine norm; for p < 1 the triangle inequality only holds up to the
// constant 2^{1/p-1}.
struct QuasiNormSpec {
    double p;
    int n;

    QuasiNormSpec(double p_, int n_);

    bool is_infinity() const;
};

struct GaussianMeasureEstimate {
    double value = 0.0;
    enum class Method { closed_form, monte_carlo } method = Method::closed_form;
    std::optional<std::pair<double, double>> ci;
    std::optional<std::uint64_t> samples;
};

// (sum |x_j|^p)^{1/p}; max |x_j| for p = infinity.
double lp_quasinorm(std::span<const double> x, double p);

// Sharp quasi-triangle constant max(1, 2^{1/p-1}).
double quasinorm_constant(const QuasiNormSpec& spec);

// Exact l_p unit-ball volume (2 Gamma(1+1/p))^n / Gamma(1+n/p); 2^n for
// p = infinity. Throws std::range_error if the value overflows a double.
double lp_ball_volume(int n, double p);

// Surface area of the unit Euclidean sphere S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

// Gaussian measure gamma_n(radius * K) of the scaled l_p unit ball.
// p = 2 uses the chi-square closed form; everything else is Monte Carlo with
// a Clopper-Pearson interval at the given confidence. For a fixed (n, seed)
// all radii are evaluated against the same sample stream, so the estimate is
// monotone in the radius by construction.
GaussianMeasureEstimate gaussian_measure(const QuasiNormSpec& spec, double radius,
                                         std::uint64_t samples = 0, std::uint64_t seed = 0,
                                         double confidence = 0.99);

} // namespace smallball::geometry
