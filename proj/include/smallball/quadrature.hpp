#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "smallball/geometry.hpp"
#include "smallball/models.hpp"

namespace smallball::quadrature {

// Empirical probability with an exact (Clopper-Pearson) two-sided binomial
// confidence interval.
struct McEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    std::uint64_t seed = 0;
    double confidence = 0.99;
};

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::uint64_t evaluations = 0;
};

// Exact two-sided binomial interval via the beta-quantile characterization.
// ci_low = 0 when hits = 0 and ci_high = 1 when hits = samples.
std::pair<double, double> binomial_ci(std::uint64_t hits, std::uint64_t samples,
                                      double confidence);

// Counts samples of the model with lp_quasinorm(x, p) <= t. Shared sample
// streams per (model, seed) make the estimate monotone in t exactly.
McEstimate estimate_small_ball(const models::VectorModel& model,
                               const geometry::QuasiNormSpec& norm, double t,
                               std::uint64_t samples, std::uint64_t seed,
                               double confidence = 0.99);

// Same, against a caller-supplied norm evaluation.
McEstimate estimate_small_ball(const models::VectorModel& model,
                               const std::function<double(std::span<const double>)>& norm,
                               double t, std::uint64_t samples, std::uint64_t seed,
                               double confidence = 0.99);

struct RadialOptions {
    // Interior points where the integrand is only piecewise smooth.
    std::vector<double> breakpoints;
    // When set, g carries a factor exp(-decay * r^2); the tail past the
    // truncation radius is then bounded analytically (through the incomplete
    // gamma tail estimate) instead of by doubling the domain.
    std::optional<double> gaussian_decay;
    // Hard truncation: integrate [0, truncation_radius] only. The caller
    // asserts the tail is negligible (used when g past the radius is below
    // the evaluation noise floor).
    std::optional<double> truncation_radius;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
};

// |S^{n-1}| * integral_0^inf r^{n-1} g(r) dr for a radial profile g.
QuadResult radial_integral(const std::function<double(double)>& g, int n,
                           const RadialOptions& opts = {});

struct McIntegralOptions {
    std::uint64_t samples = 200000;
    std::uint64_t seed = 0x5ba11;
    double confidence = 0.99;
};

// integral |phi_X(xi)| exp(-t^2 |xi|^2 / 2) dxi. Radial quadrature whenever
// |phi_X| has a radial profile (Gaussian layers, point masses, any n = 1
// model); Gaussian importance sampling with the weight as proposal otherwise,
// with the CI half-width reported as the error estimate. t = 0 computes the
// plain L1 norm of phi and throws not_applicable_error when it diverges.
QuadResult weighted_charfun_integral(const models::VectorModel& model, double t,
                                     const McIntegralOptions& mc = {});

// Sobolev norm parameters live in bounds.hpp; forward declare to avoid a
// header cycle.
struct SobolevParamsView {
    double beta;
    double p;
};

// || F^{-1}((1 + |xi|^2)^{beta/2} fhat) ||_{L_p} for the standard Gaussian
// density on R^n, with the convention fhat(xi) = integral e^{i<xi,x>} f dx
// and F^{-1} g(x) = (2 pi)^{-n} integral e^{-i<x,xi>} g(xi) dxi. The inverse
// transform of the radial symbol is computed on an adaptive radial grid and
// the L_p norm by radial quadrature split at the sign changes of the kernel.
QuadResult sobolev_norm_gaussian(int n, SobolevParamsView params);

} // namespace smallball::quadrature
