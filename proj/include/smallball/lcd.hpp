#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "smallball/geometry.hpp"
#include "smallball/matrix.hpp"

namespace smallball::lcd {

struct LcdParams {
    double alpha; // accuracy parameter, > 0
    double gamma; // proportionality parameter, in (0,1)

    LcdParams(double alpha_, double gamma_);
};

// Certified bracket for LCD_{alpha,gamma}(A) = inf{ |theta|_2 :
// d_2(A theta, Z^N) < min(gamma |A theta|_2, alpha) }. The search reports a
// bracket rather than a value: lower_certified is sound (no admissible theta
// below it), upper_witness is the norm of a verified admissible theta, or
// infinity when none was found within the search radius.
struct LcdResult {
    double lower_certified = 0.0;
    double upper_witness = std::numeric_limits<double>::infinity();
    std::optional<std::vector<double>> witness_theta;
    double resolution = 0.0; // grid step used
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

// sqrt(sum_i min_{m in Z} (v_i - m)^2): Euclidean distance to the integer
// lattice. At most sqrt(N)/2, periodic under integer shifts, even.
double dist_to_lattice(std::span<const double> v);

// f(theta) = d_2((z/t) A theta, Z^N), the level-set function of the
// integer-structure lemma. Requires z >= 1/(2 pi).
double f_theta(double z, double t, const Matrix& a, std::span<const double> theta);

// Exhaustive certified grid search over {|theta|_2 <= radius_max}, n <= 3.
// Certification: theta -> d_2(A theta, Z^N) and theta -> |A theta|_2 are both
// sigma_max(A)-Lipschitz, so a grid of step h covers the ball with radius
// h sqrt(n)/2 and the membership predicate relaxed by sigma_max * h sqrt(n)/2
// on both sides cannot miss an admissible point. Witness hits are refined
// locally and re-verified against the strict predicate before being returned.
LcdResult lcd_search(const Matrix& a, const LcdParams& params, double radius_max,
                     double grid_step);

// Re-checks an LcdResult's lower bound by an independent scan at a finer
// step. Returns false if any grid point below `lower` satisfies the relaxed
// membership predicate at the finer resolution.
bool verify_certificate(const Matrix& a, const LcdParams& params, double lower,
                        double grid_step);

// Monte Carlo estimate of gamma_n({theta : f(theta) <= s}) with a
// Clopper-Pearson interval. Shared samples per (n, seed) keep the estimate
// monotone in s.
geometry::GaussianMeasureEstimate gamma_ts_estimate(const Matrix& a, double z, double t,
                                                    double s, std::uint64_t samples,
                                                    std::uint64_t seed,
                                                    double confidence = 0.99);

// max over z in z_grid of E exp(-4 b f(Theta)^2), Theta ~ N(0, I_n), i.e. the
// normalized integral (2 pi)^{-n/2} integral e^{-4 b f^2 - |theta|^2/2}.
// A finite grid can only lower-bound the supremum over z >= 1/(2 pi).
double lo_rhs_integral(const Matrix& a, double t, double b,
                       const std::vector<double>& z_grid, std::uint64_t samples,
                       std::uint64_t seed);

// The absolute constant of the level-set measure bound
// gamma_n(T_s) <= (2 C t s / (gamma sqrt n))^n, fitted once on a verification
// grid and frozen. See lcd.cpp for the fitting grid.
double level_set_constant();

} // namespace smallball::lcd
