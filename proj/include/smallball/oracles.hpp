#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smallball/matrix.hpp"

namespace smallball::oracles {

// Outcome of one verification suite: how many grid points were checked, how
// many violated their inequality, and the tightest margin seen (relative
// slack (bound - value) / bound, or the worst deviation for identity checks).
struct SuiteResult {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    double worst_margin = 0.0;
    std::string worst_case;
    std::vector<std::string> failure_lines;

    bool pass() const { return failures == 0; }
    std::string summary() const;
};

// Radial quadrature of the weight integral vs the piecewise lemma bound,
// over a grid that hits all six regimes including their boundaries.
SuiteResult lemma22_suite();

// sobolev_M == t^n (|S^{n-1}| weight_lp_norm_bound)^{1/p} to 1e-12 relative
// on the same grid.
SuiteResult m_identity_suite();

// Numeric upper incomplete gamma vs the closed-form tail bound.
SuiteResult prop23_suite();

// Level-set measure bound gamma_n(T_s) <= (2 C t s / (gamma sqrt n))^n with
// the frozen constant C = lcd::level_set_constant().
SuiteResult gamma_ts_suite(std::uint64_t seed = 2024);

// Integer-structure domination for the shipped Littlewood-Offord fixture:
// (|K|/gamma_n(K)) (C_K/pi)^n max_z E e^{-4 b f^2} >= MC small-ball estimate.
// A finite z grid lower-bounds the supremum, so on failure the grid is
// enlarged once before the point is declared a violation.
SuiteResult lo_lemma_suite(std::uint64_t seed = 2024);

// Property suites.
SuiteResult quasi_triangle_suite(std::uint64_t seed = 7);
SuiteResult lattice_distance_suite(std::uint64_t seed = 7);
SuiteResult ci_coverage_suite(std::uint64_t seed = 7);
SuiteResult csv_determinism_suite();

// Fitting helper for the level-set constant: largest C required across the
// verification grid (upper confidence limits included). The frozen value in
// lcd::level_set_constant() must dominate this.
double fit_level_set_constant(std::uint64_t seed, std::string* detail = nullptr);

// 6x2 coefficient matrix for the Littlewood-Offord scenarios: three stacked
// plane rotations, A^T A = 3 I, so |A theta| = sqrt(3) |theta| exactly and
// the smallest singular value is sqrt(3).
Matrix lo_fixture();

} // namespace smallball::oracles
