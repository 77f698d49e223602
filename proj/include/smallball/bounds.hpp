#pragma once

#include <map>
#include <string>

namespace smallball::bounds {

// Smoothness order beta > 0 and integrability exponent p in (1, 2].
struct SobolevParams {
    double beta;
    double p;

    SobolevParams(double beta_, double p_);
    double p_conjugate() const { return p / (p - 1.0); }
};

// Evaluated bound plus the regime branch that produced it. `value` is the
// raw right-hand side, never clamped to 1.
struct BoundReport {
    std::string theorem;
    double value = 0.0;
    std::string branch;
    std::map<std::string, double> inputs;
};

// Regime labels shared by the weight-norm lemma and the M table of the
// Sobolev small-ball theorem. The first three live under pt^2 <= 2 and are
// split by the sign/size of n - beta p, the last three under pt^2 >= 2 and
// are split by pt^2 against n - beta p and n.
enum class WeightRegime {
    small_t_gamma,   // pt^2 <= 2,  n - beta p > 2
    small_t_log,     // pt^2 <= 2,  0 < n - beta p <= 2
    small_t_log_only,// pt^2 <= 2,  n - beta p <= 0
    large_t_gamma,   // pt^2 >= 2,  pt^2 <= n - beta p
    large_t_exp,     // pt^2 >= 2,  n - beta p <= pt^2 <= n
    large_t_power,   // pt^2 >= 2,  pt^2 >= n
};
const char* to_string(WeightRegime r);

// At exact regime boundaries `first_listed` takes the branch stated first in
// the source tables; `max_adjacent` evaluates every branch whose closed
// condition holds and returns the largest value (debug aid).
enum class TieBreak { first_listed, max_adjacent };

// P(||X|| <= t) <= |K| (t / 2pi)^n * integral |phi_X|.
BoundReport fourier_l1_bound(double t, int n, double vol_k, double l1_phi);

// Smoothed version: (|K| / gamma_n(K)) (C_K t / pi)^n * weighted_integral,
// where weighted_integral = integral |phi_X(xi)| e^{-t^2 |xi|^2 / 2} dxi.
BoundReport smoothed_bound(double t, int n, double vol_k, double gamma_k, double c_k,
                           double weighted_integral);

// Upper tail of the gamma integral: for x >= alpha >= 1,
// integral_x^inf r^{alpha-1} e^{-r} dr <= 2^{alpha+1} x^alpha e^{-x} / alpha.
double gamma_tail_bound(double x, double alpha);

// Piecewise bound on ||(1+|xi|^2)^{-beta/2} e^{-t^2 |xi|^2/2}||_{L_p}^p
// normalized by |S^{n-1}|.
BoundReport weight_lp_norm_bound(const SobolevParams& params, int n, double t,
                                 TieBreak tie = TieBreak::first_listed);

// The factor M(beta, p, n, t) of the Sobolev small-ball bound. Identity:
// M = t^n (|S^{n-1}| * weight_lp_norm_bound)^{1/p}, branch by branch.
BoundReport sobolev_M(const SobolevParams& params, int n, double t,
                      TieBreak tie = TieBreak::first_listed);

// (C_K / pi)^n (|K| / gamma_n(K)) ||f_X||_{beta,p} M(beta, p, n, t).
BoundReport sobolev_small_ball_bound(double t, int n, double vol_k, double gamma_k,
                                     double c_k, double sobolev_norm,
                                     const SobolevParams& params,
                                     TieBreak tie = TieBreak::first_listed);

// P(||X|| <= t) <= |K| t^n ||f_X||_inf.
BoundReport sup_density_bound(double t, int n, double vol_k, double sup_density);

// beta p > n regime: |S^{n-1}| (1/(beta p - n) + 1/n)^{1/p} |K| t^n ||f||_{beta,p}.
BoundReport high_smoothness_bound(double t, int n, double vol_k, double sobolev_norm,
                                  const SobolevParams& params);

// Littlewood-Offord type bound for weighted sums with spread parameter b:
// (|K| / gamma_n(K)) (C_K / pi)^n ((c_abs t / (gamma sqrt b))^n + exp(-b alpha^2)).
// c_abs >= 1 exposes the absolute constant the proof carries on the power
// term; the statement as displayed corresponds to c_abs = 1.
BoundReport lo_bound(double t, int n, double vol_k, double gamma_k, double c_k,
                     double b, double gamma, double alpha, double c_abs = 1.0);

} // namespace smallball::bounds
