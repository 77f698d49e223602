#include "smallball/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "smallball/errors.hpp"
#include "smallball/geometry.hpp"

namespace smallball::bounds {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
}

// Regimes whose closed condition (strict inequalities relaxed to non-strict)
// holds at (beta, p, n, t), in the order the tables list them. At an exact
// boundary two conditions hold and the front entry is the first-listed one;
// away from boundaries exactly one entry survives.
std::vector<WeightRegime> applicable_regimes(double bp, double p, int n, double t) {
    const double pt2 = p * t * t;
    const double gap = n - bp;
    std::vector<WeightRegime> out;
    if (pt2 <= 2.0) {
        if (gap >= 2.0) out.push_back(WeightRegime::small_t_gamma);
        if (gap >= 0.0 && gap <= 2.0) out.push_back(WeightRegime::small_t_log);
        if (gap <= 0.0) out.push_back(WeightRegime::small_t_log_only);
    }
    if (pt2 >= 2.0) {
        if (pt2 <= gap) out.push_back(WeightRegime::large_t_gamma);
        if (pt2 >= gap && pt2 <= n) out.push_back(WeightRegime::large_t_exp);
        if (pt2 >= n) out.push_back(WeightRegime::large_t_power);
    }
    return out;
}

// The lemma's bound on ||(1+|xi|^2)^{-beta/2} e^{-t^2|xi|^2/2}||_p^p / |S^{n-1}|
// in a fixed regime.
double weight_bound_in(WeightRegime r, double bp, double p, int n, double t) {
    const double pt2 = p * t * t;
    const double gap = n - bp;
    switch (r) {
    case WeightRegime::small_t_gamma:
        return std::tgamma(0.5 * gap) * std::pow(2.0 / pt2, 0.5 * gap);
    case WeightRegime::small_t_log:
        return std::log(2.0 * kE / pt2) * std::pow(2.0 / pt2, 0.5 * gap);
    case WeightRegime::small_t_log_only:
        return std::log(2.0 * kE / pt2);
    case WeightRegime::large_t_gamma:
        return 2.0 * std::exp(-pt2 / 18.0) +
               std::pow(2.0 / pt2, 0.5 * gap) * std::tgamma(0.5 * gap);
    case WeightRegime::large_t_exp:
        return 3.0 * std::exp(-pt2 / 18.0);
    case WeightRegime::large_t_power:
        return std::pow((2.0 * n / pt2) * std::log(kE * pt2 / n), 0.5 * n);
    }
    return 0.0;
}

// M(beta, p, n, t) in a fixed regime, exactly as the theorem displays it.
double m_value_in(WeightRegime r, double beta, double p, int n, double t) {
    const double pt2 = p * t * t;
    const double bp = beta * p;
    const double gap = n - bp;
    const double area = geometry::sphere_area(n);
    const double area_p = std::pow(area, 1.0 / p);
    const double p_conj = p / (p - 1.0);
    switch (r) {
    case WeightRegime::small_t_gamma:
        return std::pow(2.0, 0.5 * n / p - 0.5 * beta) * area_p *
               std::pow(std::tgamma(0.5 * gap), 1.0 / p) *
               std::pow(p, 0.5 * beta - 0.5 * n / p) * std::pow(t, beta + n / p_conj);
    case WeightRegime::small_t_log:
        return std::pow(2.0, 0.5 * n / p - 0.5 * beta) * area_p *
               std::pow(std::log(2.0 * kE / pt2), 1.0 / p) *
               std::pow(p, 0.5 * beta - 0.5 * n / p) * std::pow(t, beta + n / p_conj);
    case WeightRegime::small_t_log_only:
        return area_p * std::pow(std::log(2.0 * kE / pt2), 1.0 / p) * std::pow(t, n);
    case WeightRegime::large_t_gamma:
        return area_p *
               std::pow(2.0 * std::exp(-pt2 / 18.0) +
                            std::pow(2.0 / pt2, 0.5 * gap) * std::tgamma(0.5 * gap),
                        1.0 / p) *
               std::pow(t, n);
    case WeightRegime::large_t_exp:
        return std::pow(3.0, 1.0 / p) * area_p * std::exp(-t * t / 18.0) * std::pow(t, n);
    case WeightRegime::large_t_power:
        return area_p *
               std::pow((2.0 * n / pt2) * std::log(kE * pt2 / n), 0.5 * n / p) *
               std::pow(t, n);
    }
    return 0.0;
}

template <typename Eval>
std::pair<double, std::string> pick_regime(const std::vector<WeightRegime>& regimes,
                                           TieBreak tie, Eval&& eval) {
    if (tie == TieBreak::first_listed || regimes.size() == 1)
        return {eval(regimes.front()), to_string(regimes.front())};
    double best = -std::numeric_limits<double>::infinity();
    const char* label = "";
    for (WeightRegime r : regimes) {
        const double v = eval(r);
        if (v > best) {
            best = v;
            label = to_string(r);
        }
    }
    return {best, std::string("max:") + label};
}

} // namespace

SobolevParams::SobolevParams(double beta_, double p_) : beta(beta_), p(p_) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("p must be in (1,2]");
}

// Labels stay comma-free so they can sit in a CSV field unquoted.
const char* to_string(WeightRegime r) {
    switch (r) {
    case WeightRegime::small_t_gamma: return "pt2<=2 & n-bp>2";
    case WeightRegime::small_t_log: return "pt2<=2 & 0<n-bp<=2";
    case WeightRegime::small_t_log_only: return "pt2<=2 & n-bp<=0";
    case WeightRegime::large_t_gamma: return "pt2>=2 & pt2<=n-bp";
    case WeightRegime::large_t_exp: return "pt2>=2 & n-bp<=pt2<=n";
    case WeightRegime::large_t_power: return "pt2>=2 & pt2>=n";
    }
    return "?";
}

BoundReport fourier_l1_bound(double t, int n, double vol_k, double l1_phi) {
    require_positive(t, "t");
    require_positive(vol_k, "volK");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(l1_phi > 0.0)) throw std::invalid_argument("l1_phi must be > 0");
    if (std::isinf(l1_phi))
        throw not_applicable_error(
            "fourier_l1_bound: integral |phi| diverges; use smoothed_bound");
    BoundReport rep;
    rep.theorem = "fourier-l1";
    rep.branch = "integrable";
    rep.value = vol_k * std::pow(t / (2.0 * kPi), n) * l1_phi;
    rep.inputs = {{"t", t}, {"n", double(n)}, {"volK", vol_k}, {"l1_phi", l1_phi}};
    return rep;
}

BoundReport smoothed_bound(double t, int n, double vol_k, double gamma_k, double c_k,
                           double weighted_integral) {
    require_positive(t, "t");
    require_positive(vol_k, "volK");
    require_positive(weighted_integral, "weighted_integral");
    if (!(gamma_k > 0.0 && gamma_k <= 1.0))
        throw std::invalid_argument("gammaK must be in (0,1]");
    if (!(c_k >= 1.0)) throw std::invalid_argument("C_K must be >= 1");
    BoundReport rep;
    rep.theorem = "smoothed";
    rep.branch = "smoothed";
    rep.value = (vol_k / gamma_k) * std::pow(c_k * t / kPi, n) * weighted_integral;
    rep.inputs = {{"t", t},     {"n", double(n)},          {"volK", vol_k},
                  {"gammaK", gamma_k}, {"C_K", c_k},       {"weighted_integral", weighted_integral}};
    return rep;
}

double gamma_tail_bound(double x, double alpha) {
    if (!(alpha >= 1.0)) throw std::domain_error("gamma_tail_bound: need alpha >= 1");
    if (!(x >= alpha)) throw std::domain_error("gamma_tail_bound: need x >= alpha");
    return std::pow(2.0, alpha + 1.0) * std::pow(x, alpha) * std::exp(-x) / alpha;
}

BoundReport weight_lp_norm_bound(const SobolevParams& params, int n, double t, TieBreak tie) {
    require_positive(t, "t");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double bp = params.beta * params.p;
    const auto regimes = applicable_regimes(bp, params.p, n, t);
    auto [value, branch] = pick_regime(regimes, tie, [&](WeightRegime r) {
        return weight_bound_in(r, bp, params.p, n, t);
    });
    BoundReport rep;
    rep.theorem = "weight-lp-norm";
    rep.value = value;
    rep.branch = branch;
    rep.inputs = {{"beta", params.beta}, {"p", params.p}, {"n", double(n)}, {"t", t}};
    return rep;
}

BoundReport sobolev_M(const SobolevParams& params, int n, double t, TieBreak tie) {
    require_positive(t, "t");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double bp = params.beta * params.p;
    const auto regimes = applicable_regimes(bp, params.p, n, t);
    auto [value, branch] = pick_regime(regimes, tie, [&](WeightRegime r) {
        return m_value_in(r, params.beta, params.p, n, t);
    });
    BoundReport rep;
    rep.theorem = "sobolev-M";
    rep.value = value;
    rep.branch = branch;
    rep.inputs = {{"beta", params.beta}, {"p", params.p}, {"n", double(n)}, {"t", t}};
    return rep;
}

BoundReport sobolev_small_ball_bound(double t, int n, double vol_k, double gamma_k,
                                     double c_k, double sobolev_norm,
                                     const SobolevParams& params, TieBreak tie) {
    require_positive(t, "t");
    require_positive(vol_k, "volK");
    if (!(gamma_k > 0.0 && gamma_k <= 1.0))
        throw std::invalid_argument("gammaK must be in (0,1]");
    if (!(c_k >= 1.0)) throw std::invalid_argument("C_K must be >= 1");
    if (sobolev_norm < 0.0) throw std::invalid_argument("sobolev_norm must be >= 0");
    BoundReport m = sobolev_M(params, n, t, tie);
    BoundReport rep;
    rep.theorem = "sobolev";
    rep.branch = m.branch;
    rep.value = std::pow(c_k / kPi, n) * (vol_k / gamma_k) * sobolev_norm * m.value;
    rep.inputs = {{"t", t},        {"n", double(n)},   {"volK", vol_k},
                  {"gammaK", gamma_k}, {"C_K", c_k},   {"sobolev_norm", sobolev_norm},
                  {"beta", params.beta}, {"p", params.p}};
    return rep;
}

BoundReport sup_density_bound(double t, int n, double vol_k, double sup_density) {
    if (t < 0.0) throw std::invalid_argument("t must be >= 0");
    require_positive(vol_k, "volK");
    require_positive(sup_density, "sup_density");
    BoundReport rep;
    rep.theorem = "sup-density";
    rep.branch = "sup-density";
    rep.value = vol_k * std::pow(t, n) * sup_density;
    rep.inputs = {{"t", t}, {"n", double(n)}, {"volK", vol_k}, {"sup_density", sup_density}};
    return rep;
}

BoundReport high_smoothness_bound(double t, int n, double vol_k, double sobolev_norm,
                                  const SobolevParams& params) {
    require_positive(t, "t");
    require_positive(vol_k, "volK");
    if (sobolev_norm < 0.0) throw std::invalid_argument("sobolev_norm must be >= 0");
    const double bp = params.beta * params.p;
    if (!(bp > n))
        throw not_applicable_error(
            "high_smoothness_bound: requires beta * p > n (the n - beta p < 0 case)");
    BoundReport rep;
    rep.theorem = "high-smoothness";
    rep.branch = "n-bp<0";
    rep.value = geometry::sphere_area(n) *
                std::pow(1.0 / (bp - n) + 1.0 / n, 1.0 / params.p) * vol_k *
                std::pow(t, n) * sobolev_norm;
    rep.inputs = {{"t", t},           {"n", double(n)},       {"volK", vol_k},
                  {"sobolev_norm", sobolev_norm}, {"beta", params.beta}, {"p", params.p}};
    return rep;
}

BoundReport lo_bound(double t, int n, double vol_k, double gamma_k, double c_k, double b,
                     double gamma, double alpha, double c_abs) {
    require_positive(t, "t");
    require_positive(vol_k, "volK");
    require_positive(alpha, "alpha");
    if (!(gamma_k > 0.0 && gamma_k <= 1.0))
        throw std::invalid_argument("gammaK must be in (0,1]");
    if (!(c_k >= 1.0)) throw std::invalid_argument("C_K must be >= 1");
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("b must be in (0,1)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0,1)");
    if (!(c_abs >= 1.0)) throw std::invalid_argument("C_abs must be >= 1");
    BoundReport rep;
    rep.theorem = "lo";
    rep.branch = "lo";
    rep.value = (vol_k / gamma_k) * std::pow(c_k / kPi, n) *
                (std::pow(c_abs * t / (gamma * std::sqrt(b)), n) +
                 std::exp(-b * alpha * alpha));
    rep.inputs = {{"t", t},       {"n", double(n)}, {"volK", vol_k}, {"gammaK", gamma_k},
                  {"C_K", c_k},   {"b", b},         {"gamma", gamma}, {"alpha", alpha},
                  {"C_abs", c_abs}};
    return rep;
}

} // namespace smallball::bounds
