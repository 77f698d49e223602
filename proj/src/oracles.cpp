#include "smallball/oracles.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "smallball/bounds.hpp"
#include "smallball/experiment.hpp"
#include "smallball/geometry.hpp"
#include "smallball/lcd.hpp"
#include "smallball/quadrature.hpp"
#include "smallball/rng.hpp"
#include "smallball/serialize.hpp"

namespace smallball::oracles {

namespace {

constexpr double kPi = std::numbers::pi;

struct GridPoint {
    int n;
    double beta, p, t;
};

// Grid for the weight-norm lemma: every (n, beta, p) combination contributes
// t values placed in each reachable regime plus the exact boundaries
// pt^2 = 2, pt^2 = n and pt^2 = n - beta p.
std::vector<GridPoint> lemma22_grid() {
    std::vector<GridPoint> grid;
    for (int n : {1, 2, 3, 5}) {
        for (double beta : {0.1, 1.0, 2.0, 4.0}) {
            for (double p : {1.1, 1.5, 2.0}) {
                const double gap = n - beta * p;
                std::vector<double> pt2s{0.09, 1.0, 2.0, 2.0 * n};
                if (n >= 2) pt2s.push_back(double(n));
                if (gap >= 2.0) {
                    pt2s.push_back(gap);                   // boundary pt^2 = n - bp
                    if (gap > 2.0) pt2s.push_back(0.5 * (2.0 + gap)); // interior of R4
                }
                const double r5_lo = std::max(2.0, gap);
                if (r5_lo < n) pt2s.push_back(0.5 * (r5_lo + n)); // interior of R5
                std::sort(pt2s.begin(), pt2s.end());
                pt2s.erase(std::unique(pt2s.begin(), pt2s.end(),
                                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                           pt2s.end());
                for (double pt2 : pt2s)
                    grid.push_back({n, beta, p, std::sqrt(pt2 / p)});
            }
        }
    }
    return grid;
}

std::string describe(const GridPoint& g) {
    std::ostringstream os;
    os << "(n=" << g.n << ", beta=" << g.beta << ", p=" << g.p << ", t=" << g.t << ")";
    return os.str();
}

void note_margin(SuiteResult& res, double margin, const std::string& where) {
    if (res.checked == 1 || margin < res.worst_margin) {
        res.worst_margin = margin;
        res.worst_case = where;
    }
}

} // namespace

std::string SuiteResult::summary() const {
    std::ostringstream os;
    os << name << ": " << (pass() ? "PASS" : "FAIL") << " checked=" << checked
       << " failures=" << failures << " worst_margin=" << worst_margin;
    if (!worst_case.empty()) os << " at " << worst_case;
    return os.str();
}

SuiteResult lemma22_suite() {
    SuiteResult res;
    res.name = "lemma22";
    for (const auto& g : lemma22_grid()) {
        const double bp = g.beta * g.p;
        const double half_pt2 = 0.5 * g.p * g.t * g.t;
        quadrature::RadialOptions opts;
        opts.breakpoints = {1.0};
        opts.gaussian_decay = half_pt2;
        opts.rel_tol = 1e-9;
        opts.abs_tol = 1e-14;
        const auto quad = quadrature::radial_integral(
            [&](double r) {
                const double weight = r <= 1.0 ? 1.0 : std::pow(r, -bp);
                return weight * std::exp(-half_pt2 * r * r);
            },
            g.n, opts);
        const double integral = quad.value / geometry::sphere_area(g.n);
        const double integral_err = quad.abs_error_estimate / geometry::sphere_area(g.n);
        const double bound =
            bounds::weight_lp_norm_bound(bounds::SobolevParams(g.beta, g.p), g.n, g.t).value;
        ++res.checked;
        const double margin = (bound - integral) / bound;
        note_margin(res, margin, describe(g));
        if (integral > bound + std::max(1e-12 * bound, integral_err)) {
            ++res.failures;
            res.failure_lines.push_back(describe(g) + " integral=" +
                                        serialize::format_double(integral) + " > bound=" +
                                        serialize::format_double(bound));
        }
    }
    return res;
}

SuiteResult m_identity_suite() {
    SuiteResult res;
    res.name = "m-identity";
    res.worst_margin = 0.0;
    for (const auto& g : lemma22_grid()) {
        const bounds::SobolevParams params(g.beta, g.p);
        const auto w = bounds::weight_lp_norm_bound(params, g.n, g.t);
        const auto m = bounds::sobolev_M(params, g.n, g.t);
        const double rebuilt =
            std::pow(g.t, g.n) * std::pow(geometry::sphere_area(g.n) * w.value, 1.0 / g.p);
        const double dev = std::abs(m.value - rebuilt) / std::max(m.value, rebuilt);
        ++res.checked;
        if (dev > res.worst_margin) {
            res.worst_margin = dev;
            res.worst_case = describe(g);
        }
        if (dev > 1e-12 || w.branch != m.branch) {
            ++res.failures;
            res.failure_lines.push_back(describe(g) + " dev=" + serialize::format_double(dev) +
                                        " branches=" + w.branch + " / " + m.branch);
        }
    }
    return res;
}

SuiteResult prop23_suite() {
    SuiteResult res;
    res.name = "prop23";
    for (double x : {1.0, 2.0, 5.0, 10.0, 20.0}) {
        for (double alpha : {1.0, 1.5, 2.0, 3.0, 5.0}) {
            if (x < alpha) continue;
            const double truth = std::tgamma(alpha) * boost::math::gamma_q(alpha, x);
            const double bound = bounds::gamma_tail_bound(x, alpha);
            ++res.checked;
            std::ostringstream os;
            os << "(x=" << x << ", alpha=" << alpha << ")";
            note_margin(res, (bound - truth) / bound, os.str());
            if (truth > bound * (1.0 + 1e-12)) {
                ++res.failures;
                res.failure_lines.push_back(os.str() + " tail=" +
                                            serialize::format_double(truth) + " > bound=" +
                                            serialize::format_double(bound));
            }
        }
    }
    return res;
}

namespace {

struct LevelSetCase {
    int n;
    double t, s, z;
    double estimate_hi; // Clopper-Pearson upper limit
};

// Admissible (t, s, z) combinations for identity matrices in n = 1, 2:
// t >= sqrt(n) / LCD certified bracket, s <= min(alpha/2, gamma sqrt(n)/(4t)).
std::vector<LevelSetCase> level_set_grid(std::uint64_t seed) {
    std::vector<LevelSetCase> cases;
    const lcd::LcdParams params(1.0, 0.5);
    for (int n : {1, 2}) {
        const Matrix a = Matrix::identity(static_cast<std::size_t>(n));
        const auto bracket = lcd::lcd_search(a, params, 2.0, 1e-3);
        const double t_min = std::sqrt(double(n)) / bracket.lower_certified;
        for (double tf : {1.01, 1.5, 3.0}) {
            const double t = tf * t_min;
            const double s_max = std::min(0.5 * params.alpha, 0.5 * std::sqrt(double(n)) / (4.0 * t));
            for (double sf : {0.3, 0.6, 1.0}) {
                const double s = sf * s_max;
                for (double z : {1.0 / (2.0 * kPi), 0.5, 1.0, 2.0}) {
                    const auto est = lcd::gamma_ts_estimate(a, z, t, s, 200000,
                                                            rng::derive_seed(seed, cases.size()));
                    cases.push_back({n, t, s, z, est.ci ? est.ci->second : est.value});
                }
            }
        }
    }
    return cases;
}

} // namespace

double fit_level_set_constant(std::uint64_t seed, std::string* detail) {
    double c_needed = 0.0;
    std::string worst;
    for (const auto& lc : level_set_grid(seed)) {
        // Solve (2 C t s / (gamma sqrt n))^n >= estimate for C, gamma = 1/2.
        const double c = 0.5 * std::sqrt(double(lc.n)) *
                         std::pow(lc.estimate_hi, 1.0 / lc.n) / (2.0 * lc.t * lc.s);
        if (c > c_needed) {
            c_needed = c;
            std::ostringstream os;
            os << "(n=" << lc.n << ", t=" << lc.t << ", s=" << lc.s << ", z=" << lc.z << ")";
            worst = os.str();
        }
    }
    if (detail) *detail = worst;
    return c_needed;
}

SuiteResult gamma_ts_suite(std::uint64_t seed) {
    SuiteResult res;
    res.name = "gamma-ts";
    const double c = lcd::level_set_constant();
    for (const auto& lc : level_set_grid(seed)) {
        const double bound =
            std::pow(2.0 * c * lc.t * lc.s / (0.5 * std::sqrt(double(lc.n))), lc.n);
        ++res.checked;
        std::ostringstream os;
        os << "(n=" << lc.n << ", t=" << lc.t << ", s=" << lc.s << ", z=" << lc.z << ")";
        note_margin(res, (bound - lc.estimate_hi) / std::max(bound, 1e-300), os.str());
        if (lc.estimate_hi > bound) {
            ++res.failures;
            res.failure_lines.push_back(os.str() + " gamma(T_s) ci_high=" +
                                        serialize::format_double(lc.estimate_hi) + " > bound=" +
                                        serialize::format_double(bound));
        }
    }
    return res;
}

Matrix lo_fixture() {
    // Three stacked plane rotations; angles chosen away from rational
    // multiples of pi so A theta stays far from the integer lattice for
    // small theta.
    const double phis[3] = {0.4, 1.3, 2.2};
    Matrix a(6, 2);
    for (int k = 0; k < 3; ++k) {
        const double c = std::cos(phis[k]), s = std::sin(phis[k]);
        a(2 * k, 0) = c;
        a(2 * k, 1) = -s;
        a(2 * k + 1, 0) = s;
        a(2 * k + 1, 1) = c;
    }
    return a;
}

SuiteResult lo_lemma_suite(std::uint64_t seed) {
    SuiteResult res;
    res.name = "lo-lemma";

    const Matrix a = lo_fixture();
    const auto model = models::VectorModel::weighted_sum(a, models::AtomLaw::two_point(1.5));
    const double b = models::spread_parameter(model.atoms());
    const lcd::LcdParams params(3.0, 0.5);
    const auto bracket = lcd::lcd_search(a, params, 2.0, 1e-3);
    const double t_min = std::sqrt(2.0) / bracket.lower_certified;

    std::vector<double> z_grid{1.0 / (2.0 * kPi), 0.5, 1.0, 2.0, 4.0};
    const std::vector<double> z_extension{0.25, 0.3, 8.0, 16.0, 32.0};

    for (double pnorm : {2.0, 1.0}) {
        const geometry::QuasiNormSpec norm(pnorm, 2);
        const double vol_k = geometry::lp_ball_volume(2, pnorm);
        const double c_k = geometry::quasinorm_constant(norm);
        const double gamma_k =
            geometry::gaussian_measure(norm, 1.0, 1000000, rng::derive_seed(seed, 91)).value;
        const double pref = (vol_k / gamma_k) * std::pow(c_k / kPi, 2);
        for (double tf : {1.0, 2.0, 4.0}) {
            const double t = tf * t_min;
            const double p_hat =
                quadrature::estimate_small_ball(model, norm, t, 1000000, seed).p_hat;
            double rhs =
                pref * lcd::lo_rhs_integral(a, t, b, z_grid, 100000, rng::derive_seed(seed, 17));
            bool enlarged = false;
            if (rhs < p_hat) {
                // The z grid only lower-bounds the supremum; enlarge it once
                // before calling the point a violation.
                std::vector<double> wide = z_grid;
                wide.insert(wide.end(), z_extension.begin(), z_extension.end());
                rhs = pref *
                      lcd::lo_rhs_integral(a, t, b, wide, 100000, rng::derive_seed(seed, 17));
                enlarged = true;
            }
            ++res.checked;
            std::ostringstream os;
            os << "(lp=" << pnorm << ", t=" << t << (enlarged ? ", z-grid enlarged" : "") << ")";
            note_margin(res, (rhs - p_hat) / std::max(rhs, 1e-300), os.str());
            if (p_hat > rhs) {
                ++res.failures;
                res.failure_lines.push_back(os.str() + " p_hat=" +
                                            serialize::format_double(p_hat) + " > rhs=" +
                                            serialize::format_double(rhs));
            }
        }
    }
    return res;
}

SuiteResult quasi_triangle_suite(std::uint64_t seed) {
    SuiteResult res;
    res.name = "quasi-triangle";
    res.worst_margin = std::numeric_limits<double>::infinity();
    const double ps[] = {1.0 / 3.0, 0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()};
    std::vector<double> x, y, sum;
    for (double p : ps) {
        for (int n = 1; n <= 5; ++n) {
            const geometry::QuasiNormSpec spec(p, n);
            const double c_k = geometry::quasinorm_constant(spec);
            x.assign(n, 0.0);
            y.assign(n, 0.0);
            sum.assign(n, 0.0);
            const std::uint64_t p_tag =
                std::isinf(p) ? 997 : static_cast<std::uint64_t>(p * 1000);
            rng::Engine eng(seed, static_cast<std::uint64_t>(n) * 131 + p_tag);
            for (int rep = 0; rep < 100000; ++rep) {
                for (int i = 0; i < n; ++i) {
                    // Heavy-tailed coordinates stress the inequality harder
                    // than plain Gaussians.
                    const double gx = eng.next_gaussian();
                    const double gy = eng.next_gaussian();
                    x[i] = gx * std::exp(2.0 * eng.next_uniform() - 1.0);
                    y[i] = gy * std::exp(2.0 * eng.next_uniform() - 1.0);
                    sum[i] = x[i] + y[i];
                }
                const double lhs = geometry::lp_quasinorm(sum, p);
                const double rhs = c_k * (geometry::lp_quasinorm(x, p) + geometry::lp_quasinorm(y, p));
                ++res.checked;
                if (rhs > 0.0) note_margin(res, (rhs - lhs) / rhs, "");
                if (lhs > rhs * (1.0 + 1e-12)) {
                    ++res.failures;
                    std::ostringstream os;
                    os << "(p=" << p << ", n=" << n << ") lhs=" << lhs << " rhs=" << rhs;
                    res.failure_lines.push_back(os.str());
                }
            }
        }
    }
    return res;
}

SuiteResult lattice_distance_suite(std::uint64_t seed) {
    SuiteResult res;
    res.name = "lattice-distance";
    res.worst_margin = std::numeric_limits<double>::infinity();
    std::vector<double> v, shifted, negated;
    for (int n = 1; n <= 6; ++n) {
        v.assign(n, 0.0);
        shifted.assign(n, 0.0);
        negated.assign(n, 0.0);
        rng::Engine eng(seed, static_cast<std::uint64_t>(n));
        const double cap = 0.5 * std::sqrt(double(n));
        for (int rep = 0; rep < 100000 / 6 + 1; ++rep) {
            for (int i = 0; i < n; ++i) {
                v[i] = 8.0 * eng.next_uniform() - 4.0;
                const long m = static_cast<long>(eng.next_u64() % 7) - 3;
                shifted[i] = v[i] + static_cast<double>(m);
                negated[i] = -v[i];
            }
            const double d = lcd::dist_to_lattice(v);
            ++res.checked;
            note_margin(res, cap + 1e-12 - d, "");
            const bool ok = d == lcd::dist_to_lattice(shifted) &&
                            d == lcd::dist_to_lattice(negated) && d <= cap + 1e-12;
            if (!ok) {
                ++res.failures;
                std::ostringstream os;
                os << "(n=" << n << ", rep=" << rep << ") d=" << serialize::format_double(d);
                res.failure_lines.push_back(os.str());
            }
        }
    }
    return res;
}

SuiteResult ci_coverage_suite(std::uint64_t seed) {
    SuiteResult res;
    res.name = "ci-coverage";
    res.worst_margin = std::numeric_limits<double>::infinity();
    const std::uint64_t reps = 10000;
    const std::uint64_t trials = 1000;
    for (double p : {0.01, 0.1, 0.5}) {
        for (double conf : {0.95, 0.99}) {
            std::uint64_t covered = 0;
            rng::Engine eng(seed, static_cast<std::uint64_t>(p * 10000) + (conf == 0.95 ? 0 : 1));
            for (std::uint64_t rep = 0; rep < reps; ++rep) {
                std::uint64_t k = 0;
                for (std::uint64_t i = 0; i < trials; ++i)
                    if (eng.next_uniform() < p) ++k;
                const auto [lo, hi] = quadrature::binomial_ci(k, trials, conf);
                if (lo <= p && p <= hi) ++covered;
            }
            const double coverage = double(covered) / double(reps);
            ++res.checked;
            std::ostringstream os;
            os << "(p=" << p << ", conf=" << conf << ") coverage=" << coverage;
            note_margin(res, coverage - (conf - 0.005), os.str());
            if (coverage < conf - 0.005) {
                ++res.failures;
                res.failure_lines.push_back(os.str());
            }
        }
    }
    return res;
}

SuiteResult csv_determinism_suite() {
    SuiteResult res;
    res.name = "csv-determinism";
    experiment::ExperimentConfig cfg;
    cfg.model = models::VectorModel::standard_gaussian(1);
    cfg.norm = geometry::QuasiNormSpec(2.0, 1);
    cfg.bound.theorem = "fourier-l1";
    cfg.t_grid = {0.1, 0.2, 0.5};
    cfg.samples = 20000;
    cfg.seed = 424242;

    const auto first = experiment::verification_csv(experiment::run_verify(cfg).rows);
    const auto second = experiment::verification_csv(experiment::run_verify(cfg).rows);
    ++res.checked;
    if (first != second) {
        ++res.failures;
        res.failure_lines.push_back("verify CSV differs between identical runs");
    }
    const std::string header = first.substr(0, first.find('\n'));
    ++res.checked;
    if (header != "t,p_hat,ci_low,ci_high,bound_value,branch,pass") {
        ++res.failures;
        res.failure_lines.push_back("unexpected CSV header: " + header);
    }
    res.worst_margin = res.failures == 0 ? 1.0 : 0.0;
    return res;
}

} // namespace smallball::oracles
