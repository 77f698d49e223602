#include "smallball/experiment.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smallball/errors.hpp"
#include "smallball/lcd.hpp"
#include "smallball/quadrature.hpp"
#include "smallball/rng.hpp"
#include "smallball/serialize.hpp"

namespace smallball::experiment {

namespace {

// Sub-seed purposes, so internal Monte Carlo helpers never share a stream
// with the small-ball estimator driven by the same config seed.
enum : std::uint64_t { kSeedGammaK = 1, kSeedIntegral = 2 };

bounds::TieBreak tie_of(const BoundSpec& b) {
    return b.boundary_max ? bounds::TieBreak::max_adjacent : bounds::TieBreak::first_listed;
}

// Everything the configured bound needs that does not depend on t.
struct ResolvedInputs {
    double vol_k = 0.0;
    double c_k = 1.0;
    double gamma_k = 1.0;
    double l1_phi = 0.0;
    double sobolev_norm = 0.0;
    double sup_density = 0.0;
    double b_spread = 0.0;
    double lcd_lower = 0.0;
};

double resolve_gamma_k(const ExperimentConfig& cfg) {
    if (cfg.bound.gamma_k) return *cfg.bound.gamma_k;
    const auto est = geometry::gaussian_measure(cfg.norm, 1.0, cfg.samples,
                                                rng::derive_seed(cfg.seed, kSeedGammaK),
                                                cfg.confidence);
    return est.value;
}

ResolvedInputs resolve_inputs(const ExperimentConfig& cfg) {
    const std::string& th = cfg.bound.theorem;
    ResolvedInputs in;
    in.vol_k = geometry::lp_ball_volume(cfg.norm.n, cfg.norm.p);
    in.c_k = geometry::quasinorm_constant(cfg.norm);

    if (th == "smoothed" || th == "sobolev" || th == "lo") in.gamma_k = resolve_gamma_k(cfg);

    if (th == "fourier-l1") {
        if (cfg.bound.l1_phi) {
            in.l1_phi = *cfg.bound.l1_phi;
        } else {
            quadrature::McIntegralOptions mc;
            mc.seed = rng::derive_seed(cfg.seed, kSeedIntegral);
            in.l1_phi = quadrature::weighted_charfun_integral(cfg.model, 0.0, mc).value;
        }
    }

    if (th == "sobolev" || th == "high-smoothness") {
        if (!cfg.bound.beta || !cfg.bound.p)
            throw std::invalid_argument(th + ": beta and p are required");
        if (cfg.bound.sobolev_norm) {
            in.sobolev_norm = *cfg.bound.sobolev_norm;
        } else if (cfg.model.kind() == models::VectorModel::Kind::standard_gaussian) {
            in.sobolev_norm =
                quadrature::sobolev_norm_gaussian(cfg.model.dim(),
                                                  {*cfg.bound.beta, *cfg.bound.p})
                    .value;
        } else {
            throw std::invalid_argument(
                th + ": numeric Sobolev norms ship for the standard Gaussian only; "
                     "pass sobolev_norm explicitly for other models");
        }
    }

    if (th == "sup-density") {
        if (cfg.bound.sup_density) {
            in.sup_density = *cfg.bound.sup_density;
        } else if (cfg.model.kind() == models::VectorModel::Kind::standard_gaussian) {
            in.sup_density = std::pow(2.0 * std::numbers::pi, -0.5 * cfg.model.dim());
        } else {
            throw std::invalid_argument(
                "sup-density: closed-form density maximum known for the standard "
                "Gaussian only; pass sup_density explicitly");
        }
    }

    if (th == "lo") {
        if (!cfg.bound.gamma || !cfg.bound.alpha)
            throw std::invalid_argument("lo: gamma and alpha are required");
        if (cfg.model.kind() != models::VectorModel::Kind::weighted_sum)
            throw std::invalid_argument("lo: the model must be a weighted sum");
        in.b_spread = models::spread_parameter(cfg.model.atoms());
        const lcd::LcdParams params(*cfg.bound.alpha, *cfg.bound.gamma);
        const auto res = lcd::lcd_search(cfg.model.matrix(), params, cfg.bound.lcd_radius_max,
                                         cfg.bound.lcd_grid_step);
        if (res.sigma_min < 1.0 - 1e-9)
            std::cerr << "warning: smallest singular value " << res.sigma_min
                      << " < 1; the Littlewood-Offord hypothesis |A theta| >= |theta| fails\n";
        if (!(res.lower_certified > 0.0))
            throw std::invalid_argument(
                "lo: certified LCD lower bound is 0; enlarge radius or refine the grid");
        in.lcd_lower = res.lower_certified;
    }
    return in;
}

bounds::BoundReport evaluate_with(const ExperimentConfig& cfg, const ResolvedInputs& in,
                                  double t) {
    const std::string& th = cfg.bound.theorem;
    const int n = cfg.norm.n;
    bounds::BoundReport rep;
    if (th == "fourier-l1") {
        rep = bounds::fourier_l1_bound(t, n, in.vol_k, in.l1_phi);
    } else if (th == "smoothed") {
        quadrature::McIntegralOptions mc;
        mc.seed = rng::derive_seed(cfg.seed, kSeedIntegral);
        const double wi = quadrature::weighted_charfun_integral(cfg.model, t, mc).value;
        rep = bounds::smoothed_bound(t, n, in.vol_k, in.gamma_k, in.c_k, wi);
    } else if (th == "sobolev") {
        rep = bounds::sobolev_small_ball_bound(
            t, n, in.vol_k, in.gamma_k, in.c_k, in.sobolev_norm,
            bounds::SobolevParams(*cfg.bound.beta, *cfg.bound.p), tie_of(cfg.bound));
    } else if (th == "sup-density") {
        rep = bounds::sup_density_bound(t, n, in.vol_k, in.sup_density);
    } else if (th == "high-smoothness") {
        rep = bounds::high_smoothness_bound(
            t, n, in.vol_k, in.sobolev_norm,
            bounds::SobolevParams(*cfg.bound.beta, *cfg.bound.p));
    } else if (th == "lo") {
        const double t_min = std::sqrt(double(cfg.model.dim())) / in.lcd_lower;
        if (t < t_min)
            throw std::invalid_argument(
                "lo: t = " + serialize::format_double(t) +
                " violates t >= sqrt(n)/LCD; certified threshold is " +
                serialize::format_double(t_min));
        rep = bounds::lo_bound(t, n, in.vol_k, in.gamma_k, in.c_k, in.b_spread,
                               *cfg.bound.gamma, *cfg.bound.alpha, cfg.bound.c_abs);
    } else {
        throw std::invalid_argument("unknown theorem: " + th);
    }
    if (cfg.bound.clamp) rep.value = std::min(rep.value, 1.0);
    return rep;
}

void validate_t_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("t_grid must be non-empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw std::invalid_argument("t_grid values must be > 0");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("t_grid must be strictly increasing");
    }
}

} // namespace

bounds::BoundReport evaluate_bound(const ExperimentConfig& cfg, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
    return evaluate_with(cfg, resolve_inputs(cfg), t);
}

VerifyOutput run_verify(const ExperimentConfig& cfg) {
    validate_t_grid(cfg.t_grid);
    if (cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (cfg.model.dim() != cfg.norm.n)
        throw std::invalid_argument("model dimension does not match the norm dimension");

    const ResolvedInputs in = resolve_inputs(cfg);
    VerifyOutput out;
    for (double t : cfg.t_grid) {
        const auto rep = evaluate_with(cfg, in, t);
        const auto est =
            quadrature::estimate_small_ball(cfg.model, cfg.norm, t, cfg.samples, cfg.seed,
                                            cfg.confidence);
        VerificationRow row;
        row.t = t;
        row.p_hat = est.p_hat;
        row.ci_low = est.ci_low;
        row.ci_high = est.ci_high;
        row.bound_value = rep.value;
        row.branch = rep.branch;
        row.pass = est.ci_high <= rep.value;
        out.all_pass = out.all_pass && row.pass;
        out.rows.push_back(std::move(row));
    }
    return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    validate_t_grid(cfg.t_grid);
    const ResolvedInputs in = resolve_inputs(cfg);
    std::vector<SweepRow> rows;
    for (double t : cfg.t_grid) {
        const auto rep = evaluate_with(cfg, in, t);
        rows.push_back({t, rep.value, rep.branch});
    }
    return rows;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.model = serialize::model_from_json(j.at("model"));
    cfg.norm = serialize::norm_from_json(j.at("norm"));

    const auto& b = j.at("bound");
    cfg.bound.theorem = b.at("theorem").get<std::string>();
    if (b.contains("beta")) cfg.bound.beta = b["beta"].get<double>();
    if (b.contains("p")) cfg.bound.p = b["p"].get<double>();
    if (b.contains("gamma")) cfg.bound.gamma = b["gamma"].get<double>();
    if (b.contains("alpha")) cfg.bound.alpha = b["alpha"].get<double>();
    if (b.contains("c_abs")) cfg.bound.c_abs = b["c_abs"].get<double>();
    if (b.contains("lcd_radius_max")) cfg.bound.lcd_radius_max = b["lcd_radius_max"].get<double>();
    if (b.contains("lcd_grid_step")) cfg.bound.lcd_grid_step = b["lcd_grid_step"].get<double>();
    if (b.contains("l1_phi")) cfg.bound.l1_phi = b["l1_phi"].get<double>();
    if (b.contains("sobolev_norm")) cfg.bound.sobolev_norm = b["sobolev_norm"].get<double>();
    if (b.contains("sup_density")) cfg.bound.sup_density = b["sup_density"].get<double>();
    if (b.contains("gamma_k")) cfg.bound.gamma_k = b["gamma_k"].get<double>();
    if (b.contains("boundary_max")) cfg.bound.boundary_max = b["boundary_max"].get<bool>();
    if (b.contains("clamp")) cfg.bound.clamp = b["clamp"].get<bool>();

    if (j.contains("t_grid")) cfg.t_grid = j["t_grid"].get<std::vector<double>>();
    if (j.contains("samples")) cfg.samples = j["samples"].get<std::uint64_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("confidence")) cfg.confidence = j["confidence"].get<double>();
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("path")) cfg.out_path = o["path"].get<std::string>();
        if (o.contains("format")) cfg.format = o["format"].get<std::string>();
    }
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
        throw std::invalid_argument("confidence must be in (0,1)");
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("format must be csv or json");
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json b{{"theorem", cfg.bound.theorem}};
    if (cfg.bound.beta) b["beta"] = *cfg.bound.beta;
    if (cfg.bound.p) b["p"] = *cfg.bound.p;
    if (cfg.bound.gamma) b["gamma"] = *cfg.bound.gamma;
    if (cfg.bound.alpha) b["alpha"] = *cfg.bound.alpha;
    if (cfg.bound.c_abs != 1.0) b["c_abs"] = cfg.bound.c_abs;
    return nlohmann::json{{"model", serialize::to_json(cfg.model)},
                          {"norm", serialize::to_json(cfg.norm)},
                          {"bound", b},
                          {"t_grid", cfg.t_grid},
                          {"samples", cfg.samples},
                          {"seed", cfg.seed},
                          {"confidence", cfg.confidence},
                          {"chunk_size", rng::kChunkSamples}};
}

std::string verification_csv(const std::vector<VerificationRow>& rows) {
    std::string out = "t,p_hat,ci_low,ci_high,bound_value,branch,pass\n";
    for (const auto& r : rows) {
        out += serialize::format_double(r.t);
        out += ',';
        out += serialize::format_double(r.p_hat);
        out += ',';
        out += serialize::format_double(r.ci_low);
        out += ',';
        out += serialize::format_double(r.ci_high);
        out += ',';
        out += serialize::format_double(r.bound_value);
        out += ',';
        out += r.branch;
        out += ',';
        out += r.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "t,bound_value,branch\n";
    for (const auto& r : rows) {
        out += serialize::format_double(r.t);
        out += ',';
        out += serialize::format_double(r.value);
        out += ',';
        out += r.branch;
        out += '\n';
    }
    return out;
}

nlohmann::json verification_json(const std::vector<VerificationRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"t", r.t},
                       {"p_hat", r.p_hat},
                       {"ci_low", r.ci_low},
                       {"ci_high", r.ci_high},
                       {"bound_value", r.bound_value},
                       {"branch", r.branch},
                       {"pass", r.pass}});
    return arr;
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"t", r.t}, {"value", r.value}, {"branch", r.branch}});
    return arr;
}

} // namespace smallball::experiment
