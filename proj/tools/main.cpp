#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "smallball/errors.hpp"
#include "smallball/experiment.hpp"
#include "smallball/lcd.hpp"
#include "smallball/oracles.hpp"
#include "smallball/quadrature.hpp"
#include "smallball/serialize.hpp"

namespace {

using namespace smallball;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct GlobalOpts {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<double> confidence;
    std::string config_path;
    std::string out_path;
    std::string format;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

experiment::ExperimentConfig load_config(const GlobalOpts& g) {
    if (g.config_path.empty()) throw std::invalid_argument("--config <file> is required");
    auto cfg = experiment::config_from_json(load_json(g.config_path));
    if (g.seed) cfg.seed = *g.seed;
    if (g.samples) cfg.samples = *g.samples;
    if (g.confidence) cfg.confidence = *g.confidence;
    if (!g.out_path.empty()) cfg.out_path = g.out_path;
    if (!g.format.empty()) cfg.format = g.format;
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("format must be csv or json");
    return cfg;
}

// Byte-stable output: LF endings regardless of platform.
void emit(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << payload;
}

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) throw std::invalid_argument("malformed matrix line: " + line);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("matrix file is empty");
    const std::size_t cols = rows[0].size();
    Matrix a(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix file");
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = rows[i][j];
    }
    return a;
}

int cmd_bound(const GlobalOpts& g, double t_arg) {
    auto cfg = load_config(g);
    double t = t_arg;
    if (!(t > 0.0)) {
        if (cfg.t_grid.empty())
            throw std::invalid_argument("pass --t or put a t_grid in the config");
        t = cfg.t_grid.front();
    }
    const auto rep = experiment::evaluate_bound(cfg, t);
    emit(cfg.out_path, serialize::to_json(rep).dump(2) + "\n");
    return kExitPass;
}

int cmd_estimate(const GlobalOpts& g, double t_arg) {
    auto cfg = load_config(g);
    double t = t_arg;
    if (!(t > 0.0)) {
        if (cfg.t_grid.empty())
            throw std::invalid_argument("pass --t or put a t_grid in the config");
        t = cfg.t_grid.front();
    }
    const auto est = quadrature::estimate_small_ball(cfg.model, cfg.norm, t, cfg.samples,
                                                     cfg.seed, cfg.confidence);
    json out = serialize::to_json(est);
    out["chunk_size"] = rng::kChunkSamples;
    emit(cfg.out_path, out.dump(2) + "\n");
    return kExitPass;
}

int cmd_verify(const GlobalOpts& g) {
    auto cfg = load_config(g);
    const auto out = experiment::run_verify(cfg);
    if (cfg.format == "json")
        emit(cfg.out_path, experiment::verification_json(out.rows).dump(2) + "\n");
    else
        emit(cfg.out_path, experiment::verification_csv(out.rows));
    return out.all_pass ? kExitPass : kExitViolation;
}

int cmd_sweep(const GlobalOpts& g) {
    auto cfg = load_config(g);
    const auto rows = experiment::run_sweep(cfg);
    if (cfg.format == "json")
        emit(cfg.out_path, experiment::sweep_json(rows).dump(2) + "\n");
    else
        emit(cfg.out_path, experiment::sweep_csv(rows));
    return kExitPass;
}

int cmd_lcd(const GlobalOpts& g, const std::string& matrix_path, double alpha, double gamma,
            double radius_max, double grid_step) {
    const Matrix a = load_matrix(matrix_path);
    const lcd::LcdParams params(alpha, gamma);
    const auto res = lcd::lcd_search(a, params, radius_max, grid_step);
    if (res.sigma_min < 1.0 - 1e-9)
        std::cerr << "warning: sigma_min = " << res.sigma_min
                  << " < 1; Littlewood-Offord use requires |A theta| >= |theta|\n";
    emit(g.out_path, serialize::to_json(res).dump(2) + "\n");
    return kExitPass;
}

int cmd_oracle(const GlobalOpts& g, const std::string& suite) {
    oracles::SuiteResult res;
    const std::uint64_t seed = g.seed.value_or(2024);
    if (suite == "lemma22")
        res = oracles::lemma22_suite();
    else if (suite == "m-identity")
        res = oracles::m_identity_suite();
    else if (suite == "prop23")
        res = oracles::prop23_suite();
    else if (suite == "gamma-ts")
        res = oracles::gamma_ts_suite(seed);
    else if (suite == "lo-lemma")
        res = oracles::lo_lemma_suite(seed);
    else
        throw std::invalid_argument("unknown oracle suite: " + suite +
                                    " (expected lemma22 | prop23 | m-identity | gamma-ts | lo-lemma)");
    std::cout << res.summary() << "\n";
    if (suite == "gamma-ts")
        std::cout << "level-set constant C = " << serialize::format_double(lcd::level_set_constant())
                  << " (fitted, frozen)\n";
    for (const auto& line : res.failure_lines) std::cout << "violation: " << line << "\n";
    return res.pass() ? kExitPass : kExitViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"small-ball probability bounds: evaluation, Monte Carlo verification, "
                 "LCD search and numeric oracles"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "RNG seed (overrides config)");
    app.add_option("--samples", g.samples, "Monte Carlo sample count (overrides config)");
    app.add_option("--confidence", g.confidence, "confidence level, default 0.99");
    app.add_option("--config", g.config_path, "JSON experiment config");
    app.add_option("--out", g.out_path, "output path (default stdout)");
    app.add_option("--format", g.format, "csv | json");

    double t_arg = 0.0;
    auto* bound = app.add_subcommand("bound", "evaluate the configured bound at one t");
    bound->add_option("--t", t_arg, "evaluation point (default: first t_grid entry)");

    auto* estimate = app.add_subcommand("estimate", "Monte Carlo small-ball estimate at one t");
    estimate->add_option("--t", t_arg, "evaluation point (default: first t_grid entry)");

    app.add_subcommand("verify", "bound vs Monte Carlo on the whole t grid");
    app.add_subcommand("sweep", "tabulate bound values over the t grid (no Monte Carlo)");

    std::string matrix_path;
    double alpha = 1.0, gamma = 0.5, radius_max = 2.0, grid_step = 1e-3;
    auto* lcd_cmd = app.add_subcommand("lcd", "certified LCD bracket for a coefficient matrix");
    lcd_cmd->add_option("--matrix", matrix_path, "text file, one row per line")->required();
    lcd_cmd->add_option("--alpha", alpha, "accuracy parameter, default 1");
    lcd_cmd->add_option("--gamma", gamma, "proportionality parameter, default 0.5");
    lcd_cmd->add_option("--radius-max", radius_max, "search radius, default 2");
    lcd_cmd->add_option("--grid-step", grid_step, "grid step, default 1e-3");

    std::string suite;
    auto* oracle = app.add_subcommand("oracle", "run a numeric verification suite");
    oracle->add_option("suite", suite, "lemma22 | prop23 | m-identity | gamma-ts | lo-lemma")
        ->required();

    try {
        app.parse(argc, argv);
        if (bound->parsed()) return cmd_bound(g, t_arg);
        if (estimate->parsed()) return cmd_estimate(g, t_arg);
        if (app.get_subcommand("verify")->parsed()) return cmd_verify(g);
        if (app.get_subcommand("sweep")->parsed()) return cmd_sweep(g);
        if (lcd_cmd->parsed()) return cmd_lcd(g, matrix_path, alpha, gamma, radius_max, grid_step);
        if (oracle->parsed()) return cmd_oracle(g, suite);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
