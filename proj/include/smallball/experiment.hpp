#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "smallball/bounds.hpp"
#include "smallball/geometry.hpp"
#include "smallball/models.hpp"

namespace smallball::experiment {

// Which bound to evaluate and the scalar parameters it needs beyond the
// model and norm. Quantities that are normally computed (gamma_n(K), the
// Sobolev norm, sup density, integral |phi|) can be overridden with explicit
// values for testing or for models the quadrature cannot handle.
struct BoundSpec {
    std::string theorem; // fourier-l1 | smoothed | sobolev | sup-density | high-smoothness | lo

    std::optional<double> beta, p;     // sobolev, high-smoothness
    std::optional<double> gamma, alpha; // lo
    double c_abs = 1.0;                 // lo
    double lcd_radius_max = 2.0;        // lo: search radius for the LCD bracket
    double lcd_grid_step = 1e-3;

    std::optional<double> l1_phi;
    std::optional<double> sobolev_norm;
    std::optional<double> sup_density;
    std::optional<double> gamma_k;

    bool boundary_max = false; // evaluate adjacent regime branches, take the max
    bool clamp = false;        // presentation only: min(value, 1)
};

struct ExperimentConfig {
    models::VectorModel model = models::VectorModel::standard_gaussian(1);
    geometry::QuasiNormSpec norm{2.0, 1};
    BoundSpec bound;
    std::vector<double> t_grid;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    double confidence = 0.99;
    std::string out_path;       // empty: stdout
    std::string format = "csv"; // csv | json
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct VerificationRow {
    double t = 0.0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double bound_value = 0.0;
    std::string branch;
    bool pass = false; // ci_high <= bound_value
};

struct VerifyOutput {
    std::vector<VerificationRow> rows;
    bool all_pass = true;
};

// Evaluates the configured bound at one t, resolving every derived input
// (ball volume, Gaussian measure, weighted integrals, LCD bracket) from the
// config. Deterministic for a fixed config.
bounds::BoundReport evaluate_bound(const ExperimentConfig& cfg, double t);

// One Monte Carlo vs bound row per t in the grid.
VerifyOutput run_verify(const ExperimentConfig& cfg);

struct SweepRow {
    double t = 0.0;
    double value = 0.0;
    std::string branch;
};
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

// CSV renderers: UTF-8, ',' separator, '.' decimal, LF endings, fixed header.
std::string verification_csv(const std::vector<VerificationRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json verification_json(const std::vector<VerificationRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

} // namespace smallball::experiment
