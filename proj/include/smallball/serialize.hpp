#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "smallball/bounds.hpp"
#include "smallball/geometry.hpp"
#include "smallball/lcd.hpp"
#include "smallball/models.hpp"
#include "smallball/quadrature.hpp"

namespace smallball::serialize {

// Shortest round-trip decimal representation (std::to_chars), identical on
// every IEEE-754 platform. All CSV and JSON numbers go through this.
std::string format_double(double v);

nlohmann::json to_json(const bounds::BoundReport& r);
nlohmann::json to_json(const quadrature::McEstimate& e);
nlohmann::json to_json(const quadrature::QuadResult& q);
nlohmann::json to_json(const lcd::LcdResult& r);
nlohmann::json to_json(const geometry::GaussianMeasureEstimate& e);

// Model descriptors round-trip through the experiment config schema.
nlohmann::json to_json(const models::VectorModel& m);
models::VectorModel model_from_json(const nlohmann::json& j);

geometry::QuasiNormSpec norm_from_json(const nlohmann::json& j);
nlohmann::json to_json(const geometry::QuasiNormSpec& spec);

} // namespace smallball::serialize
