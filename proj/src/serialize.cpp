#include "smallball/serialize.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace smallball::serialize {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

json to_json(const bounds::BoundReport& r) {
    json inputs = json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = v;
    return json{{"theorem", r.theorem}, {"value", r.value}, {"branch", r.branch},
                {"inputs", inputs}};
}

json to_json(const quadrature::McEstimate& e) {
    return json{{"p_hat", e.p_hat},     {"ci_low", e.ci_low},
                {"ci_high", e.ci_high}, {"samples", e.samples},
                {"hits", e.hits},       {"seed", e.seed},
                {"confidence", e.confidence}};
}

json to_json(const quadrature::QuadResult& q) {
    return json{{"value", q.value},
                {"abs_error_estimate", q.abs_error_estimate},
                {"evaluations", q.evaluations}};
}

json to_json(const lcd::LcdResult& r) {
    json j{{"lower_certified", r.lower_certified},
           {"resolution", r.resolution},
           {"sigma_min", r.sigma_min},
           {"sigma_max", r.sigma_max}};
    if (std::isinf(r.upper_witness)) {
        j["upper_witness"] = nullptr; // no admissible theta found: LCD may be infinite
        j["witness_theta"] = nullptr;
    } else {
        j["upper_witness"] = r.upper_witness;
        j["witness_theta"] = r.witness_theta ? json(*r.witness_theta) : json(nullptr);
    }
    return j;
}

json to_json(const geometry::GaussianMeasureEstimate& e) {
    json j{{"value", e.value},
           {"method", e.method == geometry::GaussianMeasureEstimate::Method::closed_form
                          ? "closed-form"
                          : "monte-carlo"}};
    if (e.ci) j["ci"] = json::array({e.ci->first, e.ci->second});
    if (e.samples) j["samples"] = *e.samples;
    return j;
}

json to_json(const models::VectorModel& m) {
    using models::VectorModel;
    switch (m.kind()) {
    case VectorModel::Kind::standard_gaussian:
        return json{{"kind", "standard-gaussian"}, {"n", m.dim()}};
    case VectorModel::Kind::smoothed:
        return json{{"kind", "smoothed"}, {"t", m.smoothing()}, {"base", to_json(m.base())}};
    case VectorModel::Kind::weighted_sum: {
        json rows = json::array();
        for (std::size_t i = 0; i < m.matrix().rows(); ++i) {
            json row = json::array();
            for (double v : m.matrix().row(i)) row.push_back(v);
            rows.push_back(row);
        }
        json atoms;
        switch (m.atoms().kind) {
        case models::AtomLaw::Kind::two_point:
            atoms = json{{"kind", "two-point"}, {"a", m.atoms().a}};
            break;
        case models::AtomLaw::Kind::uniform_interval:
            atoms = json{{"kind", "uniform-interval"}, {"lo", m.atoms().lo}, {"hi", m.atoms().hi}};
            break;
        case models::AtomLaw::Kind::custom:
            atoms = json{{"kind", "custom"}};
            break;
        }
        return json{{"kind", "weighted-sum"}, {"matrix", rows}, {"atoms", atoms}};
    }
    }
    throw std::logic_error("unreachable model kind");
}

models::VectorModel model_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "standard-gaussian")
        return models::VectorModel::standard_gaussian(j.at("n").get<int>());
    if (kind == "smoothed")
        return models::VectorModel::smoothed(model_from_json(j.at("base")),
                                             j.at("t").get<double>());
    if (kind == "weighted-sum") {
        const auto& rows = j.at("matrix");
        if (!rows.is_array() || rows.empty())
            throw std::invalid_argument("weighted-sum: matrix must be a non-empty array");
        const std::size_t cols = rows.at(0).size();
        Matrix a(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows.at(i).size() != cols)
                throw std::invalid_argument("weighted-sum: ragged matrix");
            for (std::size_t k = 0; k < cols; ++k) a(i, k) = rows.at(i).at(k).get<double>();
        }
        const auto& atoms = j.at("atoms");
        const std::string akind = atoms.at("kind").get<std::string>();
        models::AtomLaw law = models::AtomLaw::two_point(1.5);
        if (akind == "two-point")
            law = models::AtomLaw::two_point(atoms.at("a").get<double>());
        else if (akind == "uniform-interval")
            law = models::AtomLaw::uniform_interval(atoms.at("lo").get<double>(),
                                                    atoms.at("hi").get<double>());
        else
            throw std::invalid_argument("unknown atom law: " + akind);
        return models::VectorModel::weighted_sum(std::move(a), std::move(law));
    }
    throw std::invalid_argument("unknown model kind: " + kind);
}

geometry::QuasiNormSpec norm_from_json(const json& j) {
    double p;
    const auto& pj = j.at("p");
    if (pj.is_string()) {
        const std::string s = pj.get<std::string>();
        if (s == "inf" || s == "infinity")
            p = std::numeric_limits<double>::infinity();
        else
            throw std::invalid_argument("norm p: expected number or \"inf\"");
    } else {
        p = pj.get<double>();
    }
    return geometry::QuasiNormSpec(p, j.at("n").get<int>());
}

json to_json(const geometry::QuasiNormSpec& spec) {
    json j{{"n", spec.n}};
    if (spec.is_infinity())
        j["p"] = "inf";
    else
        j["p"] = spec.p;
    return j;
}

} // namespace smallball::serialize
