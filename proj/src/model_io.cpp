#include "tracelab/model_io.hpp"

#include <filesystem>
#include <fstream>

#include "tracelab/error.hpp"
#include "tracelab/gallery.hpp"

namespace tracelab {

namespace {

const char* kNegInfText = "-inf";

std::string logmag_text(const LogReal& x) { return x.is_zero() ? kNegInfText : x.logmag().to_string(); }

LogReal from_logmag_text(const std::string& s) {
    if (s == kNegInfText) return LogReal::zero();
    return LogReal::from_log(DD::parse(s));
}

std::string as_text(const nlohmann::json& j, const char* what) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.dump();
    throw ConfigError(std::string("operator file: ") + what + " must be a decimal string or number");
}

}  // namespace

nlohmann::ordered_json to_json(const OperatorModel& m, std::size_t max_inline_pieces) {
    nlohmann::ordered_json j;
    j["label"] = m.label;
    if (!m.generator || m.mu.pieces() <= max_inline_pieces) {
        auto knots = nlohmann::ordered_json::array();
        auto values = nlohmann::ordered_json::array();
        for (const DD& k : m.mu.knots()) knots.push_back(k.to_string());
        for (const LogReal& v : m.mu.values()) values.push_back(logmag_text(v));
        nlohmann::ordered_json mu;
        mu["knots_log"] = std::move(knots);
        mu["values_logmag"] = std::move(values);
        mu["tail"] = m.mu.tail().encode();
        j["mu"] = std::move(mu);
    }
    if (m.spectrum) {
        auto s = nlohmann::ordered_json::array();
        for (const auto& e : m.spectrum->eigenvalues()) {
            s.push_back({{"re", e.value.real()}, {"im", e.value.imag()}, {"mult", e.multiplicity}});
        }
        j["spectrum"] = std::move(s);
    }
    if (m.generator) j["generator"] = {{"name", m.generator->name}, {"params", m.generator->params}};
    if (m.horizon_log) j["horizon_log"] = m.horizon_log->to_string();
    return j;
}

OperatorModel from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw ConfigError("operator file: top level must be an object");
        std::optional<GeneratorSpec> gen;
        if (j.contains("generator")) {
            const auto& g = j.at("generator");
            gen = GeneratorSpec{g.at("name").get<std::string>(),
                                nlohmann::ordered_json::parse(g.value("params", nlohmann::json::object()).dump())};
        }
        std::optional<OperatorModel> m;
        if (j.contains("mu")) {
            const auto& mu = j.at("mu");
            std::vector<DD> knots;
            std::vector<LogReal> values;
            for (const auto& k : mu.at("knots_log")) knots.push_back(DD::parse(as_text(k, "knots_log")));
            for (const auto& v : mu.at("values_logmag")) values.push_back(from_logmag_text(as_text(v, "values_logmag")));
            LogReal tail = LogReal::decode(mu.contains("tail") ? as_text(mu.at("tail"), "tail") : "0");
            m = OperatorModel{StepFunction(std::move(knots), std::move(values), tail), std::nullopt, "", std::nullopt,
                              gen};
        } else if (gen) {
            m = expand(*gen);
        } else {
            throw ConfigError("operator file: needs either mu or a generator");
        }
        if (j.contains("label")) m->label = j.at("label").get<std::string>();
        if (j.contains("spectrum")) {
            std::vector<Eigenvalue> ev;
            for (const auto& e : j.at("spectrum")) {
                ev.push_back({{e.value("re", 0.0), e.value("im", 0.0)}, e.value("mult", std::int64_t{1})});
            }
            m->spectrum = SpectrumModel(std::move(ev));
        }
        if (j.contains("horizon_log")) m->horizon_log = DD::parse(as_text(j.at("horizon_log"), "horizon_log"));
        if (m->spectrum && !validate_weyl(*m)) {
            throw ModelError("operator file: spectrum is not majorized by mu (Weyl inequality fails)");
        }
        return *m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("operator file: ") + e.what());
    }
}

OperatorModel load_operator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open operator file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("operator file '" + path + "': " + e.what());
    }
    return from_json(j);
}

void save_operator(const OperatorModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << to_json(model).dump(2) << "\n";
}

OperatorModel resolve_operator(const std::string& source) {
    for (const auto& e : gallery_entries()) {
        if (e.name == source) return expand(e.spec);
    }
    if (std::filesystem::exists(source)) return load_operator(source);
    throw ConfigError("'" + source + "' is neither a gallery model nor an operator file");
}

}  // namespace tracelab
