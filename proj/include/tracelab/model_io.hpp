#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "tracelab/model.hpp"

namespace tracelab {

/// Operator file JSON.  mu is written in full when it has at most
/// max_inline_pieces pieces; larger generator-backed models are written as
/// their generator only, and readers expand a generator when mu is absent.
nlohmann::ordered_json to_json(const OperatorModel& model, std::size_t max_inline_pieces = 200000);
OperatorModel from_json(const nlohmann::json& j);

OperatorModel load_operator(const std::string& path);
void save_operator(const OperatorModel& model, const std::string& path);

/// A gallery name or a path to an operator file.
OperatorModel resolve_operator(const std::string& source);

}  // namespace tracelab
