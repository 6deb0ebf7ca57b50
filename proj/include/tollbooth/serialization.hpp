#pragma once

#include <string>

#include "json.hpp"

#include "tollbooth/graph.hpp"

namespace tollbooth::io {

using json = nlohmann::json;

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

std::string rat_str(const Rat& r);
Rat rat_from_json(const json& j);

json prices_to_json(const PriceVector& p);
PriceVector prices_from_json(const json& j);

void write_file(const std::string& path, const json& j);
json read_file(const std::string& path);

}  // namespace tollbooth::io
