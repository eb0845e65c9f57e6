#ifndef LATDEV_JSON_IO_HPP
#define LATDEV_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "latdev/ldp.hpp"
#include "latdev/model.hpp"

namespace latdev {

using Json = nlohmann::json;

// Field access with path-aware diagnostics; throws ConfigError.
const Json& require_field(const Json& j, const std::string& key, const std::string& context);
double require_number(const Json& j, const std::string& key, const std::string& context);

LatticeWindow window_from_json(const Json& j);
Json to_json(const LatticeWindow& w);

ModelSpec model_from_json(const Json& j);  // validates field shapes and binds sites
Json to_json(const ModelSpec& spec);

// Dense {"values": [...]} or sparse [{"site": [...], "value": x}, ...].
State state_from_json(const Json& j, const LatticeWindow& window);
Json to_json(const State& s);

TimeGrid grid_from_json(const Json& j, double default_horizon);
Json to_json(const TimeGrid& g);

// {"kind":"zero"} | {"kind":"constant","value":[...]} | {"kind":"nodes","values":[[...]]}
Control control_from_json(const Json& j, const TimeGrid& grid, int modes);
Json to_json(const Control& c);

Trajectory trajectory_from_json(const Json& j);
Json to_json(const Trajectory& t);

EventSpec event_from_json(const Json& j, const ModelSpec& spec, const TimeGrid& grid);

Json to_json(const ValidationReport& rep);
Json to_json(const RateEstimate& est);

Json parse_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace latdev

#endif
