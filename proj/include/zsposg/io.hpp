#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "zsposg/hsvi.hpp"
#include "zsposg/lipschitz_hsvi.hpp"
#include "zsposg/strategies.hpp"

namespace zsposg {

using nlohmann::json;

// "listen/hear_left listen/hear_right", empty for the root.
std::string history_to_string(const PosgModel& m, int player, Hist h, int depth);
// Inverse of history_to_string; throws std::invalid_argument on unknown names.
Hist history_from_string(const PosgModel& m, int player, const std::string& text, int* depth = nullptr);

json occupancy_to_json(const PosgModel& m, const OccupancyState& sigma);
json strategy_to_json(const PosgModel& m, const BehavioralStrategy& s);
BehavioralStrategy strategy_from_json(const PosgModel& m, const json& j);
json bounds_to_json(const BoundSet& bounds);
json cones_to_json(const ConeBound& upper, const ConeBound& lower);

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace);
// Reproducible fields at the top level, wall-clock fields under "timing".
json result_to_json(const SolveResult& r);

}  // namespace zsposg
