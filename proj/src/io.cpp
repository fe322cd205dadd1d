#include "zsposg/io.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace zsposg {

std::string history_to_string(const PosgModel& m, int player, Hist h, int depth) {
  std::string out;
  for (const Step& st : decode(m, player, h, depth)) {
    if (!out.empty()) out += ' ';
    out += m.action_names[player][st.action] + "/" + m.obs_names[player][st.obs];
  }
  return out;
}

namespace {

int index_of(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown name '" + name + "'");
}

std::string join_sizes(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

json payload_json(const OneSidedBound& b, int tau, const Payload& p) {
  json nu = json::array();
  for (const auto& [h, v] : p.nu)
    nu.push_back({{"history", history_to_string(b.model(), 0, h, tau)}, {"value", v}});
  return {{"w_ids", p.ids}, {"probs", p.probs}, {"nu", nu}};
}

json side_json(const OneSidedBound& b) {
  json stages = json::array();
  for (int t = 0; t < b.horizon(); ++t) {
    json vs = json::array(), ws = json::array();
    for (int id : b.live_v(t)) vs.push_back({{"id", id}, {"payload", payload_json(b, t, b.v(id).payload)}});
    for (int id : b.live_w(t)) {
      const WTuple& w = b.w(id);
      json rule = json::array();
      for (const auto& [h, row] : w.rule.rows)
        rule.push_back({{"history", history_to_string(b.model(), 1, h, t)}, {"probs", row}});
      json e = {{"id", id}, {"rule", rule}};
      if (w.payload) e["payload"] = payload_json(b, t + 1, *w.payload);
      ws.push_back(e);
    }
    stages.push_back({{"tau", t}, {"V", vs}, {"W", ws}});
  }
  return stages;
}

json cone_side_json(const ConeBound& b) {
  json stages = json::array();
  for (int t = 0; t < b.model().horizon; ++t) {
    json cs = json::array();
    for (int id : b.live(t)) {
      const Cone& c = b.cone(id);
      cs.push_back({{"id", id}, {"summit", c.summit}, {"successor", c.successor},
                    {"anchor", occupancy_to_json(b.model(), c.anchor)}});
    }
    stages.push_back({{"tau", t}, {"cones", cs}});
  }
  return stages;
}

}  // namespace

Hist history_from_string(const PosgModel& m, int player, const std::string& text, int* depth) {
  std::istringstream in(text);
  std::vector<Step> steps;
  std::string tok;
  while (in >> tok) {
    auto slash = tok.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("bad history step '" + tok + "'");
    steps.push_back({index_of(m.action_names[player], tok.substr(0, slash)),
                     index_of(m.obs_names[player], tok.substr(slash + 1))});
  }
  if (depth) *depth = static_cast<int>(steps.size());
  return encode(m, player, steps);
}

json occupancy_to_json(const PosgModel& m, const OccupancyState& sigma) {
  json entries = json::array();
  for (const auto& e : sigma.entries)
    entries.push_back({{"h1", history_to_string(m, 0, e.h1, sigma.tau)},
                       {"h2", history_to_string(m, 1, e.h2, sigma.tau)},
                       {"p", e.p}});
  return {{"tau", sigma.tau}, {"entries", entries}};
}

json strategy_to_json(const PosgModel& m, const BehavioralStrategy& s) {
  json stages = json::array();
  for (std::size_t t = 0; t < s.rules.size(); ++t) {
    json rows = json::array();
    for (const auto& [h, probs] : s.rules[t].rows)
      rows.push_back({{"history", history_to_string(m, s.player, h, static_cast<int>(t))}, {"probs", probs}});
    stages.push_back(rows);
  }
  return {{"player", s.player + 1}, {"stages", stages}};
}

BehavioralStrategy strategy_from_json(const PosgModel& m, const json& j) {
  BehavioralStrategy s;
  s.player = j.at("player").get<int>() - 1;
  if (s.player != 0 && s.player != 1) throw std::invalid_argument("player must be 1 or 2");
  const auto& stages = j.at("stages");
  for (std::size_t t = 0; t < stages.size(); ++t) {
    DecisionRule r;
    r.player = s.player;
    for (const auto& row : stages[t]) {
      int depth = 0;
      Hist h = history_from_string(m, s.player, row.at("history").get<std::string>(), &depth);
      if (depth != static_cast<int>(t)) throw std::invalid_argument("history length does not match its stage");
      auto probs = row.at("probs").get<std::vector<double>>();
      if (static_cast<int>(probs.size()) != m.num_actions(s.player))
        throw std::invalid_argument("probs length does not match the action count");
      r.rows[h] = std::move(probs);
    }
    s.rules.push_back(std::move(r));
  }
  return s;
}

json bounds_to_json(const BoundSet& bounds) {
  return {{"upper", side_json(bounds.upper())}, {"lower_swapped", side_json(bounds.lower())}};
}

json cones_to_json(const ConeBound& upper, const ConeBound& lower) {
  return {{"upper", cone_side_json(upper)}, {"lower_swapped", cone_side_json(lower)}};
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
  os << "iter,elapsed_ms,ub0,lb0,gap,traj_len,bagV_sizes,bagW_sizes\n";
  os.precision(10);
  for (const auto& r : trace)
    os << r.iteration << ',' << r.elapsed_ms << ',' << r.ub0 << ',' << r.lb0 << ',' << r.gap << ','
       << r.trajectory_length << ',' << join_sizes(r.bag_v_sizes) << ',' << join_sizes(r.bag_w_sizes) << '\n';
}

json result_to_json(const SolveResult& r) {
  return {{"variant", r.variant},
          {"status", to_string(r.status)},
          {"value_ub", r.ub},
          {"value_lb", r.lb},
          {"gap", r.gap},
          {"iterations", r.iterations},
          {"rho", r.rho},
          {"strategy_ids", {{"player1", r.lower_root}, {"player2", r.upper_root}}},
          {"timing", {{"elapsed_ms", r.elapsed_ms}}}};
}

}  // namespace zsposg
