#include "zsposg/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace zsposg {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_fields(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(':', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + tok + "'");
  }
}

int parse_int(const std::string& tok, int line) {
  double v = parse_double(tok, line);
  if (v != std::floor(v)) throw ParseError(line, "expected an integer, got '" + tok + "'");
  return static_cast<int>(v);
}

bool is_integer_token(const std::string& tok) {
  return !tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Resolves a name, an index, or '*' to the list of matching indices.
std::vector<int> resolve(const std::vector<std::string>& names, const std::string& tok, int line,
                         const char* what) {
  std::vector<int> out;
  if (tok == "*") {
    for (int i = 0; i < static_cast<int>(names.size()); ++i) out.push_back(i);
    return out;
  }
  auto it = std::find(names.begin(), names.end(), tok);
  if (it != names.end()) return {static_cast<int>(it - names.begin())};
  if (is_integer_token(tok)) {
    int idx = std::stoi(tok);
    if (idx < 0 || idx >= static_cast<int>(names.size()))
      throw ParseError(line, std::string(what) + " index out of range: " + tok);
    return {idx};
  }
  throw ParseError(line, std::string("unknown ") + what + " '" + tok + "'");
}

std::vector<std::string> names_from(const std::vector<std::string>& toks, const std::string& prefix,
                                    int line) {
  if (toks.empty()) throw ParseError(line, "empty name list");
  if (toks.size() == 1 && is_integer_token(toks[0])) {
    int n = std::stoi(toks[0]);
    if (n <= 0) throw ParseError(line, "count must be positive");
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  }
  return toks;
}

}  // namespace

void PosgModel::validate() {
  const int S = num_states();
  if (S == 0) throw ModelError("no states");
  for (int p = 0; p < 2; ++p) {
    if (num_actions(p) == 0) throw ModelError("player " + std::to_string(p + 1) + " has no actions");
    if (num_obs(p) == 0) throw ModelError("player " + std::to_string(p + 1) + " has no observations");
  }
  if (horizon < 1) throw ModelError("horizon must be at least 1");
  if (discount < 0.0 || discount > 1.0) throw ModelError("discount must lie in [0,1]");
  if (static_cast<int>(b0.size()) != S) throw ModelError("start distribution has wrong size");
  double sb = 0.0;
  for (double v : b0) {
    if (v < 0.0 || v > 1.0) throw ModelError("start probability outside [0,1]");
    sb += v;
  }
  if (std::abs(sb - 1.0) > 1e-9) throw ModelError("start distribution sums to " + std::to_string(sb));
  const std::size_t row = static_cast<std::size_t>(S) * num_obs(0) * num_obs(1);
  for (int s = 0; s < S; ++s)
    for (int a1 = 0; a1 < num_actions(0); ++a1)
      for (int a2 = 0; a2 < num_actions(1); ++a2) {
        const std::size_t base = trans_index(s, a1, a2, 0, 0, 0);
        double sum = 0.0;
        for (std::size_t k = 0; k < row; ++k) {
          double v = trans[base + k];
          if (v < 0.0 || v > 1.0) throw ModelError("transition probability outside [0,1]");
          sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
          throw ModelError("transition row (" + state_names[s] + ", " + action_names[0][a1] + ", " +
                           action_names[1][a2] + ") sums to " + std::to_string(sum));
      }
  if (reward.empty()) throw ModelError("no reward table");
  r_min = *std::min_element(reward.begin(), reward.end());
  r_max = *std::max_element(reward.begin(), reward.end());
  // Histories must fit the 64-bit encoding.
  for (int p = 0; p < 2; ++p) {
    double bits = horizon * std::log2(static_cast<double>(branching(p)));
    if (bits > 62.0) throw ModelError("horizon too large for history encoding");
  }
}

PosgModel parse_model(std::string_view text) {
  PosgModel m;
  std::vector<std::pair<int, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
      ++no;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.resize(hash);
      std::string t = trim(raw);
      if (!t.empty()) lines.emplace_back(no, t);
    }
  }

  bool have_states = false, have_actions = false, have_obs = false, have_start = false;
  bool have_horizon = false;
  struct Deferred {
    int line;
    std::string body;
    bool is_trans;
  };
  std::vector<Deferred> entries;
  std::vector<std::string> start_toks;
  int start_line = 0;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [no, ln] = lines[i];
    auto colon = ln.find(':');
    if (colon == std::string::npos) throw ParseError(no, "expected 'key: value'");
    std::string key = trim(ln.substr(0, colon));
    std::string rest = trim(ln.substr(colon + 1));
    if (key == "agents") {
      if (parse_int(rest, no) != 2) throw ParseError(no, "only 2 agents are supported");
    } else if (key == "discount") {
      m.discount = parse_double(rest, no);
    } else if (key == "horizon") {
      m.horizon = parse_int(rest, no);
      have_horizon = true;
    } else if (key == "states") {
      m.state_names = names_from(split_ws(rest), "s", no);
      have_states = true;
    } else if (key == "actions" || key == "observations") {
      std::vector<std::string> rows;
      if (!rest.empty()) rows.push_back(rest);
      while (rows.size() < 2) {
        if (++i >= lines.size()) throw ParseError(no, "expected two lines of " + key);
        rows.push_back(lines[i].second);
      }
      for (int p = 0; p < 2; ++p) {
        auto names = names_from(split_ws(rows[p]), key == "actions" ? "a" : "z", no);
        if (key == "actions")
          m.action_names[p] = names;
        else
          m.obs_names[p] = names;
      }
      (key == "actions" ? have_actions : have_obs) = true;
    } else if (key == "start") {
      start_toks = split_ws(rest);
      start_line = no;
      have_start = true;
    } else if (key == "T" || key == "R") {
      entries.push_back({no, rest, key == "T"});
    } else {
      throw ParseError(no, "unknown key '" + key + "'");
    }
  }
  if (!have_states) throw ParseError(0, "missing 'states'");
  if (!have_actions) throw ParseError(0, "missing 'actions'");
  if (!have_obs) throw ParseError(0, "missing 'observations'");
  if (!have_horizon) throw ParseError(0, "missing 'horizon'");

  const int S = m.num_states();
  if (!have_start || (start_toks.size() == 1 && start_toks[0] == "uniform")) {
    m.b0.assign(S, 1.0 / S);
  } else {
    if (static_cast<int>(start_toks.size()) != S)
      throw ParseError(start_line, "start needs one probability per state");
    for (auto& t : start_toks) m.b0.push_back(parse_double(t, start_line));
  }

  m.trans.assign(static_cast<std::size_t>(S) * m.num_actions(0) * m.num_actions(1) * S *
                     m.num_obs(0) * m.num_obs(1),
                 0.0);
  m.reward.assign(static_cast<std::size_t>(S) * m.num_actions(0) * m.num_actions(1), 0.0);

  for (const auto& e : entries) {
    auto f = split_fields(e.body);
    if (e.is_trans) {
      if (f.size() != 5) throw ParseError(e.line, "T expects 'a1 a2 : s : s' : z1 z2 : prob'");
      auto acts = split_ws(f[0]);
      auto obs = split_ws(f[3]);
      if (acts.size() != 2) throw ParseError(e.line, "T expects two actions");
      if (obs.size() != 2) throw ParseError(e.line, "T expects two observations");
      double prob = parse_double(f[4], e.line);
      for (int a1 : resolve(m.action_names[0], acts[0], e.line, "action"))
        for (int a2 : resolve(m.action_names[1], acts[1], e.line, "action"))
          for (int s : resolve(m.state_names, f[1], e.line, "state"))
            for (int s2 : resolve(m.state_names, f[2], e.line, "state"))
              for (int z1 : resolve(m.obs_names[0], obs[0], e.line, "observation"))
                for (int z2 : resolve(m.obs_names[1], obs[1], e.line, "observation"))
                  m.trans[m.trans_index(s, a1, a2, s2, z1, z2)] = prob;
    } else {
      if (f.size() != 3) throw ParseError(e.line, "R expects 'a1 a2 : s : value'");
      auto acts = split_ws(f[0]);
      if (acts.size() != 2) throw ParseError(e.line, "R expects two actions");
      double val = parse_double(f[2], e.line);
      for (int a1 : resolve(m.action_names[0], acts[0], e.line, "action"))
        for (int a2 : resolve(m.action_names[1], acts[1], e.line, "action"))
          for (int s : resolve(m.state_names, f[1], e.line, "state"))
            m.reward[(static_cast<std::size_t>(s) * m.num_actions(0) + a1) * m.num_actions(1) + a2] = val;
    }
  }
  m.validate();
  return m;
}

PosgModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

PosgModel swap_players(const PosgModel& m) {
  PosgModel w;
  w.state_names = m.state_names;
  w.action_names[0] = m.action_names[1];
  w.action_names[1] = m.action_names[0];
  w.obs_names[0] = m.obs_names[1];
  w.obs_names[1] = m.obs_names[0];
  w.horizon = m.horizon;
  w.discount = m.discount;
  w.b0 = m.b0;
  w.trans.assign(m.trans.size(), 0.0);
  w.reward.assign(m.reward.size(), 0.0);
  const int S = m.num_states();
  for (int s = 0; s < S; ++s)
    for (int a1 = 0; a1 < m.num_actions(0); ++a1)
      for (int a2 = 0; a2 < m.num_actions(1); ++a2) {
        w.reward[(static_cast<std::size_t>(s) * w.num_actions(0) + a2) * w.num_actions(1) + a1] =
            -m.r(s, a1, a2);
        for (int s2 = 0; s2 < S; ++s2)
          for (int z1 = 0; z1 < m.num_obs(0); ++z1)
            for (int z2 = 0; z2 < m.num_obs(1); ++z2)
              w.trans[w.trans_index(s, a2, a1, s2, z2, z1)] = m.p(s, a1, a2, s2, z1, z2);
      }
  w.r_min = -m.r_max;
  w.r_max = -m.r_min;
  return w;
}

Hist extend(const PosgModel& m, int player, Hist h, int action, int obs) {
  return h * m.branching(player) + static_cast<Hist>(action) * m.num_obs(player) + obs;
}

Hist parent(const PosgModel& m, int player, Hist h) { return h / m.branching(player); }

Step last_step(const PosgModel& m, int player, Hist h) {
  Hist digit = h % m.branching(player);
  return {static_cast<int>(digit / m.num_obs(player)), static_cast<int>(digit % m.num_obs(player))};
}

std::vector<Step> decode(const PosgModel& m, int player, Hist h, int depth) {
  std::vector<Step> out(depth);
  for (int d = depth - 1; d >= 0; --d) {
    out[d] = last_step(m, player, h);
    h = parent(m, player, h);
  }
  return out;
}

Hist encode(const PosgModel& m, int player, const std::vector<Step>& steps) {
  Hist h = 0;
  for (const auto& st : steps) h = extend(m, player, h, st.action, st.obs);
  return h;
}

Hist count_histories(const PosgModel& m, int player, int depth) {
  Hist n = 1;
  for (int d = 0; d < depth; ++d) n *= m.branching(player);
  return n;
}

double bayes_step(const PosgModel& m, const std::vector<double>& b, int a1, int a2, int z1, int z2,
                  std::vector<double>& out) {
  const int S = m.num_states();
  out.assign(S, 0.0);
  for (int s = 0; s < S; ++s) {
    if (b[s] <= 0.0) continue;
    for (int s2 = 0; s2 < S; ++s2) out[s2] += b[s] * m.p(s, a1, a2, s2, z1, z2);
  }
  double mass = 0.0;
  for (double v : out) mass += v;
  return mass;
}

BeliefResult belief_for_history(const PosgModel& m, const JointHistory& h) {
  BeliefResult res;
  res.belief = m.b0;
  res.reach = 1.0;
  res.possible = true;
  auto s1 = decode(m, 0, h.h1, h.depth);
  auto s2 = decode(m, 1, h.h2, h.depth);
  std::vector<double> next;
  for (int d = 0; d < h.depth; ++d) {
    double mass = bayes_step(m, res.belief, s1[d].action, s2[d].action, s1[d].obs, s2[d].obs, next);
    res.reach *= mass;
    if (mass < kProbEps || res.reach < kProbEps) {
      res.reach = 0.0;
      res.possible = false;
      res.belief = next;
      return res;
    }
    for (double& v : next) v /= mass;
    res.belief.swap(next);
  }
  return res;
}

double expected_state_reward(const PosgModel& m, const std::vector<double>& b, int a1, int a2) {
  double v = 0.0;
  for (int s = 0; s < m.num_states(); ++s) v += b[s] * m.r(s, a1, a2);
  return v;
}

BeliefResult BeliefCache::get(const JointHistory& h) {
  {
    std::shared_lock lock(mu_);
    auto it = cache_.find(h);
    if (it != cache_.end()) return it->second;
  }
  BeliefResult res = belief_for_history(model_, h);
  std::unique_lock lock(mu_);
  return cache_.emplace(h, std::move(res)).first->second;
}

std::size_t BeliefCache::size() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

double horizon_factor(int H, int tau, double gamma) {
  if (tau >= H) return 0.0;
  if (gamma == 1.0) return static_cast<double>(H - tau);
  return (1.0 - std::pow(gamma, H - tau)) / (1.0 - gamma);
}

}  // namespace zsposg
