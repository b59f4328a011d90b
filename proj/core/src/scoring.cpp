#include "mrmix/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mrmix/errors.hpp"
#include "mrmix/rng.hpp"

namespace mrmix {

namespace {

bool valid_key(int key) { return key >= 1 && key <= 4; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

Press press_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "press must be an object");
  if (!j.contains("t") || !j["t"].is_number()) throw SchemaError(where + "/t", "missing number");
  if (!j.contains("key") || !j["key"].is_number_integer())
    throw SchemaError(where + "/key", "missing integer");
  return {j["t"].get<double>(), j["key"].get<int>()};
}

Press press_from_csv(std::string_view line, std::size_t lineno) {
  const std::string where = "line " + std::to_string(lineno);
  const auto comma = line.find(',');
  if (comma == std::string_view::npos) throw SchemaError(where, "expected 't,key'");
  const std::string t_text(trim(line.substr(0, comma)));
  const std::string_view key_text = trim(line.substr(comma + 1));
  Press p;
  std::size_t used = 0;
  try {
    p.t = std::stod(t_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t_text.size()) throw SchemaError(where, "bad time '" + t_text + "'");
  auto [ptr, ec] = std::from_chars(key_text.data(), key_text.data() + key_text.size(), p.key);
  if (ec != std::errc{} || ptr != key_text.data() + key_text.size())
    throw SchemaError(where, "bad key '" + std::string(key_text) + "'");
  return p;
}

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

MetricsReport score(const Timeline& timeline, const ResponseLog& responses, double window) {
  MetricsReport r;
  r.window = window;

  std::vector<const TimelineEntry*> events;
  for (const auto& e : timeline.entries) {
    if (!e.identification_key) continue;
    if (e.dropped) {
      ++r.dropped_events;
      continue;
    }
    events.push_back(&e);
    ++r.per_key[*e.identification_key].events;
  }
  std::stable_sort(events.begin(), events.end(), [](const auto* a, const auto* b) {
    return a->actual_onset < b->actual_onset;
  });
  r.total_events = events.size();

  std::vector<Press> presses = responses.presses;
  std::stable_sort(presses.begin(), presses.end(),
                   [](const Press& a, const Press& b) { return a.t < b.t; });

  std::vector<bool> taken(events.size(), false);
  for (const Press& p : presses) {
    if (!valid_key(p.key)) {
      ++r.rejected_presses;
      continue;
    }
    bool hit = false;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const TimelineEntry& e = *events[i];
      if (taken[i] || *e.identification_key != p.key) continue;
      if (e.actual_onset <= p.t && p.t <= e.actual_onset + window) {
        taken[i] = true;
        r.matches.push_back({e.event_id, p.key, e.actual_onset, p.t});
        hit = true;
        break;
      }
    }
    if (!hit) ++r.unmatched_presses;
  }

  r.matched_events = r.matches.size();
  r.success_rate = r.total_events == 0 ? 0.0
                                       : static_cast<double>(r.matched_events) / r.total_events;
  if (!r.matches.empty()) {
    double sum = 0.0;
    for (const auto& m : r.matches) sum += m.delay();
    r.mean_delay = sum / static_cast<double>(r.matches.size());
  }
  std::map<int, double> delay_sums;
  for (const auto& m : r.matches) {
    ++r.per_key[m.key].matched;
    delay_sums[m.key] += m.delay();
  }
  for (auto& [key, ks] : r.per_key) {
    ks.success_rate = ks.events == 0 ? 0.0 : static_cast<double>(ks.matched) / ks.events;
    if (ks.matched > 0) ks.mean_delay = delay_sums[key] / static_cast<double>(ks.matched);
  }
  return r;
}

ResponseLog synthetic_responder(const Timeline& timeline, const ResponderProfile& profile) {
  if (!(profile.miss_prob >= 0.0 && profile.miss_prob <= 1.0))
    throw InvariantError("responder.miss_prob_range", "miss_prob must lie in [0, 1]");
  Rng rng(profile.seed);
  ResponseLog log;
  for (const auto& e : timeline.entries) {
    if (!e.identification_key || e.dropped) continue;
    // Both draws happen for every event so one event's outcome does not
    // shift the stream for the rest.
    const double miss = rng.uniform();
    const double jitter = rng.uniform(-profile.delay_jitter, profile.delay_jitter);
    if (miss < profile.miss_prob) continue;
    log.presses.push_back({e.actual_onset + std::max(0.05, profile.delay_mean + jitter),
                           *e.identification_key});
  }
  std::stable_sort(log.presses.begin(), log.presses.end(),
                   [](const Press& a, const Press& b) { return a.t < b.t; });
  return log;
}

ResponseLog parse_responses(std::string_view text) {
  ResponseLog log;
  std::string_view body = trim(text);
  while (!body.empty() && (body.front() == '\n')) body.remove_prefix(1);

  if (!body.empty() && body.front() == '{' && body.find('\n') != std::string_view::npos &&
      !nlohmann::json::accept(body)) {
    // JSON lines.
    std::size_t lineno = 0;
    std::istringstream in{std::string(body)};
    for (std::string line; std::getline(in, line);) {
      ++lineno;
      if (trim(line).empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("line " + std::to_string(lineno), e.what());
      }
      log.presses.push_back(press_from_json(j, "line " + std::to_string(lineno)));
    }
  } else if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("", e.what());
    }
    if (j.contains("presses")) {
      if (!j["presses"].is_array()) throw SchemaError("/presses", "must be an array");
      for (std::size_t i = 0; i < j["presses"].size(); ++i)
        log.presses.push_back(press_from_json(j["presses"][i], "/presses/" + std::to_string(i)));
    } else {
      log.presses.push_back(press_from_json(j, "line 1"));
    }
  } else {
    std::size_t lineno = 0;
    std::istringstream in{std::string(body)};
    for (std::string line; std::getline(in, line);) {
      ++lineno;
      const std::string_view l = trim(line);
      if (l.empty() || l.front() == '#') continue;
      if (lineno == 1 && l.substr(0, 1) == "t") continue;  // header
      log.presses.push_back(press_from_csv(l, lineno));
    }
  }
  for (std::size_t i = 1; i < log.presses.size(); ++i)
    if (log.presses[i].t < log.presses[i - 1].t)
      throw InvariantError("responses.sorted",
                           "press " + std::to_string(i) + " is earlier than the one before it");
  return log;
}

std::string serialize_responses_jsonl(const ResponseLog& log) {
  std::string out;
  for (const auto& p : log.presses) {
    nlohmann::ordered_json j;
    j["t"] = p.t;
    j["key"] = p.key;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string serialize_responses_csv(const ResponseLog& log) {
  std::string out = "t,key\n";
  for (const auto& p : log.presses) {
    out += nlohmann::json(p.t).dump();
    out += ',';
    out += std::to_string(p.key);
    out += '\n';
  }
  return out;
}

std::string metrics_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["success_rate"] = r.success_rate;
  j["mean_delay"] = opt(r.mean_delay);
  j["total_events"] = r.total_events;
  j["matched_events"] = r.matched_events;
  j["unmatched_presses"] = r.unmatched_presses;
  j["rejected_presses"] = r.rejected_presses;
  j["dropped_events"] = r.dropped_events;
  j["window"] = r.window;
  nlohmann::json per_key = nlohmann::json::object();
  for (const auto& [key, ks] : r.per_key)
    per_key[std::to_string(key)] = {{"events", ks.events},
                                    {"matched", ks.matched},
                                    {"success_rate", ks.success_rate},
                                    {"mean_delay", opt(ks.mean_delay)}};
  j["per_key"] = per_key;
  nlohmann::json matches = nlohmann::json::array();
  for (const auto& m : r.matches)
    matches.push_back({{"event_id", m.event_id},
                       {"key", m.key},
                       {"onset", m.onset},
                       {"press_time", m.press_time},
                       {"delay", m.delay()}});
  j["matches"] = matches;
  return j.dump(2);
}

}  // namespace mrmix
