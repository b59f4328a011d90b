#include "mrmix/scene_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mrmix/errors.hpp"
#include "mrmix/validate.hpp"

namespace mrmix {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Reading

/// Checked view of one JSON object. Unknown keys are rejected up front.
class Obj {
 public:
  Obj(const json& j, std::string path, std::initializer_list<std::string_view> required,
      std::initializer_list<std::string_view> optional = {})
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw SchemaError(where(), "expected an object");
    for (auto key : required)
      if (!j.contains(std::string(key))) throw SchemaError(at(key), "missing required key");
    for (const auto& [key, _] : j.items()) {
      bool known = false;
      for (auto k : required) known = known || k == key;
      for (auto k : optional) known = known || k == key;
      if (!known) throw SchemaError(at(key), "unknown key");
    }
  }

  std::string at(std::string_view key) const { return path_ + "/" + std::string(key); }
  bool has(std::string_view key) const {
    auto it = j_.find(std::string(key));
    return it != j_.end() && !it->is_null();
  }
  const json& operator[](std::string_view key) const { return j_.at(std::string(key)); }

  double number(std::string_view key) const {
    const json& v = (*this)[key];
    if (!v.is_number()) throw SchemaError(at(key), "expected a number");
    return v.get<double>();
  }
  double number_or(std::string_view key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }
  int integer(std::string_view key) const {
    const json& v = (*this)[key];
    if (!v.is_number_integer()) throw SchemaError(at(key), "expected an integer");
    return v.get<int>();
  }
  std::optional<int> opt_integer(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return integer(key);
  }
  std::uint64_t unsigned64(std::string_view key) const {
    const json& v = (*this)[key];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw SchemaError(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  bool boolean_or(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = (*this)[key];
    if (!v.is_boolean()) throw SchemaError(at(key), "expected a boolean");
    return v.get<bool>();
  }
  std::string string(std::string_view key) const {
    const json& v = (*this)[key];
    if (!v.is_string()) throw SchemaError(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string_or(std::string_view key, std::string fallback) const {
    return has(key) ? string(key) : std::move(fallback);
  }
  const json& array(std::string_view key) const {
    const json& v = (*this)[key];
    if (!v.is_array()) throw SchemaError(at(key), "expected an array");
    return v;
  }
  const json& object(std::string_view key) const {
    const json& v = (*this)[key];
    if (!v.is_object()) throw SchemaError(at(key), "expected an object");
    return v;
  }

 private:
  std::string where() const { return path_.empty() ? "/" : path_; }
  const json& j_;
  std::string path_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("malformed JSON: ") + e.what());
  }
}

void check_header(const json& j, std::string_view kind) {
  if (!j.is_object()) throw SchemaError("/", "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string() || j["kind"].get<std::string>() != kind)
    throw SchemaError("/kind", "expected \"" + std::string(kind) + "\"");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw SchemaError("/schema_version", "missing integer");
  if (j["schema_version"].get<int>() != kSchemaVersion)
    throw SchemaError("/schema_version",
                      "unsupported version " + std::to_string(j["schema_version"].get<int>()));
}

template <class E>
E enum_value(const Obj& o, std::string_view key, std::optional<E> (*from)(std::string_view)) {
  const std::string s = o.string(key);
  auto v = from(s);
  if (!v) throw SchemaError(o.at(key), "unknown value \"" + s + "\"");
  return *v;
}

Vec3 read_vec3(const json& j, const std::string& path) {
  Obj o(j, path, {"x", "y", "z"});
  return {o.number("x"), o.number("y"), o.number("z")};
}

Placement read_placement(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw SchemaError(path + "/type", "missing placement type");
  const std::string type = j["type"].get<std::string>();
  if (type == "spatial") {
    Obj o(j, path, {"type", "position"}, {"listener_relative"});
    return SpatialPlacement{read_vec3(o["position"], o.at("position")),
                            o.boolean_or("listener_relative", false)};
  }
  if (type == "ear") {
    Obj o(j, path, {"type", "channel"});
    return EarPlacement{enum_value<Ear>(o, "channel", ear_from_string)};
  }
  throw SchemaError(path + "/type", "unknown placement type \"" + type + "\"");
}

std::optional<ScenarioId> read_scenario(const Obj& o) {
  if (!o.has("scenario")) return std::nullopt;
  return enum_value<ScenarioId>(o, "scenario", scenario_from_string);
}

SoundSource read_source(const json& j, const std::string& path) {
  Obj o(j, path, {"id", "clip", "category", "placement"},
        {"group", "identification_key", "protected"});
  SoundSource s;
  s.id = o.string("id");
  s.clip = o.string("clip");
  s.group = o.string_or("group", "");
  s.category = enum_value<SoundCategory>(o, "category", category_from_string);
  s.placement = read_placement(o["placement"], o.at("placement"));
  s.identification_key = o.opt_integer("identification_key");
  s.is_protected = o.boolean_or("protected", false);
  return s;
}

SoundEvent read_event(const json& j, const std::string& path) {
  Obj o(j, path, {"id", "source", "onset", "duration"}, {"loop"});
  return {o.string("id"), o.string("source"), o.number("onset"), o.number("duration"),
          o.boolean_or("loop", false)};
}

std::vector<SoundEvent> read_events(const Obj& o, std::string_view key) {
  std::vector<SoundEvent> out;
  if (!o.has(key)) return out;
  const json& arr = o.array(key);
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(read_event(arr[i], o.at(key) + "/" + std::to_string(i)));
  return out;
}

ListenerPath read_listener(const json& j, const std::string& path) {
  Obj o(j, path, {"waypoints"});
  ListenerPath lp;
  const json& arr = o.array("waypoints");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string wp = o.at("waypoints") + "/" + std::to_string(i);
    Obj w(arr[i], wp, {"t", "position"}, {"yaw"});
    lp.waypoints.push_back({w.number("t"), read_vec3(w["position"], w.at("position")),
                            w.number_or("yaw", 0.0)});
  }
  return lp;
}

StyleFilter read_style(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw SchemaError(path + "/type", "missing style type");
  const std::string type = j["type"].get<std::string>();
  if (type == "lowpass") return LowPass{Obj(j, path, {"type", "cutoff"}).number("cutoff")};
  if (type == "highpass") return HighPass{Obj(j, path, {"type", "cutoff"}).number("cutoff")};
  if (type == "telephone") {
    Obj o(j, path, {"type"}, {"low", "high"});
    return Telephone{o.number_or("low", 300.0), o.number_or("high", 3400.0)};
  }
  if (type == "pitch") return PitchScale{Obj(j, path, {"type", "ratio"}).number("ratio")};
  throw SchemaError(path + "/type", "unknown style type \"" + type + "\"");
}

EarconTrigger read_trigger(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw SchemaError(path + "/type", "missing trigger type");
  const std::string type = j["type"].get<std::string>();
  if (type == "on_event") return OnEvent{Obj(j, path, {"type", "target"}).string("target")};
  if (type == "on_proximity") {
    Obj o(j, path, {"type", "target", "radius"});
    return OnProximity{o.string("target"), o.number("radius")};
  }
  throw SchemaError(path + "/type", "unknown trigger type \"" + type + "\"");
}

template <class V, class F>
std::map<std::string, V> read_selector_map(const Obj& o, std::string_view key, F read_value) {
  std::map<std::string, V> out;
  if (!o.has(key)) return out;
  for (const auto& [sel, value] : o.object(key).items())
    out.emplace(sel, read_value(value, o.at(key) + "/" + sel));
  return out;
}

// ---------------------------------------------------------------------------
// Writing

json write_vec3(Vec3 v) { return {{"x", v.x}, {"y", v.y}, {"z", v.z}}; }

json write_placement(const Placement& p) {
  if (const auto* ear = std::get_if<EarPlacement>(&p))
    return {{"type", "ear"}, {"channel", to_string(ear->channel)}};
  const auto& sp = std::get<SpatialPlacement>(p);
  return {{"type", "spatial"},
          {"position", write_vec3(sp.position)},
          {"listener_relative", sp.listener_relative}};
}

json write_event(const SoundEvent& e) {
  return {{"id", e.id},
          {"source", e.source},
          {"onset", e.scheduled_onset},
          {"duration", e.duration},
          {"loop", e.loop}};
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json scenario_json(const std::optional<ScenarioId>& s) {
  return s ? json(to_string(*s)) : json(nullptr);
}

struct StyleWriter {
  json operator()(const LowPass& f) const { return {{"type", "lowpass"}, {"cutoff", f.cutoff}}; }
  json operator()(const HighPass& f) const { return {{"type", "highpass"}, {"cutoff", f.cutoff}}; }
  json operator()(const Telephone& f) const {
    return {{"type", "telephone"}, {"low", f.low}, {"high", f.high}};
  }
  json operator()(const PitchScale& f) const { return {{"type", "pitch"}, {"ratio", f.ratio}}; }
};

struct TriggerWriter {
  json operator()(const OnEvent& t) const { return {{"type", "on_event"}, {"target", t.target}}; }
  json operator()(const OnProximity& t) const {
    return {{"type", "on_proximity"}, {"target", t.target}, {"radius", t.radius}};
  }
};

json document(std::string_view kind) {
  return {{"schema_version", kSchemaVersion}, {"kind", kind}};
}

void throw_first(const std::vector<Violation>& violations) {
  if (!violations.empty())
    throw InvariantError(violations.front().rule, violations.front().message);
}

}  // namespace

// ---------------------------------------------------------------------------

Scene decode_scene(std::string_view text) {
  const json j = parse_json(text);
  check_header(j, "scene");
  Obj o(j, "", {"schema_version", "kind", "id", "duration", "sources", "events"},
        {"scenario", "seed", "ambient_beds", "listener", "clip_files"});
  Scene s;
  s.id = o.string("id");
  s.scenario = read_scenario(o);
  s.duration = o.number("duration");
  s.seed = o.has("seed") ? o.unsigned64("seed") : 0;
  const json& sources = o.array("sources");
  for (std::size_t i = 0; i < sources.size(); ++i)
    s.sources.push_back(read_source(sources[i], "/sources/" + std::to_string(i)));
  s.ambient_beds = read_events(o, "ambient_beds");
  s.events = read_events(o, "events");
  if (o.has("listener"))
    s.listener = read_listener(o["listener"], "/listener");
  else
    s.listener.waypoints = {Waypoint{}};
  if (o.has("clip_files")) {
    for (const auto& [id, file] : o.object("clip_files").items()) {
      if (!file.is_string()) throw SchemaError("/clip_files/" + id, "expected a string");
      s.clip_files.emplace(id, file.get<std::string>());
    }
  }
  return s;
}

ManipulationPlan decode_plan(std::string_view text) {
  const json j = parse_json(text);
  check_header(j, "plan");
  Obj o(j, "", {"schema_version", "kind"},
        {"name", "transparency", "envelope_ranks", "envelope_rank_step_db", "position_overrides",
         "style_filters", "time_shift", "earcons"});
  ManipulationPlan p;
  p.name = o.string_or("name", "");
  if (o.has("transparency")) {
    Obj t(o["transparency"], "/transparency", {}, {"tau", "eta", "s_default", "z", "tau_automation"});
    auto& tp = p.transparency;
    tp.tau = t.number_or("tau", tp.tau);
    tp.eta = t.number_or("eta", tp.eta);
    tp.s_default = t.number_or("s_default", tp.s_default);
    tp.z = t.number_or("z", tp.z);
    if (t.has("tau_automation")) {
      const json& arr = t.array("tau_automation");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Obj pt(arr[i], "/transparency/tau_automation/" + std::to_string(i), {"t", "tau"});
        tp.tau_automation.push_back({pt.number("t"), pt.number("tau")});
      }
    }
  }
  p.envelope_ranks = read_selector_map<int>(o, "envelope_ranks", [](const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SchemaError(path, "expected an integer rank");
    return v.get<int>();
  });
  p.envelope_rank_step_db = o.number_or("envelope_rank_step_db", p.envelope_rank_step_db);
  p.position_overrides = read_selector_map<Placement>(o, "position_overrides", read_placement);
  p.style_filters = read_selector_map<StyleFilter>(o, "style_filters", read_style);
  if (o.has("time_shift")) {
    Obj t(o["time_shift"], "/time_shift", {}, {"enabled", "guard_gap", "protected"});
    p.time_shift.enabled = t.boolean_or("enabled", false);
    p.time_shift.guard_gap = t.number_or("guard_gap", 0.0);
    if (t.has("protected")) {
      const json& arr = t.array("protected");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string())
          throw SchemaError("/time_shift/protected/" + std::to_string(i), "expected a string");
        p.time_shift.protected_selectors.insert(arr[i].get<std::string>());
      }
    }
  }
  if (o.has("earcons")) {
    const json& arr = o.array("earcons");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/earcons/" + std::to_string(i);
      Obj e(arr[i], path, {"clip", "trigger"}, {"lead_time"});
      p.earcons.push_back({e.string("clip"), read_trigger(e["trigger"], e.at("trigger")),
                           e.number_or("lead_time", 0.4)});
    }
  }
  return p;
}

Timeline decode_timeline(std::string_view text) {
  const json j = parse_json(text);
  check_header(j, "timeline");
  Obj o(j, "", {"schema_version", "kind", "scene_id", "duration", "entries"},
        {"scenario", "condition", "earcons"});
  Timeline t;
  t.scene_id = o.string("scene_id");
  t.scenario = read_scenario(o);
  t.condition = o.string_or("condition", "");
  t.duration = o.number("duration");
  const json& entries = o.array("entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = "/entries/" + std::to_string(i);
    Obj e(entries[i], path,
          {"event_id", "source", "category", "scheduled_onset", "actual_onset", "duration"},
          {"identification_key", "dropped", "applied_manipulations", "gain"});
    TimelineEntry te;
    te.event_id = e.string("event_id");
    te.source = e.string("source");
    te.identification_key = e.opt_integer("identification_key");
    te.category = enum_value<SoundCategory>(e, "category", category_from_string);
    te.scheduled_onset = e.number("scheduled_onset");
    te.actual_onset = e.number("actual_onset");
    te.duration = e.number("duration");
    te.dropped = e.boolean_or("dropped", false);
    if (e.has("applied_manipulations")) {
      const json& tags = e.array("applied_manipulations");
      for (std::size_t k = 0; k < tags.size(); ++k) {
        if (!tags[k].is_string())
          throw SchemaError(path + "/applied_manipulations/" + std::to_string(k), "expected a string");
        te.applied_manipulations.push_back(tags[k].get<std::string>());
      }
    }
    te.gain = e.number_or("gain", 0.0);
    t.entries.push_back(std::move(te));
  }
  if (o.has("earcons")) {
    const json& arr = o.array("earcons");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Obj c(arr[i], "/earcons/" + std::to_string(i), {"clip", "onset"},
            {"trigger_source", "trigger_event"});
      t.earcons.push_back({c.string("clip"), c.number("onset"), c.string_or("trigger_source", ""),
                           c.string_or("trigger_event", "")});
    }
  }
  return t;
}

Scene parse_scene(std::string_view text) {
  Scene s = decode_scene(text);
  throw_first(validate_scene(s));
  return s;
}

ManipulationPlan parse_plan(std::string_view text) {
  ManipulationPlan p = decode_plan(text);
  throw_first(validate_plan(p));
  return p;
}

Timeline parse_timeline(std::string_view text) {
  Timeline t = decode_timeline(text);
  throw_first(validate_timeline(t));
  return t;
}

std::string serialize_scene(const Scene& s) {
  json j = document("scene");
  j["id"] = s.id;
  j["scenario"] = scenario_json(s.scenario);
  j["duration"] = s.duration;
  j["seed"] = s.seed;
  json sources = json::array();
  for (const auto& src : s.sources)
    sources.push_back({{"id", src.id},
                       {"clip", src.clip},
                       {"group", src.group},
                       {"category", to_string(src.category)},
                       {"placement", write_placement(src.placement)},
                       {"identification_key", opt_json(src.identification_key)},
                       {"protected", src.is_protected}});
  j["sources"] = sources;
  json beds = json::array();
  for (const auto& e : s.ambient_beds) beds.push_back(write_event(e));
  j["ambient_beds"] = beds;
  json events = json::array();
  for (const auto& e : s.events) events.push_back(write_event(e));
  j["events"] = events;
  json waypoints = json::array();
  for (const auto& w : s.listener.waypoints)
    waypoints.push_back({{"t", w.time}, {"position", write_vec3(w.position)}, {"yaw", w.yaw}});
  j["listener"] = {{"waypoints", waypoints}};
  j["clip_files"] = json::object();
  for (const auto& [id, file] : s.clip_files) j["clip_files"][id] = file;
  return j.dump(2) + "\n";
}

std::string serialize_plan(const ManipulationPlan& p) {
  json j = document("plan");
  j["name"] = p.name;
  json automation = json::array();
  for (const auto& pt : p.transparency.tau_automation)
    automation.push_back({{"t", pt.time}, {"tau", pt.tau}});
  j["transparency"] = {{"tau", p.transparency.tau},
                       {"eta", p.transparency.eta},
                       {"s_default", p.transparency.s_default},
                       {"z", p.transparency.z},
                       {"tau_automation", automation}};
  j["envelope_ranks"] = json::object();
  for (const auto& [sel, rank] : p.envelope_ranks) j["envelope_ranks"][sel] = rank;
  j["envelope_rank_step_db"] = p.envelope_rank_step_db;
  j["position_overrides"] = json::object();
  for (const auto& [sel, pl] : p.position_overrides) j["position_overrides"][sel] = write_placement(pl);
  j["style_filters"] = json::object();
  for (const auto& [sel, f] : p.style_filters) j["style_filters"][sel] = std::visit(StyleWriter{}, f);
  j["time_shift"] = {{"enabled", p.time_shift.enabled},
                     {"guard_gap", p.time_shift.guard_gap},
                     {"protected", p.time_shift.protected_selectors}};
  json earcons = json::array();
  for (const auto& e : p.earcons)
    earcons.push_back({{"clip", e.earcon_clip},
                       {"trigger", std::visit(TriggerWriter{}, e.trigger)},
                       {"lead_time", e.lead_time}});
  j["earcons"] = earcons;
  return j.dump(2) + "\n";
}

std::string serialize_timeline(const Timeline& t) {
  json j = document("timeline");
  j["scene_id"] = t.scene_id;
  j["scenario"] = scenario_json(t.scenario);
  j["condition"] = t.condition;
  j["duration"] = t.duration;
  json entries = json::array();
  for (const auto& e : t.entries)
    entries.push_back({{"event_id", e.event_id},
                       {"source", e.source},
                       {"identification_key", opt_json(e.identification_key)},
                       {"category", to_string(e.category)},
                       {"scheduled_onset", e.scheduled_onset},
                       {"actual_onset", e.actual_onset},
                       {"duration", e.duration},
                       {"dropped", e.dropped},
                       {"applied_manipulations", e.applied_manipulations},
                       {"gain", e.gain}});
  j["entries"] = entries;
  json earcons = json::array();
  for (const auto& c : t.earcons)
    earcons.push_back({{"clip", c.clip},
                       {"onset", c.onset},
                       {"trigger_source", c.trigger_source},
                       {"trigger_event", c.trigger_event}});
  j["earcons"] = earcons;
  return j.dump(2) + "\n";
}

std::string document_kind(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw SchemaError("/kind", "not a document with a kind");
  return j["kind"].get<std::string>();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error("write failed: " + path.string());
}

}  // namespace mrmix
