#include "mrmix/scene.hpp"

#include <algorithm>

namespace mrmix {

std::vector<double> AudioClip::mono() const {
  const std::size_t n = frames();
  std::vector<double> out(n);
  if (channels == 1) {
    std::copy(samples.begin(), samples.end(), out.begin());
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int c = 0; c < channels; ++c) sum += samples[i * channels + c];
    out[i] = sum / channels;
  }
  return out;
}

ListenerPose ListenerPath::at(double t) const {
  if (waypoints.empty()) return {};
  if (t <= waypoints.front().time) return {waypoints.front().position, waypoints.front().yaw};
  if (t >= waypoints.back().time) return {waypoints.back().position, waypoints.back().yaw};
  auto next = std::upper_bound(waypoints.begin(), waypoints.end(), t,
                               [](double v, const Waypoint& w) { return v < w.time; });
  const Waypoint& b = *next;
  const Waypoint& a = *(next - 1);
  const double u = (t - a.time) / (b.time - a.time);
  return {a.position + u * (b.position - a.position), a.yaw + u * (b.yaw - a.yaw)};
}

const SoundSource* Scene::find_source(std::string_view source_id) const {
  for (const auto& s : sources)
    if (s.id == source_id) return &s;
  return nullptr;
}

double TransparencyParams::tau_at(double t) const {
  double value = tau;
  for (const auto& p : tau_automation) {
    if (p.time > t) break;
    value = p.tau;
  }
  return value;
}

int selector_specificity(std::string_view selector, const SoundSource& source) {
  if (selector == source.id) return 3;
  if (!source.group.empty() && selector == source.group) return 2;
  if (selector == to_string(source.category)) return 1;
  if (selector == "protected" && source.is_protected && source.category == SoundCategory::RealWorld)
    return 1;
  return 0;
}

bool TimelineEntry::has_tag(std::string_view t) const {
  return std::find(applied_manipulations.begin(), applied_manipulations.end(), t) !=
         applied_manipulations.end();
}

std::string_view to_string(SoundCategory c) {
  return c == SoundCategory::RealWorld ? "real_world" : "virtual";
}

std::string_view to_string(Ear e) {
  switch (e) {
    case Ear::Left: return "left";
    case Ear::Right: return "right";
    case Ear::Both: return "both";
  }
  return "both";
}

std::string_view to_string(ScenarioId s) {
  switch (s) {
    case ScenarioId::RwFocused: return "rw_focused";
    case ScenarioId::VrFocused: return "vr_focused";
    case ScenarioId::FullyMixed: return "fully_mixed";
  }
  return "rw_focused";
}

std::optional<SoundCategory> category_from_string(std::string_view s) {
  if (s == "real_world") return SoundCategory::RealWorld;
  if (s == "virtual") return SoundCategory::Virtual;
  return std::nullopt;
}

std::optional<Ear> ear_from_string(std::string_view s) {
  if (s == "left") return Ear::Left;
  if (s == "right") return Ear::Right;
  if (s == "both") return Ear::Both;
  return std::nullopt;
}

std::optional<ScenarioId> scenario_from_string(std::string_view s) {
  if (s == "rw_focused" || s == "rw") return ScenarioId::RwFocused;
  if (s == "vr_focused" || s == "vr") return ScenarioId::VrFocused;
  if (s == "fully_mixed" || s == "mixed") return ScenarioId::FullyMixed;
  return std::nullopt;
}

}  // namespace mrmix
