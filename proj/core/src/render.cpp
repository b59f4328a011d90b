#include "mrmix/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "mrmix/errors.hpp"
#include "mrmix/validate.hpp"
#include "mrmix/wav.hpp"

namespace mrmix {

namespace {

const AudioClip& require_clip(const ClipBank& bank, const std::string& id) {
  auto it = bank.find(id);
  if (it == bank.end()) throw Error("missing clip '" + id + "'");
  return it->second;
}

void throw_first(const std::vector<Violation>& v) {
  if (!v.empty()) throw InvariantError(v.front().rule, v.front().message);
}

}  // namespace

std::vector<double> directive_signal(const RenderDirective& d, const ClipBank& bank) {
  std::vector<double> sig = require_clip(bank, d.clip).mono();
  if (d.pitch_ratio != 1.0) sig = dsp::resample_ratio(sig, d.pitch_ratio);
  if (d.duration > 0.0) {
    const auto want = static_cast<std::size_t>(std::max<std::int64_t>(1, to_samples(d.duration)));
    if (d.loop && !sig.empty() && sig.size() < want) {
      const std::size_t period = sig.size();
      sig.resize(want);
      for (std::size_t i = period; i < want; ++i) sig[i] = sig[i - period];
    } else if (sig.size() > want) {
      sig.resize(want);
    }
  }
  for (const auto& stage : d.filter_chain) dsp::apply_filter_in_place(sig, stage);
  return sig;
}

dsp::PanGains directive_gains(const RenderDirective& d, const ListenerPath& listener) {
  if (const auto* ear = std::get_if<EarPlacement>(&d.placement)) {
    switch (ear->channel) {
      case Ear::Left: return {d.gain, 0.0};
      case Ear::Right: return {0.0, d.gain};
      case Ear::Both: return {d.gain * std::numbers::sqrt2 / 2.0, d.gain * std::numbers::sqrt2 / 2.0};
    }
  }
  const auto& sp = std::get<SpatialPlacement>(d.placement);
  Vec3 offset = sp.position;
  double yaw = 0.0;
  if (!sp.listener_relative) {
    const ListenerPose pose = listener.at(d.actual_onset);
    offset = sp.position - pose.position;
    yaw = pose.yaw;
  }
  const dsp::FoldedAzimuth folded = dsp::fold_rear(dsp::azimuth_of(offset, yaw));
  const double g = d.gain * dsp::distance_gain(offset.length()) * folded.gain;
  const dsp::PanGains pan = dsp::pan_gains(folded.azimuth);
  return {g * pan.left, g * pan.right};
}

dsp::StereoBuffer mix_directives(std::span<const RenderDirective> directives,
                                 const ListenerPath& listener, const ClipBank& bank,
                                 double duration, unsigned threads) {
  for (const auto& d : directives) require_clip(bank, d.clip);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  dsp::StereoBuffer out(static_cast<std::size_t>(std::max<std::int64_t>(0, to_samples(duration))));
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < directives.size(); ++i)
    if (!directives[i].dropped) live.push_back(i);

  // Signals are computed in parallel batches; the sum always runs in
  // directive order so the result does not depend on `threads`.
  const std::size_t batch = std::max<std::size_t>(1, threads) * 8;
  std::vector<std::vector<double>> signals(batch);
  for (std::size_t first = 0; first < live.size(); first += batch) {
    const std::size_t n = std::min(batch, live.size() - first);
    auto work = [&](std::size_t worker) {
      for (std::size_t k = worker; k < n; k += threads)
        signals[k] = directive_signal(directives[live[first + k]], bank);
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const RenderDirective& d = directives[live[first + k]];
      const auto offset = static_cast<std::size_t>(std::max<std::int64_t>(0, to_samples(d.actual_onset)));
      dsp::mix_mono_into(out, signals[k], offset, directive_gains(d, listener));
      signals[k].clear();
    }
  }
  return out;
}

RenderResult render(const Scene& scene, const ManipulationPlan& plan, const ClipBank& bank,
                    const RenderOptions& options) {
  throw_first(validate_scene(scene));
  throw_first(validate_plan(plan));
  CompiledScene compiled = compile_directives(scene, plan);

  RenderResult out;
  dsp::StereoBuffer mix =
      mix_directives(compiled.directives, scene.listener, bank, scene.duration, options.threads);
  dsp::Finalized fin = dsp::finalize(std::move(mix), options.master_gain);
  out.buffer = std::move(fin.buffer);
  out.report.clipped_samples = fin.report.clipped_samples;
  out.report.frames = out.buffer.frames();
  out.report.directives = compiled.directives.size();
  out.report.earcons = compiled.timeline.earcons.size();
  for (const auto& e : compiled.timeline.entries)
    if (e.dropped) out.report.dropped_events.push_back(e.event_id);
  out.timeline = std::move(compiled.timeline);
  return out;
}

ClipBank resolve_clip_bank(const Scene& scene, std::optional<std::uint64_t> seed_override,
                           const std::filesystem::path& base_dir) {
  ClipBank bank = default_clip_bank(seed_override.value_or(scene.seed));
  if (const char* dir = std::getenv(kAssetDirEnv); dir != nullptr && *dir != '\0') {
    for (auto& [id, clip] : bank) {
      const std::filesystem::path p = std::filesystem::path(dir) / (id + ".wav");
      if (std::filesystem::exists(p)) clip = read_wav(p, id);
    }
  }
  for (const auto& [id, file] : scene.clip_files) {
    std::filesystem::path p(file);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    bank[id] = read_wav(p, id);
  }
  return bank;
}

std::string render_report_json(const RenderReport& report) {
  nlohmann::ordered_json j;
  j["clipped_samples"] = report.clipped_samples;
  j["directives"] = report.directives;
  j["dropped_events"] = report.dropped_events;
  j["duration"] = static_cast<double>(report.frames) / kSampleRate;
  j["earcons"] = report.earcons;
  j["frames"] = report.frames;
  j["sample_rate"] = kSampleRate;
  return j.dump(2);
}

}  // namespace mrmix
