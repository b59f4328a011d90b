#pragma once

// Offline stereo rendering of compiled directives.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrmix/dsp.hpp"
#include "mrmix/manipulation.hpp"
#include "mrmix/scene.hpp"
#include "mrmix/synth.hpp"

namespace mrmix {

struct RenderOptions {
  /// Worker threads for per-directive processing; 0 picks the hardware count.
  unsigned threads = 1;
  double master_gain = 1.0;
};

struct RenderReport {
  std::size_t clipped_samples = 0;
  std::vector<std::string> dropped_events;
  std::size_t frames = 0;
  std::size_t directives = 0;
  std::size_t earcons = 0;
};

struct RenderResult {
  dsp::StereoBuffer buffer;
  Timeline timeline;
  RenderReport report;
};

/// Styled mono signal of one directive: resampled, looped or truncated to
/// its window, then run through the filter chain. Gain is not applied.
std::vector<double> directive_signal(const RenderDirective& d, const ClipBank& bank);

/// Channel gains for one directive: directive gain, distance attenuation and
/// panning against the listener pose at the directive onset.
dsp::PanGains directive_gains(const RenderDirective& d, const ListenerPath& listener);

/// Pre-finalize mix of every non-dropped directive, summed in directive
/// order. The buffer holds at least `duration` seconds.
dsp::StereoBuffer mix_directives(std::span<const RenderDirective> directives,
                                 const ListenerPath& listener, const ClipBank& bank,
                                 double duration, unsigned threads = 1);

/// Validates scene and plan, compiles, mixes and finalizes.
RenderResult render(const Scene& scene, const ManipulationPlan& plan, const ClipBank& bank,
                    const RenderOptions& options = {});

/// Environment variable naming a directory of <clip id>.wav replacements.
inline constexpr const char* kAssetDirEnv = "MRMIX_ASSET_DIR";

/// Synthesized bank (seeded by `seed_override` or the scene seed), then
/// WAVs from kAssetDirEnv, then the scene's own clip_files. Relative
/// clip_files paths resolve against `base_dir`.
ClipBank resolve_clip_bank(const Scene& scene, std::optional<std::uint64_t> seed_override = {},
                           const std::filesystem::path& base_dir = {});

std::string render_report_json(const RenderReport& report);

}  // namespace mrmix
