#include "mrmix_tools/commands.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "mrmix/errors.hpp"
#include "mrmix/manipulation.hpp"
#include "mrmix/presets.hpp"
#include "mrmix/render.hpp"
#include "mrmix/rng.hpp"
#include "mrmix/scene_io.hpp"
#include "mrmix/scheduler.hpp"
#include "mrmix/scoring.hpp"
#include "mrmix/synth.hpp"
#include "mrmix/validate.hpp"
#include "mrmix/wav.hpp"

namespace mrmix::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Runs `body`, mapping engine errors to exit code 1 with a message.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InfeasibleError& e) {
    err << "error: infeasible constraint " << e.constraint() << ": " << e.what() << "\n";
  } catch (const InvariantError& e) {
    err << "error: rule " << e.rule() << " violated: " << e.what() << "\n";
  } catch (const SchemaError& e) {
    err << "error: schema violation at " << e.path() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitFailure;
}

void emit(const fs::path& out, std::string_view text, std::ostream& stdout_stream) {
  if (out.empty()) {
    stdout_stream << text;
    return;
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_text_file(out, text);
}

std::optional<ScenarioId> scenario_arg(const std::string& name, std::ostream& err) {
  auto id = scenario_from_string(name);
  if (!id) err << "error: unknown scenario '" << name << "' (expected rw, vr or mixed)\n";
  return id;
}

fs::path with_suffix(const fs::path& prefix, std::string_view suffix) {
  return fs::path(prefix.string() + std::string(suffix));
}

struct RenderOutputs {
  fs::path wav;
  fs::path timeline;
  fs::path report;
};

RenderOutputs render_to_files(const Scene& scene, const ManipulationPlan& plan, const ClipBank& bank,
                              const fs::path& prefix, unsigned threads, double master_gain,
                              std::string* report_json) {
  RenderOptions opts;
  opts.threads = threads;
  opts.master_gain = master_gain;
  const RenderResult r = render(scene, plan, bank, opts);
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  RenderOutputs out{with_suffix(prefix, ".wav"), with_suffix(prefix, ".timeline.json"),
                    with_suffix(prefix, ".report.json")};
  write_wav(r.buffer, out.wav);
  write_text_file(out.timeline, serialize_timeline(r.timeline));
  const std::string report = render_report_json(r.report) + "\n";
  write_text_file(out.report, report);
  if (report_json != nullptr) *report_json = report;
  return out;
}

void print_violations(const std::vector<Violation>& v, const std::string& label, std::ostream& out) {
  for (const auto& x : v) out << label << ": " << x.rule << ": " << x.message << "\n";
}

/// Violations of one file, dispatching on its content.
std::vector<Violation> check_file(const fs::path& path);

std::vector<Violation> check_manifest(const json& m, const fs::path& base) {
  std::vector<Violation> out;
  if (!m.contains("bundles") || !m["bundles"].is_array()) {
    out.push_back({"manifest.bundles", "manifest has no bundle list"});
    return out;
  }
  for (const auto& b : m["bundles"]) {
    const std::string name = b.value("scenario", std::string("?")) + " seed " +
                             std::to_string(b.value("seed", 0)) + " " + b.value("condition", std::string("?"));
    for (const char* part : {"scene", "wav", "timeline", "report"}) {
      if (!b.contains(part)) {
        out.push_back({"manifest.file_listed", name + ": no " + part + " entry"});
        continue;
      }
      const fs::path p = base / b[part].value("path", std::string());
      if (!fs::exists(p)) {
        out.push_back({"manifest.file_exists", name + ": missing " + p.string()});
        continue;
      }
      if (sha256_file(p) != b[part].value("sha256", std::string()))
        out.push_back({"manifest.hash_matches", name + ": hash mismatch for " + p.string()});
      if (std::string(part) != "report")
        for (auto& v : check_file(p)) out.push_back({v.rule, name + ": " + v.message});
    }
    if (b.contains("wav") && b.contains("timeline")) {
      const fs::path wav = base / b["wav"].value("path", std::string());
      const fs::path tl = base / b["timeline"].value("path", std::string());
      if (fs::exists(wav) && fs::exists(tl)) {
        const double audio = read_wav(wav).duration();
        const Timeline t = decode_timeline(read_text_file(tl));
        if (t.duration > audio + 0.1)
          out.push_back({"bundle.timeline_fits_audio",
                         name + ": timeline is longer than its audio"});
      }
    }
  }
  return out;
}

std::vector<Violation> check_file(const fs::path& path) {
  if (path.extension() == ".wav") return validate_clip(read_wav(path));
  const std::string text = read_text_file(path);
  std::string kind;
  try {
    kind = document_kind(text);
  } catch (const SchemaError&) {
    // Not a kinded document: treat it as a response log.
    try {
      parse_responses(text);
    } catch (const SchemaError& e) {
      return {{"responses.schema", e.what()}};
    } catch (const InvariantError& e) {
      return {{e.rule(), e.what()}};
    }
    return {};
  }
  try {
    if (kind == "scene") return validate_scene(decode_scene(text));
    if (kind == "plan") return validate_plan(decode_plan(text));
    if (kind == "timeline") return validate_timeline(decode_timeline(text));
    if (kind == "manifest") return check_manifest(json::parse(text), path.parent_path());
  } catch (const SchemaError& e) {
    return {{"schema", e.what()}};
  }
  return {{"document.kind", "unknown document kind '" + kind + "'"}};
}

json file_entry(const fs::path& base, const fs::path& file) {
  return {{"path", fs::relative(file, base).generic_string()}, {"sha256", sha256_file(file)}};
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (f) {
    f.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  const auto id = scenario_arg(a.scenario, err);
  if (!id) return kExitUsage;
  return guarded(err, [&] {
    ScenarioTemplate tmpl{*id, a.duration.value_or(kNominalScenarioDuration)};
    emit(a.out, serialize_scene(generate_scenario(tmpl, a.seed)), out);
    return kExitOk;
  });
}

int cmd_render(const RenderArgs& a, std::ostream& out, std::ostream& err) {
  if (a.plan.empty() && !condition_from_string(a.condition)) {
    err << "error: --condition must be ft, nc or ss (or pass --plan)\n";
    return kExitUsage;
  }
  return guarded(err, [&] {
    const Scene scene = parse_scene(read_text_file(a.scene));
    const ManipulationPlan plan = a.plan.empty()
                                      ? preset_plan(*condition_from_string(a.condition), scene)
                                      : parse_plan(read_text_file(a.plan));
    const ClipBank bank = resolve_clip_bank(scene, a.seed, a.scene.parent_path());
    std::string report;
    render_to_files(scene, plan, bank, a.out_prefix, a.threads, a.master_gain, &report);
    out << report;
    return kExitOk;
  });
}

int cmd_score(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.window > 0.0)) {
    err << "error: --window must be positive\n";
    return kExitUsage;
  }
  return guarded(err, [&] {
    const Timeline t = parse_timeline(read_text_file(a.timeline));
    const ResponseLog log = parse_responses(read_text_file(a.responses));
    emit(a.out, metrics_to_json(score(t, log, a.window)) + "\n", out);
    return kExitOk;
  });
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto v = check_file(a.path);
    if (v.empty()) {
      out << a.path.string() << ": ok\n";
      return kExitOk;
    }
    print_violations(v, a.path.string(), out);
    return kExitFailure;
  });
}

int cmd_batch(const BatchArgs& a, std::ostream& out, std::ostream& err) {
  const auto id = scenario_arg(a.scenario, err);
  if (!id) return kExitUsage;
  std::vector<Condition> conditions;
  for (const auto& c : a.conditions) {
    auto cond = condition_from_string(c);
    if (!cond) {
      err << "error: unknown condition '" << c << "'\n";
      return kExitUsage;
    }
    conditions.push_back(*cond);
  }
  if (a.seeds < 1) {
    err << "error: --seeds must be at least 1\n";
    return kExitUsage;
  }
  return guarded(err, [&] {
    fs::create_directories(a.out_dir);
    const std::string tag(to_string(*id));
    json bundles = json::array();
    for (int i = 0; i < a.seeds; ++i) {
      const std::uint64_t seed = a.base_seed + static_cast<std::uint64_t>(i);
      const fs::path dir = a.out_dir / (tag + "-s" + std::to_string(seed));
      fs::create_directories(dir);
      const Scene scene = generate_scenario(*id, seed);
      const fs::path scene_file = dir / "scene.json";
      write_text_file(scene_file, serialize_scene(scene));
      const ClipBank bank = resolve_clip_bank(scene);
      for (Condition c : conditions) {
        const std::string cname(to_string(c));
        const RenderOutputs files =
            render_to_files(scene, preset_plan(c, scene), bank, dir / cname, a.threads, 1.0, nullptr);
        bundles.push_back({{"scenario", tag},
                           {"seed", seed},
                           {"condition", cname},
                           {"scene", file_entry(a.out_dir, scene_file)},
                           {"wav", file_entry(a.out_dir, files.wav)},
                           {"timeline", file_entry(a.out_dir, files.timeline)},
                           {"report", file_entry(a.out_dir, files.report)}});
      }
    }
    json manifest = {{"schema_version", kSchemaVersion},
                     {"kind", "manifest"},
                     {"scenario", tag},
                     {"conditions", a.conditions},
                     {"base_seed", a.base_seed},
                     {"seeds", a.seeds},
                     {"bundles", bundles}};
    const fs::path manifest_file = a.out_dir / "manifest.json";
    write_text_file(manifest_file, manifest.dump(2) + "\n");
    out << manifest_file.string() << "\n";
    return kExitOk;
  });
}

int cmd_plan(const PlanArgs& a, std::ostream& out, std::ostream& err) {
  const auto cond = condition_from_string(a.condition);
  if (!cond) {
    err << "error: condition must be ft, nc or ss\n";
    return kExitUsage;
  }
  return guarded(err, [&] {
    Scene scene;
    if (!a.scene.empty()) scene = parse_scene(read_text_file(a.scene));
    emit(a.out, serialize_plan(preset_plan(*cond, scene)), out);
    return kExitOk;
  });
}

int cmd_assets_export(const AssetsArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    fs::create_directories(a.out_dir);
    for (const auto& [id, clip] : default_clip_bank(a.seed)) {
      const fs::path p = a.out_dir / (id + ".wav");
      write_wav(clip, p);
      out << p.string() << "\n";
    }
    return kExitOk;
  });
}

int cmd_respond(const RespondArgs& a, std::ostream& out, std::ostream& err) {
  if (a.format != "jsonl" && a.format != "csv") {
    err << "error: --format must be jsonl or csv\n";
    return kExitUsage;
  }
  return guarded(err, [&] {
    const Timeline t = parse_timeline(read_text_file(a.timeline));
    const ResponseLog log = synthetic_responder(t, {a.delay, a.jitter, a.miss, a.seed});
    emit(a.out, a.format == "csv" ? serialize_responses_csv(log) : serialize_responses_jsonl(log), out);
    return kExitOk;
  });
}

int cmd_fixtures(const FixturesArgs& a, std::ostream& out, std::ostream& err) {
  if (a.count < 1 || !(a.window > 0.0)) {
    err << "error: --count must be >= 1 and --window positive\n";
    return kExitUsage;
  }
  return guarded(err, [&] {
    fs::create_directories(a.out_dir);
    constexpr std::array<ScenarioId, 3> kScenarios = {ScenarioId::RwFocused, ScenarioId::VrFocused,
                                                      ScenarioId::FullyMixed};
    Rng rng(a.seed);
    for (int i = 0; i < a.count; ++i) {
      const ScenarioId id = kScenarios[static_cast<std::size_t>(i) % kScenarios.size()];
      const Scene scene = generate_scenario(id, rng.next());
      const Timeline timeline = compile_directives(scene, preset_plan(Condition::Manipulated, scene)).timeline;
      ResponderProfile profile;
      profile.delay_mean = rng.uniform(0.3, 3.0);
      profile.delay_jitter = rng.uniform(0.0, 2.5);
      profile.miss_prob = rng.uniform(0.0, 0.4);
      profile.seed = rng.next();
      ResponseLog log = synthetic_responder(timeline, profile);
      // Stray presses: wrong keys, out-of-range keys, presses far from any event.
      const int stray = static_cast<int>(rng.below(8));
      for (int k = 0; k < stray; ++k)
        log.presses.push_back({rng.uniform(0.0, timeline.duration), static_cast<int>(rng.below(6))});
      std::stable_sort(log.presses.begin(), log.presses.end(),
                       [](const Press& x, const Press& y) { return x.t < y.t; });
      const MetricsReport report = score(timeline, log, a.window);

      json presses = json::array();
      for (const auto& p : log.presses) presses.push_back({{"t", p.t}, {"key", p.key}});
      json fixture = {{"schema_version", kSchemaVersion},
                      {"kind", "scoring_fixture"},
                      {"window", a.window},
                      {"timeline", json::parse(serialize_timeline(timeline))},
                      {"responses", presses},
                      {"expected", json::parse(metrics_to_json(report))}};
      std::ostringstream name;
      name << "fixture_" << std::setw(3) << std::setfill('0') << i << ".json";
      write_text_file(a.out_dir / name.str(), fixture.dump(2) + "\n");
    }
    out << a.count << " fixtures written to " << a.out_dir.string() << "\n";
    return kExitOk;
  });
}

}  // namespace mrmix::cli
