#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mrmix/scene_io.hpp"
#include "mrmix/scoring.hpp"
#include "mrmix/wav.hpp"
#include "mrmix_tools/commands.hpp"
#include "scratch_dir.hpp"

using namespace mrmix;
using nlohmann::json;

namespace {

struct CmdResult {
  int rc;
  std::string out;
  std::string err;
};

template <class Args, class F>
CmdResult run(F cmd, const Args& args) {
  std::ostringstream out, err;
  const int rc = cmd(args, out, err);
  return {rc, out.str(), err.str()};
}

std::filesystem::path generate(const fixture::ScratchDir& dir, const std::string& scenario, std::uint64_t seed) {
  const auto path = dir / (scenario + std::to_string(seed) + ".json");
  const CmdResult r = run(cli::cmd_generate, cli::GenerateArgs{scenario, seed, std::nullopt, path});
  EXPECT_EQ(r.rc, cli::kExitOk) << r.err;
  return path;
}

}  // namespace

TEST(Cli, GenerateThenValidate) {
  fixture::ScratchDir dir("mrmix-cli");
  const auto scene = generate(dir, "vr", 3);
  const CmdResult v = run(cli::cmd_validate, cli::ValidateArgs{scene});
  EXPECT_EQ(v.rc, cli::kExitOk) << v.out << v.err;
  EXPECT_NE(v.out.find(": ok"), std::string::npos);
}

TEST(Cli, ValidateListsBrokenRules) {
  const CmdResult v = run(cli::cmd_validate, cli::ValidateArgs{std::string(MRMIX_TEST_DATA_DIR) + "/event_past_end.json"});
  EXPECT_EQ(v.rc, cli::kExitFailure);
  EXPECT_NE(v.out.find("event.within_duration"), std::string::npos) << v.out;
}

TEST(Cli, UnknownScenarioIsUsageError) {
  fixture::ScratchDir dir("mrmix-cli");
  const CmdResult r = run(cli::cmd_generate, cli::GenerateArgs{"moon", 1, std::nullopt, dir / "x.json"});
  EXPECT_EQ(r.rc, cli::kExitUsage);
}

TEST(Cli, RenderNoiseCancellation) {
  fixture::ScratchDir dir("mrmix-cli");
  const auto scene = generate(dir, "rw", 2);
  cli::RenderArgs a;
  a.scene = scene;
  a.condition = "nc";
  a.out_prefix = dir / "nc";
  const CmdResult r = run(cli::cmd_render, a);
  ASSERT_EQ(r.rc, cli::kExitOk) << r.err;
  const Timeline t = parse_timeline(read_text_file(dir / "nc.timeline.json"));
  const Scene s = parse_scene(read_text_file(scene));
  for (const auto& e : t.entries) {
    if (e.category == SoundCategory::RealWorld) {
      EXPECT_DOUBLE_EQ(e.gain, 0.125) << e.event_id;
      EXPECT_TRUE(e.has_tag(tag::kTransparency));
    }
    EXPECT_FALSE(e.has_tag(tag::kTimeShift));
  }
  const AudioClip wav = read_wav(dir / "nc.wav");
  EXPECT_EQ(wav.channels, 2);
  EXPECT_GE(wav.duration(), s.duration);
  const json report = json::parse(read_text_file(dir / "nc.report.json"));
  EXPECT_EQ(report["frames"].get<std::size_t>(), wav.frames());
}

TEST(Cli, RenderIsReproducible) {
  fixture::ScratchDir dir("mrmix-cli");
  const auto scene = generate(dir, "mixed", 5);
  for (const char* prefix : {"a", "b"}) {
    cli::RenderArgs a;
    a.scene = scene;
    a.condition = "ss";
    a.out_prefix = dir / prefix;
    a.threads = prefix[0] == 'a' ? 1 : 3;
    ASSERT_EQ(run(cli::cmd_render, a).rc, cli::kExitOk);
  }
  EXPECT_EQ(cli::sha256_file(dir / "a.wav"), cli::sha256_file(dir / "b.wav"));
  EXPECT_EQ(cli::sha256_file(dir / "a.timeline.json"), cli::sha256_file(dir / "b.timeline.json"));
}

TEST(Cli, RenderWithPlanFile) {
  fixture::ScratchDir dir("mrmix-cli");
  const auto scene = generate(dir, "rw", 4);
  ASSERT_EQ(run(cli::cmd_plan, cli::PlanArgs{"ss", scene, dir / "plan.json"}).rc, cli::kExitOk);
  cli::RenderArgs a;
  a.scene = scene;
  a.plan = dir / "plan.json";
  a.out_prefix = dir / "p";
  ASSERT_EQ(run(cli::cmd_render, a).rc, cli::kExitOk);
  a.plan.clear();
  a.condition = "ss";
  a.out_prefix = dir / "q";
  ASSERT_EQ(run(cli::cmd_render, a).rc, cli::kExitOk);
  EXPECT_EQ(cli::sha256_file(dir / "p.wav"), cli::sha256_file(dir / "q.wav"));
}

TEST(Cli, Sha256KnownAnswer) {
  fixture::ScratchDir dir("mrmix-cli");
  write_text_file(dir / "abc.txt", "abc");
  EXPECT_EQ(cli::sha256_file(dir / "abc.txt"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, BatchManifestValidates) {
  fixture::ScratchDir dir("mrmix-cli");
  cli::BatchArgs a;
  a.scenario = "rw";
  a.seeds = 5;
  a.out_dir = dir.path();
  const CmdResult r = run(cli::cmd_batch, a);
  ASSERT_EQ(r.rc, cli::kExitOk) << r.err;
  const json m = json::parse(read_text_file(dir / "manifest.json"));
  ASSERT_EQ(m["bundles"].size(), 15u);
  for (const auto& b : m["bundles"]) {
    const auto wav = dir.path() / b["wav"]["path"].get<std::string>();
    EXPECT_EQ(cli::sha256_file(wav), b["wav"]["sha256"].get<std::string>());
  }
  const CmdResult v = run(cli::cmd_validate, cli::ValidateArgs{dir / "manifest.json"});
  EXPECT_EQ(v.rc, cli::kExitOk) << v.out << v.err;

  // Tampering is caught.
  std::ofstream(dir.path() / "rw_focused-s1" / "ft.timeline.json", std::ios::app) << " ";
  const CmdResult bad = run(cli::cmd_validate, cli::ValidateArgs{dir / "manifest.json"});
  EXPECT_EQ(bad.rc, cli::kExitFailure) << bad.out;
}

TEST(Cli, RespondThenScore) {
  fixture::ScratchDir dir("mrmix-cli");
  const auto scene = generate(dir, "vr", 6);
  cli::RenderArgs ra;
  ra.scene = scene;
  ra.condition = "ft";
  ra.out_prefix = dir / "ft";
  ASSERT_EQ(run(cli::cmd_render, ra).rc, cli::kExitOk);
  for (const char* fmt : {"jsonl", "csv"}) {
    cli::RespondArgs rs;
    rs.timeline = dir / "ft.timeline.json";
    rs.format = fmt;
    rs.out = dir / (std::string("resp.") + fmt);
    ASSERT_EQ(run(cli::cmd_respond, rs).rc, cli::kExitOk);
    cli::ScoreArgs sc;
    sc.timeline = rs.timeline;
    sc.responses = rs.out;
    const CmdResult r = run(cli::cmd_score, sc);
    ASSERT_EQ(r.rc, cli::kExitOk) << r.err;
    const json metrics = json::parse(r.out);
    EXPECT_DOUBLE_EQ(metrics["success_rate"].get<double>(), 1.0) << fmt;
    EXPECT_NEAR(metrics["mean_delay"].get<double>(), 0.8, 1e-9) << fmt;
    EXPECT_EQ(run(cli::cmd_validate, cli::ValidateArgs{rs.out}).rc, cli::kExitOk);
  }
}

TEST(Cli, FixturesRescoreIdentically) {
  fixture::ScratchDir dir("mrmix-cli");
  cli::FixturesArgs a;
  a.out_dir = dir.path();
  a.count = 6;
  ASSERT_EQ(run(cli::cmd_fixtures, a).rc, cli::kExitOk);
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
    const json fx = json::parse(read_text_file(entry.path()));
    ASSERT_EQ(fx["kind"], "scoring_fixture");
    const Timeline t = parse_timeline(fx["timeline"].dump());
    const ResponseLog log = parse_responses(json{{"presses", fx["responses"]}}.dump());
    const MetricsReport m = score(t, log, fx["window"].get<double>());
    EXPECT_EQ(json::parse(metrics_to_json(m)), fx["expected"]) << entry.path();
    ++seen;
  }
  EXPECT_EQ(seen, 6);
}

TEST(Cli, AssetsExportWritesEveryClip) {
  fixture::ScratchDir dir("mrmix-cli");
  const CmdResult r = run(cli::cmd_assets_export, cli::AssetsArgs{dir.path(), 0});
  ASSERT_EQ(r.rc, cli::kExitOk);
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    const AudioClip c = read_wav(e.path());
    EXPECT_EQ(c.channels, 1);
    ++n;
  }
  EXPECT_EQ(n, 13);
}
