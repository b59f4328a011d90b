#include <iostream>

#include <CLI11.hpp>

#include "mrmix_tools/commands.hpp"

namespace cli = mrmix::cli;

int main(int argc, char** argv) {
  CLI::App app{"Mixed-reality soundscape renderer and trial scorer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mrmix 0.1.0");

  const std::vector<std::string> scenarios{"rw", "vr", "mixed", "rw_focused", "vr_focused", "fully_mixed"};
  const std::vector<std::string> conditions{"ft", "nc", "ss"};
  int rc = cli::kExitOk;

  cli::GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a scenario scene file");
  generate->add_option("scenario", gen.scenario, "rw, vr or mixed")->required()->check(CLI::IsMember(scenarios));
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--duration", gen.duration, "Nominal duration in seconds")->check(CLI::PositiveNumber);
  generate->add_option("-o,--out", gen.out, "Output path (default stdout)");
  generate->callback([&] { rc = cli::cmd_generate(gen, std::cout, std::cerr); });

  cli::RenderArgs ren;
  auto* render = app.add_subcommand("render", "Render a scene to WAV, timeline and report");
  render->add_option("scene", ren.scene, "Scene JSON")->required()->check(CLI::ExistingFile);
  auto* cond_opt = render->add_option("-c,--condition", ren.condition, "ft, nc or ss")
                       ->check(CLI::IsMember(conditions));
  auto* plan_opt = render->add_option("--plan", ren.plan, "Plan JSON")->check(CLI::ExistingFile);
  cond_opt->excludes(plan_opt);
  render->add_option("--seed", ren.seed, "Clip-bank seed (default: scene seed)");
  render->add_option("-o,--out", ren.out_prefix, "Output prefix")->required();
  render->add_option("-j,--threads", ren.threads, "Worker threads (0 = all cores)");
  render->add_option("--master-gain", ren.master_gain, "Gain before the final clamp");
  render->callback([&] {
    if (ren.plan.empty() && ren.condition.empty()) throw CLI::RequiredError("--condition or --plan");
    rc = cli::cmd_render(ren, std::cout, std::cerr);
  });

  cli::ScoreArgs sc;
  auto* scorecmd = app.add_subcommand("score", "Score a response log against a timeline");
  scorecmd->add_option("timeline", sc.timeline, "Timeline JSON")->required()->check(CLI::ExistingFile);
  scorecmd->add_option("responses", sc.responses, "Responses (CSV or JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  scorecmd->add_option("--window", sc.window, "Response window in seconds")->check(CLI::PositiveNumber);
  scorecmd->add_option("-o,--out", sc.out, "Output path (default stdout)");
  scorecmd->callback([&] { rc = cli::cmd_score(sc, std::cout, std::cerr); });

  cli::ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "List violated invariants of a file");
  validate->add_option("path", val.path, "Scene, plan, timeline, manifest, responses or WAV")
      ->required()
      ->check(CLI::ExistingFile);
  validate->callback([&] { rc = cli::cmd_validate(val, std::cout, std::cerr); });

  cli::BatchArgs bat;
  auto* batch = app.add_subcommand("batch", "Render every condition for a range of seeds");
  batch->add_option("scenario", bat.scenario, "rw, vr or mixed")->required()->check(CLI::IsMember(scenarios));
  batch->add_option("--conditions", bat.conditions, "Comma-separated conditions")
      ->delimiter(',')
      ->check(CLI::IsMember(conditions));
  batch->add_option("--seeds", bat.seeds, "Number of seeds")->check(CLI::PositiveNumber);
  batch->add_option("--base-seed", bat.base_seed, "First seed");
  batch->add_option("-o,--out", bat.out_dir, "Output directory")->required();
  batch->add_option("-j,--threads", bat.threads, "Render threads per scene");
  batch->callback([&] { rc = cli::cmd_batch(bat, std::cout, std::cerr); });

  cli::PlanArgs pl;
  auto* plan = app.add_subcommand("plan", "Write a preset plan as JSON");
  plan->add_option("condition", pl.condition, "ft, nc or ss")->required()->check(CLI::IsMember(conditions));
  plan->add_option("--scene", pl.scene, "Scene the ss preset is built for")->check(CLI::ExistingFile);
  plan->add_option("-o,--out", pl.out, "Output path (default stdout)");
  plan->callback([&] { rc = cli::cmd_plan(pl, std::cout, std::cerr); });

  cli::AssetsArgs as;
  auto* assets = app.add_subcommand("assets", "Synthesized clip bank");
  assets->require_subcommand(1);
  auto* exp = assets->add_subcommand("export", "Write every clip as WAV");
  exp->add_option("-o,--out", as.out_dir, "Output directory")->required();
  exp->add_option("--seed", as.seed, "Bank seed");
  exp->callback([&] { rc = cli::cmd_assets_export(as, std::cout, std::cerr); });

  cli::RespondArgs rs;
  auto* respond = app.add_subcommand("respond", "Synthetic responder for a timeline");
  respond->add_option("timeline", rs.timeline, "Timeline JSON")->required()->check(CLI::ExistingFile);
  respond->add_option("--delay", rs.delay, "Mean delay in seconds");
  respond->add_option("--jitter", rs.jitter, "Uniform jitter half-width in seconds")->check(CLI::NonNegativeNumber);
  respond->add_option("--miss", rs.miss, "Miss probability")->check(CLI::Range(0.0, 1.0));
  respond->add_option("--seed", rs.seed, "RNG seed");
  respond->add_option("--format", rs.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
  respond->add_option("-o,--out", rs.out, "Output path (default stdout)");
  respond->callback([&] { rc = cli::cmd_respond(rs, std::cout, std::cerr); });

  cli::FixturesArgs fx;
  auto* fixtures = app.add_subcommand("fixtures", "Export scoring fixtures for cross-checking");
  fixtures->add_option("-o,--out", fx.out_dir, "Output directory")->required();
  fixtures->add_option("--count", fx.count, "Number of fixtures")->check(CLI::PositiveNumber);
  fixtures->add_option("--seed", fx.seed, "RNG seed");
  fixtures->add_option("--window", fx.window, "Response window in seconds")->check(CLI::PositiveNumber);
  fixtures->callback([&] { rc = cli::cmd_fixtures(fx, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }
  return rc;
}
