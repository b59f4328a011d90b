#pragma once

// Subcommands of the mrmix tool. Each returns a process exit code:
// 0 success, 1 validation or runtime failure, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mrmix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct GenerateArgs {
  std::string scenario;
  std::uint64_t seed = 1;
  std::optional<double> duration;
  std::filesystem::path out;  ///< empty writes to stdout
};

struct RenderArgs {
  std::filesystem::path scene;
  std::string condition;       ///< ft|nc|ss, ignored when plan is set
  std::filesystem::path plan;
  std::optional<std::uint64_t> seed;  ///< clip-bank seed override
  std::filesystem::path out_prefix;
  unsigned threads = 1;
  double master_gain = 1.0;
};

struct ScoreArgs {
  std::filesystem::path timeline;
  std::filesystem::path responses;
  double window = 5.0;
  std::filesystem::path out;
};

struct ValidateArgs {
  std::filesystem::path path;
};

struct BatchArgs {
  std::string scenario;
  std::vector<std::string> conditions{"ft", "nc", "ss"};
  int seeds = 5;
  std::uint64_t base_seed = 1;
  std::filesystem::path out_dir;
  unsigned threads = 1;
};

struct PlanArgs {
  std::string condition;
  std::filesystem::path scene;  ///< needed by ss
  std::filesystem::path out;
};

struct AssetsArgs {
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
};

struct RespondArgs {
  std::filesystem::path timeline;
  double delay = 0.8;
  double jitter = 0.0;
  double miss = 0.0;
  std::uint64_t seed = 0;
  std::string format = "jsonl";
  std::filesystem::path out;
};

struct FixturesArgs {
  std::filesystem::path out_dir;
  int count = 50;
  std::uint64_t seed = 1;
  double window = 5.0;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err);
int cmd_render(const RenderArgs& a, std::ostream& out, std::ostream& err);
int cmd_score(const ScoreArgs& a, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err);
int cmd_batch(const BatchArgs& a, std::ostream& out, std::ostream& err);
int cmd_plan(const PlanArgs& a, std::ostream& out, std::ostream& err);
int cmd_assets_export(const AssetsArgs& a, std::ostream& out, std::ostream& err);
int cmd_respond(const RespondArgs& a, std::ostream& out, std::ostream& err);
int cmd_fixtures(const FixturesArgs& a, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace mrmix::cli
