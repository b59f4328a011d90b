#pragma once

// JSON documents for scenes, plans and timelines.
//
// Every document carries "schema_version" and "kind". Serialization is
// canonical: object keys sorted, every field written (absent optionals as
// null), numbers in shortest round-trip form, two-space indentation.

#include <filesystem>
#include <string>
#include <string_view>

#include "mrmix/scene.hpp"

namespace mrmix {

inline constexpr int kSchemaVersion = 1;

/// Schema check only. Throws SchemaError naming the offending path.
Scene decode_scene(std::string_view text);
ManipulationPlan decode_plan(std::string_view text);
Timeline decode_timeline(std::string_view text);

/// Schema check plus invariants. Throws InvariantError naming the first
/// broken rule.
Scene parse_scene(std::string_view text);
ManipulationPlan parse_plan(std::string_view text);
Timeline parse_timeline(std::string_view text);

std::string serialize_scene(const Scene& scene);
std::string serialize_plan(const ManipulationPlan& plan);
std::string serialize_timeline(const Timeline& timeline);

/// Value of the top-level "kind" field ("scene", "plan", "timeline", ...).
/// Throws SchemaError when the text is not a JSON object with a kind.
std::string document_kind(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mrmix
