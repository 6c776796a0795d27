#pragma once

#include "tcb/emit.hpp"
#include "tcb/gen.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tcb
{

inline constexpr std::string_view manifest_file = "manifest.json";
inline constexpr std::string_view emit_metadata_file = "emit.json";

// Writes one canonical file per task plus manifest.json (task ids, file
// names, SHA-256 digests, per-problem breakdown, count notice). Existing
// files are overwritten.
void write_catalogue( const catalogue& cat, const gen::gen_config& cfg, const std::filesystem::path& dir );

// Reads manifest.json and every listed task, checking digests.
[[nodiscard]] catalogue read_catalogue( const std::filesystem::path& dir );

struct emit_failure
{
    std::string file;
    std::string message;
};

// Writes solver inputs for every task and target, checks each against its
// grammar and records the encoding mode in emit.json.
[[nodiscard]] std::vector< emit_failure > emit_catalogue( const catalogue& cat,
                                                          std::span< const emit::target > targets,
                                                          emit::encoding_mode mode,
                                                          const std::filesystem::path& dir );

[[nodiscard]] emit::encoding_mode read_emit_mode( const std::filesystem::path& dir );

[[nodiscard]] std::string read_file( const std::filesystem::path& path );
void write_file( const std::filesystem::path& path, std::string_view contents );

} // namespace tcb
