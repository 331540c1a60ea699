#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "ledgernet/graph.hpp"

namespace ledgernet {

enum class GraphFormat { json, pajek };

std::optional<GraphFormat> parse_graph_format(std::string_view name);
/// `.json` or `.pajek`/`.net`; UsageError otherwise.
GraphFormat format_from_extension(const std::filesystem::path& path);

// JSON: {"chain":"<name>","vertices":[key...],"edges":[[key_low,key_high,amount]...]}
// with vertices in index order and edges sorted by (low, high). Compact, no
// trailing newline.
void write_json(const InteractionGraph& graph, std::ostream& out);

// Pajek: "*Vertices n", n lines `<id> "<key>"`, "*Edges", then `<i> <j> <amount>`
// with i < j in (i, j) order. LF line endings, 1-based ids.
void write_pajek(const InteractionGraph& graph, std::ostream& out);

/// Writes through a temp file and rename. Throws ExportError.
void export_json(const InteractionGraph& graph, const std::filesystem::path& path);
void export_pajek(const InteractionGraph& graph, const std::filesystem::path& path);

/// Both encodings, each written by its own thread from the shared graph.
void export_both(const InteractionGraph& graph, const std::filesystem::path& json_path,
                 const std::filesystem::path& pajek_path);

/// The chain comes from an optional "chain" member, else the hint, else the
/// same key inference as Pajek.
InteractionGraph read_json(std::string_view text, std::optional<Chain> chain = std::nullopt);

/// Pajek carries no chain; without a hint it is ethereum when every key is a
/// canonical ethereum key, bitcoin otherwise.
InteractionGraph read_pajek(std::string_view text, std::optional<Chain> chain = std::nullopt);

/// Throws IoError when the file cannot be read and ParseError when it is
/// malformed.
InteractionGraph import_graph(const std::filesystem::path& path, GraphFormat format,
                              std::optional<Chain> chain = std::nullopt);

}  // namespace ledgernet
