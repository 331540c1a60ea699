#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ledgernet/graph.hpp"
#include "ledgernet/ingest/block_range.hpp"
#include "ledgernet/transaction.hpp"

namespace ledgernet::ingest {

// Chunk files hold one transaction per line, ordered by (height, position in
// block):  {"h":height,"t":timestamp,"s":sender|null,"r":recipient,"v":amount}

std::string chunk_file_name(const BlockRange& chunk);

/// One record, without the trailing newline.
std::string format_chunk_line(const Transaction& tx);
/// Throws ParseError with the given line number.
Transaction parse_chunk_line(std::string_view line, Chain chain, std::size_t line_number = 0);

struct ChunkFile {
  BlockRange heights;
  std::filesystem::path path;
};

/// `chunk_<first>_<last>.ndjson` files in `dir`, ordered by first height.
std::vector<ChunkFile> list_chunk_files(const std::filesystem::path& dir);

/// Streams every transaction of every chunk file in `dir`, in height order.
void for_each_transaction(const std::filesystem::path& dir, Chain chain,
                          const std::function<void(const Transaction&)>& fn);

/// Replays all chunk files into a fresh graph.
InteractionGraph build_graph_from_chunks(const std::filesystem::path& dir, Chain chain);

/// Restores in/out counters of a graph loaded from a graph file.
void restore_counters_from_chunks(InteractionGraph& graph, const std::filesystem::path& dir);

}  // namespace ledgernet::ingest
