#include "ledgernet/ingest/chunk_file.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "ledgernet/errors.hpp"
#include "ledgernet/json_io.hpp"

namespace ledgernet::ingest {

namespace fs = std::filesystem;

std::string chunk_file_name(const BlockRange& chunk) {
  return "chunk_" + std::to_string(chunk.first) + "_" + std::to_string(chunk.last) + ".ndjson";
}

std::string format_chunk_line(const Transaction& tx) {
  std::string line = "{\"h\":" + std::to_string(tx.block_height) + ",\"t\":" + std::to_string(tx.timestamp) + ",\"s\":";
  line += tx.sender ? quote_json(tx.sender->str()) : "null";
  line += ",\"r\":" + quote_json(tx.recipient.str()) + ",\"v\":" + tx.amount.to_string() + "}";
  return line;
}

Transaction parse_chunk_line(std::string_view line, Chain chain, std::size_t line_number) {
  Json doc = parse_json(line, line_number);
  try {
    std::optional<AddressKey> sender;
    if (!doc.at("s").is_null()) sender = AddressKey::canonicalize(doc.at("s").get<std::string>(), chain);
    auto amount = amount_from_json(doc.at("v"));
    if (!amount) throw ParseError("invalid amount", line_number);
    return Transaction{std::move(sender), AddressKey::canonicalize(doc.at("r").get<std::string>(), chain), *amount,
                       doc.at("h").get<std::uint64_t>(), doc.at("t").get<std::int64_t>()};
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad chunk record: ") + e.what(), line_number);
  } catch (const AddressError& e) {
    throw ParseError(e.what(), line_number);
  }
}

std::vector<ChunkFile> list_chunk_files(const fs::path& dir) {
  std::vector<ChunkFile> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    unsigned long long lo = 0;
    unsigned long long hi = 0;
    int consumed = 0;
    if (std::sscanf(name.c_str(), "chunk_%llu_%llu.ndjson%n", &lo, &hi, &consumed) == 2 &&
        static_cast<std::size_t>(consumed) == name.size()) {
      files.push_back({{lo, hi}, entry.path()});
    }
  }
  std::sort(files.begin(), files.end(),
            [](const ChunkFile& a, const ChunkFile& b) { return a.heights.first < b.heights.first; });
  return files;
}

void for_each_transaction(const fs::path& dir, Chain chain, const std::function<void(const Transaction&)>& fn) {
  for (const auto& chunk : list_chunk_files(dir)) {
    std::ifstream in(chunk.path, std::ios::binary);
    if (!in) throw IoError("cannot open " + chunk.path.string());
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (line.empty()) continue;
      try {
        fn(parse_chunk_line(line, chain, number));
      } catch (const ParseError& e) {
        throw ParseError(chunk.path.filename().string() + ":" + std::to_string(number) + ": " + e.what(), number,
                         e.offset());
      }
    }
    if (in.bad()) throw IoError("read failed: " + chunk.path.string());
  }
}

InteractionGraph build_graph_from_chunks(const fs::path& dir, Chain chain) {
  InteractionGraph g(chain);
  for_each_transaction(dir, chain, [&](const Transaction& tx) { g.add_transaction(tx); });
  return g;
}

void restore_counters_from_chunks(InteractionGraph& graph, const fs::path& dir) {
  for_each_transaction(dir, graph.chain(), [&](const Transaction& tx) { graph.count_transaction(tx); });
}

}  // namespace ledgernet::ingest
