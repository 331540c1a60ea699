#include "ledgernet/ingest/fixture_provider.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "ledgernet/errors.hpp"
#include "ledgernet/json_io.hpp"

namespace ledgernet::ingest {

namespace fs = std::filesystem;

FixtureProvider::FixtureProvider(fs::path dir) : dir_(std::move(dir)) {
  if (!fs::is_directory(dir_)) throw IoError("fixture directory not found: " + dir_.string());

  Json manifest = parse_json(read_file(dir_ / "fixture.json"));
  auto chain = manifest.is_object() && manifest.contains("chain") && manifest["chain"].is_string()
                   ? parse_chain(manifest["chain"].get<std::string>())
                   : std::nullopt;
  if (!chain) throw ParseError("fixture.json must name a chain");
  chain_ = *chain;

  std::uint64_t lo = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t hi = 0;
  std::uint64_t count = 0;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const std::string name = entry.path().filename().string();
    unsigned long long h = 0;
    char tail = 0;
    if (std::sscanf(name.c_str(), "block_%llu.jso%c", &h, &tail) == 2 && tail == 'n') {
      lo = std::min<std::uint64_t>(lo, h);
      hi = std::max<std::uint64_t>(hi, h);
      ++count;
    }
  }
  if (count == 0) throw IoError("fixture directory has no block files: " + dir_.string());
  if (hi - lo + 1 != count) throw ParseError("fixture block heights are not contiguous");
  lowest_ = lo;
  latest_ = hi;
}

fs::path FixtureProvider::block_file(const fs::path& dir, std::uint64_t height) {
  char name[40];
  std::snprintf(name, sizeof name, "block_%06llu.json", static_cast<unsigned long long>(height));
  return dir / name;
}

FixtureProvider::Block FixtureProvider::load(std::uint64_t height) const {
  if (height < lowest_ || height > latest_) {
    throw ProviderError("fixture has no block " + std::to_string(height), false);
  }
  auto path = block_file(dir_, height);
  Json doc;
  try {
    doc = parse_json(read_file(path));
  } catch (const Error& e) {
    throw ProviderError(path.string() + ": " + e.what(), false);
  }
  Block block;
  try {
    block.timestamp = doc.at("timestamp").get<std::int64_t>();
    for (const Json& t : doc.at("transactions")) {
      std::optional<AddressKey> sender;
      if (!t.at("s").is_null()) sender = AddressKey::canonicalize(t.at("s").get<std::string>(), chain_);
      auto amount = amount_from_json(t.at("v"));
      if (!amount) throw ParseError("bad amount");
      block.transactions.push_back(Transaction{std::move(sender),
                                               AddressKey::canonicalize(t.at("r").get<std::string>(), chain_),
                                               *amount, height, block.timestamp});
    }
  } catch (const ProviderError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProviderError(path.string() + ": " + e.what(), false);
  }
  return block;
}

std::int64_t FixtureProvider::block_timestamp(std::uint64_t height) { return load(height).timestamp; }

std::vector<Transaction> FixtureProvider::block_transactions(std::uint64_t height) {
  return load(height).transactions;
}

}  // namespace ledgernet::ingest
