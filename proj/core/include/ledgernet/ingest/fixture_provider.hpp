#pragma once

#include <cstdint>
#include <filesystem>
#include <map>

#include "ledgernet/ingest/provider.hpp"

namespace ledgernet::ingest {

/// Offline provider over a directory of per-block files:
///
///   fixture.json          {"chain":"ethereum"}
///   block_<height>.json   {"height":h,"timestamp":t,
///                          "transactions":[{"s":sender|null,"r":recipient,"v":amount}...]}
///
/// Heights must be contiguous from the lowest present file. Files are read
/// on demand, so the provider is safe to share between threads.
class FixtureProvider final : public BlockProvider {
 public:
  explicit FixtureProvider(std::filesystem::path dir);

  Chain chain() const override { return chain_; }
  std::uint64_t latest_height() override { return latest_; }
  std::int64_t block_timestamp(std::uint64_t height) override;
  std::vector<Transaction> block_transactions(std::uint64_t height) override;

  std::uint64_t lowest_height() const { return lowest_; }

  static std::filesystem::path block_file(const std::filesystem::path& dir, std::uint64_t height);

 private:
  struct Block {
    std::int64_t timestamp;
    std::vector<Transaction> transactions;
  };
  Block load(std::uint64_t height) const;

  std::filesystem::path dir_;
  Chain chain_ = Chain::ethereum;
  std::uint64_t lowest_ = 0;
  std::uint64_t latest_ = 0;
};

}  // namespace ledgernet::ingest
