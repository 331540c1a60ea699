#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ledgernet/ingest/provider.hpp"

namespace ledgernet::ingest {

struct HttpEndpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // always starts with '/'
};

/// Splits an http(s) URL. `{api_key}` in the URL is replaced by `api_key`.
/// Throws UsageError for anything that is not http:// or https://.
HttpEndpoint parse_endpoint(std::string url, const std::string& api_key = {});

struct HttpSettings {
  std::string url;
  std::string api_key;
  std::chrono::seconds timeout{30};
};

/// Ethereum JSON-RPC (a node or a hosted gateway such as Infura).
///
/// Contract-creation transactions have no `to`; the created contract's
/// address is read from the receipt and used as the recipient.
class EthereumRpcProvider final : public BlockProvider {
 public:
  explicit EthereumRpcProvider(HttpSettings settings);

  Chain chain() const override { return Chain::ethereum; }
  std::uint64_t latest_height() override;
  std::int64_t block_timestamp(std::uint64_t height) override;
  std::vector<Transaction> block_transactions(std::uint64_t height) override;

 private:
  std::string call(const std::string& method, const std::string& params_json);

  HttpSettings settings_;
  HttpEndpoint endpoint_;
};

/// Bitcoin block explorer REST API in the blockchain.info shape
/// (`/latestblock`, `/block-height/<h>?format=json`).
class BitcoinExplorerProvider final : public BlockProvider {
 public:
  explicit BitcoinExplorerProvider(HttpSettings settings);

  Chain chain() const override { return Chain::bitcoin; }
  std::uint64_t latest_height() override;
  std::int64_t block_timestamp(std::uint64_t height) override;
  std::vector<Transaction> block_transactions(std::uint64_t height) override;

 private:
  std::string get(const std::string& path);
  std::string block_json(std::uint64_t height);

  HttpSettings settings_;
  HttpEndpoint endpoint_;
};

struct UtxoOutput {
  std::optional<std::string> address;  // empty for OP_RETURN and other non-address scripts
  Amount value;
};

/// Maps a multi-input/multi-output transaction onto account pairs: every
/// distinct input address is paired with every output address, and each
/// output's value is split equally among the inputs (remainder units go to
/// the earliest inputs). With no input address (coinbase) every output
/// becomes a senderless transfer. Order: inputs outer, outputs inner.
std::vector<Transaction> expand_utxo_transaction(const std::vector<std::string>& input_addresses,
                                                 const std::vector<UtxoOutput>& outputs, std::uint64_t height,
                                                 std::int64_t timestamp);

}  // namespace ledgernet::ingest
