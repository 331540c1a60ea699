#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "ledgernet/ingest/http_providers.hpp"

#include <algorithm>

#include "httplib.h"
#include "ledgernet/errors.hpp"
#include "ledgernet/json_io.hpp"

namespace ledgernet::ingest {

HttpEndpoint parse_endpoint(std::string url, const std::string& api_key) {
  if (auto pos = url.find("{api_key}"); pos != std::string::npos) url.replace(pos, 9, api_key);
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw UsageError("endpoint must be an http(s) URL: " + url);
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw UsageError("unsupported URL scheme: " + scheme);
  std::size_t path_start = url.find('/', scheme_end + 3);
  HttpEndpoint ep;
  ep.origin = url.substr(0, path_start);
  ep.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (ep.origin.size() <= scheme_end + 3) throw UsageError("endpoint has no host: " + url);
  return ep;
}

namespace {

std::string hex_height(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "\"0x%llx\"", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t parse_hex_u64(const Json& v, const char* what) {
  if (!v.is_string()) throw ProviderError(std::string("missing ") + what, false);
  auto a = Amount::parse_hex(v.get<std::string>());
  if (!a || !a->fits_u64()) throw ProviderError(std::string("bad hex ") + what, false);
  return static_cast<std::uint64_t>(a->raw());
}

bool retryable_status(int status) { return status == 429 || status == 408 || status >= 500; }

httplib::Client make_client(const HttpEndpoint& ep, std::chrono::seconds timeout) {
  httplib::Client cli(ep.origin);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_follow_location(true);
  return cli;
}

Json parse_body(const std::string& body) {
  try {
    return parse_json(body);
  } catch (const ParseError& e) {
    // A truncated or HTML error page is usually a transient gateway problem.
    throw ProviderError(std::string("unparseable response: ") + e.what(), true);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

EthereumRpcProvider::EthereumRpcProvider(HttpSettings settings)
    : settings_(std::move(settings)), endpoint_(parse_endpoint(settings_.url, settings_.api_key)) {}

std::string EthereumRpcProvider::call(const std::string& method, const std::string& params_json) {
  // httplib clients are not thread safe; one per call keeps workers apart.
  auto cli = make_client(endpoint_, settings_.timeout);
  std::string body = R"({"jsonrpc":"2.0","id":1,"method":")" + method + R"(","params":)" + params_json + "}";
  auto res = cli.Post(endpoint_.path, body, "application/json");
  if (!res) throw ProviderError(method + ": " + httplib::to_string(res.error()), true);
  if (res->status != 200) {
    throw ProviderError(method + ": HTTP " + std::to_string(res->status), retryable_status(res->status));
  }
  return res->body;
}

namespace {

Json rpc_result(const std::string& body, const std::string& method) {
  Json doc = parse_body(body);
  if (doc.contains("error") && !doc["error"].is_null()) {
    const Json& err = doc["error"];
    int code = err.value("code", 0);
    std::string msg = err.value("message", std::string("unknown error"));
    // -32005: request limit exceeded; -32603: internal error.
    throw ProviderError(method + ": " + msg, code == -32005 || code == -32603 || code == 429);
  }
  if (!doc.contains("result")) throw ProviderError(method + ": response without result", true);
  return doc["result"];
}

}  // namespace

std::uint64_t EthereumRpcProvider::latest_height() {
  return parse_hex_u64(rpc_result(call("eth_blockNumber", "[]"), "eth_blockNumber"), "block number");
}

std::int64_t EthereumRpcProvider::block_timestamp(std::uint64_t height) {
  Json block = rpc_result(call("eth_getBlockByNumber", "[" + hex_height(height) + ",false]"), "eth_getBlockByNumber");
  if (block.is_null()) throw ProviderError("block " + std::to_string(height) + " not available yet", true);
  return static_cast<std::int64_t>(parse_hex_u64(block["timestamp"], "timestamp"));
}

std::vector<Transaction> EthereumRpcProvider::block_transactions(std::uint64_t height) {
  Json block = rpc_result(call("eth_getBlockByNumber", "[" + hex_height(height) + ",true]"), "eth_getBlockByNumber");
  if (block.is_null()) throw ProviderError("block " + std::to_string(height) + " not available yet", true);
  const auto ts = static_cast<std::int64_t>(parse_hex_u64(block["timestamp"], "timestamp"));

  std::vector<Transaction> out;
  try {
    for (const Json& tx : block.at("transactions")) {
      auto value = Amount::parse_hex(tx.at("value").get<std::string>());
      if (!value) throw ProviderError("bad transaction value", false);
      std::string to;
      if (tx.contains("to") && tx["to"].is_string()) {
        to = tx["to"].get<std::string>();
      } else {
        Json receipt = rpc_result(call("eth_getTransactionReceipt", "[" + quote_json(tx.at("hash").get<std::string>()) + "]"),
                                  "eth_getTransactionReceipt");
        if (receipt.is_null() || !receipt["contractAddress"].is_string()) {
          throw ProviderError("receipt for contract creation unavailable", true);
        }
        to = receipt["contractAddress"].get<std::string>();
      }
      out.push_back(Transaction{AddressKey::canonicalize(tx.at("from").get<std::string>(), Chain::ethereum),
                                AddressKey::canonicalize(to, Chain::ethereum), *value, height, ts});
    }
  } catch (const Json::exception& e) {
    throw ProviderError(std::string("malformed block: ") + e.what(), false);
  } catch (const AddressError& e) {
    throw ProviderError(std::string("malformed block: ") + e.what(), false);
  }
  return out;
}

// ---------------------------------------------------------------------------

BitcoinExplorerProvider::BitcoinExplorerProvider(HttpSettings settings)
    : settings_(std::move(settings)), endpoint_(parse_endpoint(settings_.url, settings_.api_key)) {
  if (endpoint_.path == "/") endpoint_.path.clear();
}

std::string BitcoinExplorerProvider::get(const std::string& path) {
  auto cli = make_client(endpoint_, settings_.timeout);
  std::string full = endpoint_.path + path;
  if (!settings_.api_key.empty() && settings_.url.find("{api_key}") == std::string::npos) {
    full += (full.find('?') == std::string::npos ? "?" : "&") + std::string("api_code=") + settings_.api_key;
  }
  auto res = cli.Get(full);
  if (!res) throw ProviderError("GET " + path + ": " + httplib::to_string(res.error()), true);
  if (res->status != 200) {
    throw ProviderError("GET " + path + ": HTTP " + std::to_string(res->status), retryable_status(res->status));
  }
  return res->body;
}

std::uint64_t BitcoinExplorerProvider::latest_height() {
  Json doc = parse_body(get("/latestblock"));
  if (!doc.contains("height") || !doc["height"].is_number_unsigned()) {
    throw ProviderError("latestblock without height", false);
  }
  return doc["height"].get<std::uint64_t>();
}

std::string BitcoinExplorerProvider::block_json(std::uint64_t height) {
  return get("/block-height/" + std::to_string(height) + "?format=json");
}

namespace {

const Json& main_chain_block(const Json& doc, std::uint64_t height) {
  if (!doc.contains("blocks") || !doc["blocks"].is_array() || doc["blocks"].empty()) {
    throw ProviderError("no block at height " + std::to_string(height), true);
  }
  for (const Json& b : doc["blocks"]) {
    if (b.value("main_chain", false)) return b;
  }
  return doc["blocks"].front();
}

}  // namespace

std::int64_t BitcoinExplorerProvider::block_timestamp(std::uint64_t height) {
  Json doc = parse_body(block_json(height));
  const Json& block = main_chain_block(doc, height);
  if (!block.contains("time") || !block["time"].is_number_integer()) {
    throw ProviderError("block without time", false);
  }
  return block["time"].get<std::int64_t>();
}

std::vector<Transaction> BitcoinExplorerProvider::block_transactions(std::uint64_t height) {
  Json doc = parse_body(block_json(height));
  const Json& block = main_chain_block(doc, height);
  std::vector<Transaction> out;
  try {
    const auto ts = block.at("time").get<std::int64_t>();
    for (const Json& tx : block.at("tx")) {
      std::vector<std::string> inputs;
      for (const Json& in : tx.at("inputs")) {
        if (in.contains("prev_out") && in["prev_out"].is_object() && in["prev_out"].contains("addr") &&
            in["prev_out"]["addr"].is_string()) {
          inputs.push_back(in["prev_out"]["addr"].get<std::string>());
        }
      }
      std::vector<UtxoOutput> outputs;
      for (const Json& o : tx.at("out")) {
        auto value = amount_from_json(o.at("value"));
        if (!value) throw ProviderError("bad output value", false);
        std::optional<std::string> addr;
        if (o.contains("addr") && o["addr"].is_string()) addr = o["addr"].get<std::string>();
        outputs.push_back({std::move(addr), *value});
      }
      auto expanded = expand_utxo_transaction(inputs, outputs, height, ts);
      out.insert(out.end(), std::make_move_iterator(expanded.begin()), std::make_move_iterator(expanded.end()));
    }
  } catch (const Json::exception& e) {
    throw ProviderError(std::string("malformed block: ") + e.what(), false);
  } catch (const AddressError& e) {
    throw ProviderError(std::string("malformed block: ") + e.what(), false);
  }
  return out;
}

std::vector<Transaction> expand_utxo_transaction(const std::vector<std::string>& input_addresses,
                                                 const std::vector<UtxoOutput>& outputs, std::uint64_t height,
                                                 std::int64_t timestamp) {
  std::vector<AddressKey> senders;
  for (const auto& raw : input_addresses) {
    auto key = AddressKey::canonicalize(raw, Chain::bitcoin);
    if (std::find(senders.begin(), senders.end(), key) == senders.end()) senders.push_back(std::move(key));
  }
  std::vector<Transaction> out;
  if (senders.empty()) {
    for (const auto& o : outputs) {
      if (!o.address) continue;
      out.push_back(Transaction{std::nullopt, AddressKey::canonicalize(*o.address, Chain::bitcoin), o.value, height,
                                timestamp});
    }
    return out;
  }
  for (std::size_t i = 0; i < senders.size(); ++i) {
    for (const auto& o : outputs) {
      if (!o.address) continue;
      out.push_back(Transaction{senders[i], AddressKey::canonicalize(*o.address, Chain::bitcoin),
                                o.value.share(senders.size(), i), height, timestamp});
    }
  }
  return out;
}

}  // namespace ledgernet::ingest
