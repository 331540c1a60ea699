#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ledgernet/address.hpp"
#include "ledgernet/amount.hpp"
#include "ledgernet/transaction.hpp"

namespace ledgernet {

/// Dense 0-based node index. On disk (Pajek) the id is index + 1.
using NodeIndex = std::uint32_t;

struct EdgeData {
  Amount amount;              // summed over both directions
  std::uint64_t tx_count = 0; // 0 when the edge came from a graph file
};

struct Edge {
  NodeIndex low;
  NodeIndex high;
  EdgeData data;
};

/// Undirected simple graph of accounts, with per-node directed transaction
/// counters kept alongside.
///
/// Nodes get indices in first-seen order. A transaction between two distinct
/// accounts creates the edge if it does not exist yet and otherwise only
/// bumps the edge's amount and count. Self-transfers and senderless
/// transactions register nodes and counters but never add an edge.
///
/// Construction is single-writer; once built the graph may be read from any
/// number of threads.
class InteractionGraph {
 public:
  explicit InteractionGraph(Chain chain = Chain::ethereum) : chain_(chain) {}

  Chain chain() const noexcept { return chain_; }

  /// Returns the existing index for `key` or registers a new node.
  /// Throws AddressError if the key belongs to another chain.
  NodeIndex add_node(const AddressKey& key);

  void add_transaction(const Transaction& tx);

  /// Inserts the undirected edge {a, b}. Returns false (and leaves the graph
  /// untouched) if it already exists. Throws std::invalid_argument for a
  /// self-loop and std::out_of_range for an unknown index.
  bool add_edge(NodeIndex a, NodeIndex b, Amount amount, std::uint64_t tx_count);

  /// Replays a transaction onto the directed counters only. Both endpoints
  /// must already be nodes (LookupError otherwise). Used to restore counters
  /// for a graph loaded from a file.
  void count_transaction(const Transaction& tx);

  std::size_t node_count() const noexcept { return keys_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return keys_.empty(); }

  const AddressKey& key(NodeIndex node) const { return keys_.at(node); }
  std::optional<NodeIndex> find(const AddressKey& key) const;
  std::optional<NodeIndex> find(std::string_view key) const;

  std::span<const NodeIndex> neighbors(NodeIndex node) const { return adjacency_.at(node); }
  std::size_t degree(NodeIndex node) const { return adjacency_.at(node).size(); }

  std::uint64_t in_tx(NodeIndex node) const { return in_tx_.at(node); }
  std::uint64_t out_tx(NodeIndex node) const { return out_tx_.at(node); }

  const EdgeData* edge(NodeIndex a, NodeIndex b) const;

  /// All edges ordered by (low, high).
  std::vector<Edge> sorted_edges() const;

  /// Σ in_tx over all nodes; zero for graphs loaded from files whose
  /// counters were not restored.
  std::uint64_t transaction_count() const noexcept { return transactions_; }

 private:
  static std::uint64_t pair_key(NodeIndex a, NodeIndex b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  Chain chain_;
  std::vector<AddressKey> keys_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::vector<std::uint64_t> in_tx_;
  std::vector<std::uint64_t> out_tx_;
  std::unordered_map<std::uint64_t, EdgeData> edges_;
  std::uint64_t transactions_ = 0;
};

/// Same chain, same keys under the same indices, same edge set with the same
/// amounts. Transaction counts and directed counters are ignored because the
/// graph file formats do not carry them.
bool same_structure(const InteractionGraph& a, const InteractionGraph& b);

}  // namespace ledgernet
