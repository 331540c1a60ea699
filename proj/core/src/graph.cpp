#include "ledgernet/graph.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "ledgernet/errors.hpp"

namespace ledgernet {

NodeIndex InteractionGraph::add_node(const AddressKey& key) {
  if (key.chain() != chain_) {
    throw AddressError("address " + key.str() + " belongs to " + std::string(chain_name(key.chain())) +
                       ", graph is " + std::string(chain_name(chain_)));
  }
  auto [it, inserted] = index_.try_emplace(key.str(), static_cast<NodeIndex>(keys_.size()));
  if (inserted) {
    if (keys_.size() >= std::numeric_limits<NodeIndex>::max()) {
      index_.erase(it);
      throw std::length_error("too many nodes");
    }
    keys_.push_back(key);
    adjacency_.emplace_back();
    in_tx_.push_back(0);
    out_tx_.push_back(0);
  }
  return it->second;
}

void InteractionGraph::add_transaction(const Transaction& tx) {
  std::optional<NodeIndex> from;
  if (tx.sender) from = add_node(*tx.sender);
  NodeIndex to = add_node(tx.recipient);

  ++in_tx_[to];
  ++transactions_;
  if (!from) return;
  ++out_tx_[*from];
  if (*from == to) return;

  auto [it, inserted] = edges_.try_emplace(pair_key(*from, to));
  if (inserted) {
    adjacency_[*from].push_back(to);
    adjacency_[to].push_back(*from);
  }
  it->second.amount += tx.amount;
  ++it->second.tx_count;
}

bool InteractionGraph::add_edge(NodeIndex a, NodeIndex b, Amount amount, std::uint64_t tx_count) {
  if (a >= keys_.size() || b >= keys_.size()) throw std::out_of_range("edge endpoint is not a node");
  if (a == b) throw std::invalid_argument("self-loop edge");
  auto [it, inserted] = edges_.try_emplace(pair_key(a, b), EdgeData{amount, tx_count});
  if (!inserted) return false;
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
  return true;
}

void InteractionGraph::count_transaction(const Transaction& tx) {
  auto to = find(tx.recipient);
  if (!to) throw LookupError("recipient " + tx.recipient.str() + " is not in the graph");
  std::optional<NodeIndex> from;
  if (tx.sender) {
    from = find(*tx.sender);
    if (!from) throw LookupError("sender " + tx.sender->str() + " is not in the graph");
  }
  ++in_tx_[*to];
  ++transactions_;
  if (from) ++out_tx_[*from];
}

std::optional<NodeIndex> InteractionGraph::find(const AddressKey& key) const {
  if (key.chain() != chain_) return std::nullopt;
  return find(std::string_view(key.str()));
}

std::optional<NodeIndex> InteractionGraph::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const EdgeData* InteractionGraph::edge(NodeIndex a, NodeIndex b) const {
  if (a == b) return nullptr;
  auto it = edges_.find(pair_key(a, b));
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<Edge> InteractionGraph::sorted_edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [k, data] : edges_) {
    out.push_back(Edge{static_cast<NodeIndex>(k >> 32), static_cast<NodeIndex>(k & 0xffffffffu), data});
  }
  std::sort(out.begin(), out.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.low, x.high) < std::tie(y.low, y.high); });
  return out;
}

bool same_structure(const InteractionGraph& a, const InteractionGraph& b) {
  if (a.chain() != b.chain() || a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) {
    return false;
  }
  for (NodeIndex i = 0; i < a.node_count(); ++i) {
    if (a.key(i) != b.key(i)) return false;
  }
  for (const Edge& e : a.sorted_edges()) {
    const EdgeData* other = b.edge(e.low, e.high);
    if (other == nullptr || other->amount != e.data.amount) return false;
  }
  return true;
}

}  // namespace ledgernet
