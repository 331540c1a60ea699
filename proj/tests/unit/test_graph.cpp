#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ledgernet/errors.hpp"
#include "ledgernet/graph.hpp"
#include "test_support.hpp"

using namespace ledgernet;
using testing_support::btc;

namespace {

Transaction tx(const char* from, const char* to, std::uint64_t amount) {
  return Transaction{btc(from), btc(to), Amount(amount), 1, 0};
}

}  // namespace

TEST(Graph, SingleTransactionMakesOneEdge) {
  InteractionGraph g(Chain::bitcoin);
  g.add_transaction(tx("A", "B", 5));
  ASSERT_EQ(g.node_count(), 2u);
  ASSERT_EQ(g.edge_count(), 1u);
  const auto a = *g.find("A");
  const auto b = *g.find("B");
  EXPECT_EQ(a, 0u);  // first-seen order
  const EdgeData* e = g.edge(a, b);
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->tx_count, 1u);
  EXPECT_EQ(e->amount, Amount(5));
  EXPECT_EQ(g.out_tx(a), 1u);
  EXPECT_EQ(g.in_tx(b), 1u);
  EXPECT_EQ(g.in_tx(a), 0u);
}

TEST(Graph, RepeatedPairAggregates) {
  InteractionGraph g(Chain::bitcoin);
  g.add_transaction(tx("A", "B", 5));
  g.add_transaction(tx("A", "B", 3));
  EXPECT_EQ(g.edge_count(), 1u);
  const EdgeData* e = g.edge(0, 1);
  EXPECT_EQ(e->tx_count, 2u);
  EXPECT_EQ(e->amount, Amount(8));
  EXPECT_EQ(g.out_tx(0), 2u);
}

TEST(Graph, SelfTransferCountsButAddsNoEdge) {
  InteractionGraph g(Chain::bitcoin);
  g.add_transaction(tx("A", "B", 5));
  g.add_transaction(tx("A", "B", 3));
  g.add_transaction(tx("A", "A", 1));
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.out_tx(0), 3u);
  EXPECT_EQ(g.in_tx(0), 1u);
}

TEST(Graph, ReverseDirectionSharesTheEdge) {
  InteractionGraph g(Chain::bitcoin);
  g.add_transaction(tx("A", "B", 5));
  g.add_transaction(tx("B", "A", 2));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.edge(1, 0)->amount, Amount(7));
  EXPECT_EQ(g.edge(0, 1), g.edge(1, 0));
}

TEST(Graph, SenderlessTransferAddsOnlyRecipient) {
  InteractionGraph g(Chain::bitcoin);
  g.add_transaction(Transaction{std::nullopt, btc("miner"), Amount(50), 0, 0});
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(g.in_tx(0), 1u);
  EXPECT_EQ(g.transaction_count(), 1u);
}

TEST(Graph, RejectsForeignChainAndBadEdges) {
  InteractionGraph g(Chain::ethereum);
  EXPECT_THROW(g.add_node(btc("A")), AddressError);
  auto a = g.add_node(AddressKey::canonicalize(testing_support::eth_key(1), Chain::ethereum));
  EXPECT_THROW(g.add_edge(a, a, Amount(1), 1), std::invalid_argument);
  EXPECT_THROW(g.add_edge(a, 7, Amount(1), 1), std::out_of_range);
}

TEST(Graph, AddEdgeReportsNovelty) {
  auto g = testing_support::graph_from_edges(3, {});
  EXPECT_TRUE(g.add_edge(0, 1, Amount(2), 0));
  EXPECT_FALSE(g.add_edge(1, 0, Amount(3), 0));
  EXPECT_EQ(g.edge(0, 1)->amount, Amount(2));  // duplicate leaves the edge untouched
  EXPECT_EQ(g.degree(0), 1u);
}

TEST(Graph, SortedEdgesAreLexicographic) {
  auto g = testing_support::graph_from_edges(4, {{3, 1}, {0, 2}, {1, 0}, {2, 3}});
  auto edges = g.sorted_edges();
  ASSERT_EQ(edges.size(), 4u);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    EXPECT_LT(edges[i].low, edges[i].high);
    if (i > 0) EXPECT_LT(std::pair(edges[i - 1].low, edges[i - 1].high), std::pair(edges[i].low, edges[i].high));
  }
}

// Edge count equals distinct unordered non-self pairs; degree sum is twice it.
TEST(GraphProperty, RandomTransactionSequences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int pool = 2 + static_cast<int>(rng() % 30);
    const int count = static_cast<int>(rng() % 300);
    InteractionGraph g(Chain::bitcoin);
    std::set<std::pair<std::string, std::string>> pairs;
    std::set<std::string> seen;
    for (int i = 0; i < count; ++i) {
      std::string s = "a" + std::to_string(rng() % pool);
      std::string r = "a" + std::to_string(rng() % pool);
      g.add_transaction(Transaction{btc(s), btc(r), Amount(rng() % 1000), 0, 0});
      seen.insert(s);
      seen.insert(r);
      if (s != r) pairs.insert(std::minmax(s, r));
    }
    ASSERT_EQ(g.edge_count(), pairs.size());
    ASSERT_EQ(g.node_count(), seen.size());
    std::uint64_t degree_sum = 0;
    std::uint64_t in_sum = 0;
    std::uint64_t out_sum = 0;
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      degree_sum += g.degree(v);
      in_sum += g.in_tx(v);
      out_sum += g.out_tx(v);
      for (NodeIndex u : g.neighbors(v)) ASSERT_NE(g.edge(u, v), nullptr);  // symmetry
    }
    ASSERT_EQ(degree_sum, 2 * g.edge_count());
    ASSERT_EQ(in_sum, static_cast<std::uint64_t>(count));
    ASSERT_EQ(out_sum, static_cast<std::uint64_t>(count));
  }
}

TEST(GraphProperty, InsertionOrderOfRepeatsIsIdempotent) {
  std::mt19937_64 rng(11);
  std::vector<Transaction> txs;
  for (int i = 0; i < 200; ++i) {
    txs.push_back(Transaction{btc("a" + std::to_string(rng() % 20)), btc("a" + std::to_string(rng() % 20)),
                              Amount(rng() % 50), 0, 0});
  }
  InteractionGraph once(Chain::bitcoin);
  InteractionGraph twice(Chain::bitcoin);
  for (const auto& t : txs) once.add_transaction(t);
  for (const auto& t : txs) twice.add_transaction(t);
  for (const auto& t : txs) twice.add_transaction(t);
  ASSERT_EQ(once.node_count(), twice.node_count());
  ASSERT_EQ(once.edge_count(), twice.edge_count());
  for (const Edge& e : once.sorted_edges()) {
    ASSERT_NE(twice.edge(e.low, e.high), nullptr);
    EXPECT_EQ(twice.edge(e.low, e.high)->tx_count, 2 * e.data.tx_count);
  }
  EXPECT_EQ(twice.transaction_count(), 2 * once.transaction_count());
}
