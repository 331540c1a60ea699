#include "ledgernet/baseline/erdos_renyi.hpp"

#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <unordered_set>

#include "ledgernet/errors.hpp"
#include "ledgernet/random.hpp"

namespace ledgernet::baseline {

namespace {

unsigned __int128 pair_count(std::uint64_t n) {
  return n < 2 ? 0 : static_cast<unsigned __int128>(n) * (n - 1) / 2;
}

std::string synthetic_key(std::uint64_t id, Chain chain) {
  if (chain == Chain::bitcoin) return "v" + std::to_string(id);
  char buf[48];
  std::snprintf(buf, sizeof buf, "0x%040llx", static_cast<unsigned long long>(id));
  return buf;
}

// Draws `k` distinct unordered pairs of [0, n) uniformly.
std::unordered_set<std::uint64_t> draw_pairs(std::uint64_t n, std::uint64_t k, std::mt19937_64& rng,
                                             std::vector<std::uint64_t>* order) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k * 2));
  while (chosen.size() < k) {
    std::uint64_t u = uniform_below(rng, n);
    std::uint64_t v = uniform_below(rng, n);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    std::uint64_t key = (u << 32) | v;
    if (chosen.insert(key).second && order != nullptr) order->push_back(key);
  }
  return chosen;
}

}  // namespace

void validate(const ErSpec& spec) {
  if (spec.n > std::numeric_limits<NodeIndex>::max()) throw SpecError("too many nodes for G(n, m)");
  if (spec.m > pair_count(spec.n)) {
    throw SpecError("G(" + std::to_string(spec.n) + ", " + std::to_string(spec.m) + "): more edges than node pairs");
  }
  if (spec.samples == 0) throw SpecError("at least one baseline sample is required");
}

InteractionGraph generate_er_gnm(const ErSpec& spec, Chain chain) {
  validate(spec);
  InteractionGraph g(chain);
  for (std::uint64_t i = 1; i <= spec.n; ++i) g.add_node(AddressKey::canonicalize(synthetic_key(i, chain), chain));

  std::mt19937_64 rng(spec.seed);
  const auto pairs = static_cast<std::uint64_t>(pair_count(spec.n));
  const Amount unit(1);

  if (spec.m <= pairs / 2) {
    std::vector<std::uint64_t> order;
    order.reserve(spec.m);
    draw_pairs(spec.n, spec.m, rng, &order);
    for (std::uint64_t key : order) {
      g.add_edge(static_cast<NodeIndex>(key >> 32), static_cast<NodeIndex>(key & 0xffffffffu), unit, 1);
    }
    return g;
  }

  // Dense: pick the pairs to leave out, keep everything else.
  auto excluded = draw_pairs(spec.n, pairs - spec.m, rng, nullptr);
  for (std::uint64_t u = 0; u < spec.n; ++u) {
    for (std::uint64_t v = u + 1; v < spec.n; ++v) {
      if (!excluded.contains((u << 32) | v)) g.add_edge(static_cast<NodeIndex>(u), static_cast<NodeIndex>(v), unit, 1);
    }
  }
  return g;
}

std::uint64_t sample_seed(std::uint64_t seed, unsigned index) {
  return index == 0 ? seed : splitmix64(seed ^ splitmix64(index));
}

}  // namespace ledgernet::baseline
