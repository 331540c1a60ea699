#pragma once

#include <cstdint>

#include "ledgernet/graph.hpp"

namespace ledgernet::baseline {

struct ErSpec {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  unsigned samples = 1;

  friend bool operator==(const ErSpec&, const ErSpec&) = default;
};

/// Throws SpecError unless 0 <= m <= n(n-1)/2, n fits a NodeIndex and
/// samples >= 1.
void validate(const ErSpec& spec);

/// Uniform G(n, m): exactly n nodes and m distinct undirected edges drawn
/// without replacement by rejection sampling over unordered pairs. Above
/// half density the complement is sampled instead. Fully determined by the
/// seed. Node keys are synthetic (`v<id>` for bitcoin, zero-padded hex ids
/// for ethereum); every edge carries amount 1 and one transaction.
InteractionGraph generate_er_gnm(const ErSpec& spec, Chain chain = Chain::bitcoin);

/// Seed of baseline sample `index`; sample 0 uses the spec seed itself.
std::uint64_t sample_seed(std::uint64_t seed, unsigned index);

}  // namespace ledgernet::baseline
