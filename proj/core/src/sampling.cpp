#include "sklab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sklab {

IndexSample sample_uniform(Index n, Index l, Rng& rng, bool with_replacement) {
  if (n < 1) throw std::invalid_argument("sample_uniform: n must be >= 1");
  if (l < 0) throw std::invalid_argument("sample_uniform: l must be >= 0");

  IndexSample out;
  out.n = n;
  out.with_replacement = with_replacement;
  out.indices.reserve(static_cast<std::size_t>(l));

  if (with_replacement) {
    for (Index t = 0; t < l; ++t)
      out.indices.push_back(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
    return out;
  }

  if (l > n) throw std::invalid_argument("sample_uniform: l > n without replacement");
  // Partial Fisher-Yates over [0, n).
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index t = 0; t < l; ++t) {
    const Index j = t + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - t)));
    std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(j)]);
    out.indices.push_back(pool[static_cast<std::size_t>(t)]);
  }
  return out;
}

Index recommended_l(double mu, Index k, Index m) {
  if (mu < 1.0) throw std::invalid_argument("recommended_l: mu must be >= 1");
  if (k < 1) throw std::invalid_argument("recommended_l: k must be >= 1");
  if (m < 2) throw std::invalid_argument("recommended_l: m must be >= 2");
  return static_cast<Index>(std::ceil(10.0 * mu * static_cast<double>(k) *
                                      std::log(static_cast<double>(m))));
}

}  // namespace sklab
