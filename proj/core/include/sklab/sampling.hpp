#pragma once

#include <vector>

#include "sklab/rng.hpp"
#include "sklab/types.hpp"

namespace sklab {

/// An ordered list of l indices drawn uniformly from [0, n). Draws are
/// independent, so duplicates are possible (and kept) by default.
struct IndexSample {
  std::vector<Index> indices;
  Index n = 0;
  bool with_replacement = true;

  Index size() const { return static_cast<Index>(indices.size()); }
};

/// l independent uniform draws from {0, ..., n-1}, in draw order.
/// with_replacement=false switches to a uniform l-subset (sorted draw order),
/// which changes the distribution the sampling-bound theory assumes; the
/// default is what the factorization algorithms use.
IndexSample sample_uniform(Index n, Index l, Rng& rng, bool with_replacement = true);

/// Sample size l = ceil(10 * mu * k * ln(m)) that makes the row/column
/// sampling bounds hold with high probability. Not capped here; callers cap
/// at min(m, n).
Index recommended_l(double mu, Index k, Index m);

}  // namespace sklab
