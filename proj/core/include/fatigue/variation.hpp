#pragma once

#include <vector>

#include "fatigue/types.hpp"

namespace fatigue {

struct EvolutionTrace;

/// Sampled per-element zeta with strictly increasing sample times.
struct ZetaSeries {
  std::vector<double> times;
  std::vector<ZetaField> values;

  int size() const { return static_cast<int>(times.size()); }
  /// Throws std::invalid_argument on unsorted times or inconsistent shapes.
  void validate() const;
};

/// zeta at every grid time of the trace, initial state included.
ZetaSeries zeta_series(const EvolutionTrace& trace);

/// Per-element sum of |zeta_{j} - zeta_{j-1}| over from_idx < j <= to_idx.
/// For a finitely sampled series the supremum over partitions is attained
/// by the full consecutive sum.
Vector essential_variation(const ZetaSeries& series, int from_idx, int to_idx);

/// Same sum over an increasing subsequence of sample indices only.
Vector partition_variation(const ZetaSeries& series, const std::vector<int>& indices);

}  // namespace fatigue
