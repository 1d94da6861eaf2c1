#include "fatigue/variation.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "fatigue/evolution.hpp"

namespace fatigue {

void ZetaSeries::validate() const {
  if (times.size() != values.size()) throw std::invalid_argument("zeta series: times and values differ in length");
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) throw std::invalid_argument("zeta series: times must increase strictly");
    if (values[j].rows() != values[0].rows() || values[j].cols() != values[0].cols()) {
      throw std::invalid_argument("zeta series: inconsistent field shapes");
    }
  }
}

ZetaSeries zeta_series(const EvolutionTrace& trace) {
  ZetaSeries s;
  for (int i = 0; i <= trace.completed(); ++i) {
    s.times.push_back(trace.time(i));
    s.values.push_back(trace.zeta(i));
  }
  return s;
}

Vector partition_variation(const ZetaSeries& series, const std::vector<int>& indices) {
  if (series.values.empty()) throw std::invalid_argument("zeta series is empty");
  Vector total = Vector::Zero(series.values.front().cols());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int idx = indices[j];
    if (idx < 0 || idx >= series.size() || (j > 0 && idx <= indices[j - 1])) {
      throw std::invalid_argument(fmt::format("partition index {} out of order or range", idx));
    }
    if (j > 0) {
      total += (series.values[static_cast<std::size_t>(idx)] - series.values[static_cast<std::size_t>(indices[j - 1])])
                   .colwise()
                   .norm()
                   .transpose();
    }
  }
  return total;
}

Vector essential_variation(const ZetaSeries& series, int from_idx, int to_idx) {
  if (from_idx < 0 || to_idx < from_idx || to_idx >= series.size()) {
    throw std::invalid_argument(
        fmt::format("variation range [{}, {}] invalid for {} samples", from_idx, to_idx, series.size()));
  }
  std::vector<int> all;
  for (int j = from_idx; j <= to_idx; ++j) all.push_back(j);
  return partition_variation(series, all);
}

}  // namespace fatigue
