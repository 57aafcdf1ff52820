#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eseplab {

struct SweepRow {
  double scale = 0.0;
  std::string metric_name;
  double metric_value = 0.0;
  std::uint64_t samples = 0;  // 1 for analytic rows
  std::uint64_t seed = 0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool monotone_expected = false;

  // rows with the given metric, in scale order
  std::vector<SweepRow> metric(const std::string& name) const;
  void sort_rows();
};

}  // namespace eseplab
