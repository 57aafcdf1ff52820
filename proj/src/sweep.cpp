#include "eseplab/sweep.hpp"

#include <algorithm>

namespace eseplab {

std::vector<SweepRow> SweepReport::metric(const std::string& name) const {
  std::vector<SweepRow> out;
  for (const SweepRow& r : rows) {
    if (r.metric_name == name) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const SweepRow& a, const SweepRow& b) { return a.scale < b.scale; });
  return out;
}

void SweepReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.scale < b.scale; });
}

}  // namespace eseplab
