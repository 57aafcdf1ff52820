#include <cstdint>
#include <cstdio>
#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

#include "eseplab/parallel.hpp"
#include "eseplab/verify.hpp"

using namespace eseplab;

namespace {

constexpr std::uint64_t kMasterSeed = 20240611;

struct Criterion {
  int number;
  const char* claim_id;
  const char* title;
};

const Criterion kCriteria[] = {
    {1, "steady-negbin", "steady-state law"},
    {2, "mean-variance-order", "mean equality and variance ordering"},
    {3, "transient-transforms", "transient transforms"},
    {4, "matrix-pmf", "matrix PMF"},
    {5, "branching-laws", "branching laws"},
    {6, "family-decomposition", "family decomposition"},
    {7, "sis-convergence", "SIS convergence"},
    {8, "batch-scaling", "batch scaling"},
    {9, "hesep-sandwich", "HESEP sandwich and renewal"},
    {10, "diffusion-bracket", "diffusion bracket"},
    {11, "blocking", "blocking"},
};

const ClaimReport* find(const std::vector<ClaimReport>& rs, const std::string& id) {
  for (const ClaimReport& r : rs) {
    if (r.claim_id == id) return &r;
  }
  return nullptr;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) only.emplace_back(argv[i]);
  const int threads = default_threads();
  std::vector<ClaimSpec> suite;
  for (const ClaimSpec& s : default_suite(kMasterSeed)) {
    if (only.empty() || std::find(only.begin(), only.end(), s.claim_id) != only.end()) suite.push_back(s);
  }
  std::printf("master seed %llu, %d thread(s)\n", static_cast<unsigned long long>(kMasterSeed), threads);
  const std::vector<ClaimReport> first = run_suite(suite, threads);
  bool ok = true;
  for (const Criterion& c : kCriteria) {
    const ClaimReport* r = find(first, c.claim_id);
    if (!r) continue;
    ok = ok && r->pass;
    std::printf("[%s] criterion %d (%s, %s): %s=%.6g threshold %.6g%s [%.1fs]\n", r->pass ? "PASS" : "FAIL", c.number,
                c.title, r->claim_id.c_str(), r->checks.front().name.c_str(), r->observed, r->threshold,
                r->retried ? " (second seed)" : "", r->runtime_seconds);
    for (const Check& k : r->checks) {
      std::printf("    %-44s %s %.8g vs %.8g\n", k.name.c_str(), k.pass ? "ok  " : "FAIL", k.observed, k.threshold);
    }
    std::fflush(stdout);
  }
  const std::vector<ClaimReport> second = run_suite(suite, threads);
  bool identical = second.size() == first.size();
  for (std::size_t i = 0; identical && i < first.size(); ++i) {
    const auto& a = first[i].checks;
    const auto& b = second[i].checks;
    identical = a.size() == b.size() && first[i].seed == second[i].seed;
    for (std::size_t k = 0; identical && k < a.size(); ++k) identical = same_bits(a[k].observed, b[k].observed);
  }
  ok = ok && identical;
  std::printf("[%s] criterion 12 (determinism): rerun of %zu claims reproduces every observed value bit-identically\n",
              identical ? "PASS" : "FAIL", first.size());
  write_text_file("acceptance_report.json", suite_to_json(first).dump(2) + "\n");
  return ok ? 0 : 1;
}
