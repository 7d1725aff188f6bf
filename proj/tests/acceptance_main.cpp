// Acceptance suite: runs the full verification battery with its default
// grids and prints one pass/fail line per criterion, with per-check detail
// underneath. Exits nonzero if any criterion fails.

#include <iostream>
#include <map>
#include <vector>

#include "lcmanifold/verify.hpp"

namespace {

const char* criterion_title(int n) {
  switch (n) {
    case 1: return "manifold algebra: generic solve vs closed forms";
    case 2: return "centre-manifold limit of the Lienard coefficients";
    case 3: return "invariance residual scaling";
    case 4: return "base radius from uncoupled simulation";
    case 5: return "modified radius: formula, oracle, simulations";
    case 6: return "radius increment and large-lambda limit";
    case 7: return "angular velocity and period";
    case 8: return "radial oscillation count";
    case 9: return "Van der Pol averaged and modified radius";
    case 10: return "integrator quality";
    case 11: return "determinism and round trip";
    default: return "?";
  }
}

}  // namespace

int main() {
  std::vector<lcm::CheckResult> results;
  try {
    results = lcm::run_verification(lcm::VerifyOptions{});
  } catch (const std::exception& err) {
    std::cerr << "acceptance suite aborted: " << err.what() << "\n";
    return 2;
  }

  std::map<int, bool> criterion_pass;
  for (const auto& r : results) {
    auto [it, inserted] = criterion_pass.try_emplace(r.criterion, r.pass);
    if (!inserted) it->second = it->second && r.pass;
  }

  bool all = true;
  for (const auto& [criterion, pass] : criterion_pass) {
    all = all && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << criterion << ": "
              << criterion_title(criterion) << "\n";
    for (const auto& r : results)
      if (r.criterion == criterion)
        std::cout << "      [" << (r.pass ? "ok" : "FAIL") << "] " << r.id << " " << r.name
                  << " -- " << r.detail << "\n";
  }
  std::cout << (all ? "acceptance: all criteria passed\n"
                    : "acceptance: some criteria FAILED\n");
  return all ? 0 : 1;
}
