// Acceptance runner: one pass/fail line per criterion, nonzero exit on any failure.

#include <cstdio>

#include "growthlift/acceptance.hpp"
#include "growthlift/io.hpp"

int main() {
  const std::uint64_t seed = growthlift::default_seed();
  const auto results = growthlift::run_acceptance(seed);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s %s: %s [%s]\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.title.c_str(),
                r.detail.c_str());
    all = all && r.pass;
  }
  std::printf("%s (%zu criteria, seed %llu)\n", all ? "ALL PASS" : "FAILURES PRESENT",
              results.size(), static_cast<unsigned long long>(seed));
  return all ? 0 : 1;
}
