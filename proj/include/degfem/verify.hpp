#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "degfem/io.hpp"

namespace degfem {

struct CheckResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest normalised defect; <= 1 means within tolerance
  std::string detail{};
  bool passed() const { return failures == 0; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool passed() const;
};

constexpr std::uint64_t kDefaultSeed = 20240531;

/// identities | interp | correction | necessary; throws InvalidConfiguration otherwise.
SuiteReport run_suite(const std::string& suite, std::uint64_t seed = kDefaultSeed);
std::vector<std::string> suite_names();

Json to_json(const SuiteReport& r);

}  // namespace degfem
