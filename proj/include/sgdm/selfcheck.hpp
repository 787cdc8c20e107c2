#pragma once

#include <string>
#include <vector>

namespace sgdm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast hand-computed cases covering every module; used by `sgdm check`.
std::vector<CheckResult> self_check();

}  // namespace sgdm
