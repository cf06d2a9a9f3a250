#pragma once

#include <string>
#include <vector>

#include "qconf/rational.hpp"

namespace qconf {

struct VerificationReport {
  bool passed = true;
  Ext min_difference_valuation = Ext::inf();
  Ext threshold = Ext(0);
  // Name of the first law that failed, empty when passed.
  std::string failed_law;
  std::vector<std::string> diagnostics;

  // Records one check; a law fails when its difference valuation is below
  // the threshold.
  void check(const std::string& law, const Ext& v) {
    min_difference_valuation = min(min_difference_valuation, v);
    diagnostics.push_back(law + ": difference valuation " + v.decimal(6));
    if (v < threshold) {
      if (passed) failed_law = law;
      passed = false;
    }
  }
  void note(std::string s) { diagnostics.push_back(std::move(s)); }
};

}  // namespace qconf
