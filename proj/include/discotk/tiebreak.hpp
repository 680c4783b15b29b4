#pragma once

// Optional post-processing that separates tied segment scores by nudging each
// tied system by epsilon times its system-level total.

#include <map>
#include <string>

#include "discotk/scores.hpp"

namespace discotk {

struct TieBreakReport {
  std::size_t segments_touched = 0;
  std::map<std::string, double> epsilon;  // per language pair
  /// Previously tied pairs that still collide although their system totals
  /// differ (floating-point exhaustion); 0 in every normal run.
  std::size_t collisions_after = 0;
  /// Previously tied pairs whose system totals are equal, so they stay tied.
  std::size_t irreducible = 0;
};

struct TieBreakResult {
  ScoreMatrix scores;
  TieBreakReport report;
};

/// Within each language pair of `metric`: S(sys) is the sum of the system's
/// segment scores and g the smallest positive gap between distinct scores;
/// every score shared by two or more systems in a segment becomes
/// x + eps * S(sys) with eps = g / (2 * (1 + max |S|)), or 1e-9 without a gap.
/// Scores not involved in a tie, and other metrics, are copied unchanged.
TieBreakResult break_ties(const ScoreMatrix& m, const std::string& metric);

}  // namespace discotk
