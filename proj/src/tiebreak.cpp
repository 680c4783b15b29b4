#include "discotk/tiebreak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace discotk {

namespace {

double smallest_gap(const ScoreGroup& g) {
  std::vector<double> all;
  for (const auto& [sys, row] : g.systems) all.insert(all.end(), row.begin(), row.end());
  std::sort(all.begin(), all.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i] > all[i - 1]) gap = std::min(gap, all[i] - all[i - 1]);
  return gap;
}

}  // namespace

TieBreakResult break_ties(const ScoreMatrix& m, const std::string& metric) {
  TieBreakResult result{m, {}};
  auto& report = result.report;

  for (const auto& [lp, group] : m.metric(metric)) {
    std::map<std::string, double> total;
    double max_total = 0.0;
    for (const auto& [sys, row] : group.systems) {
      double s = 0.0;
      for (const double x : row) s += x;
      total[sys] = s;
      max_total = std::max(max_total, std::abs(s));
    }
    const double gap = smallest_gap(group);
    const double eps = std::isfinite(gap) ? gap / (2.0 * (1.0 + max_total)) : 1e-9;
    report.epsilon[lp] = eps;

    ScoreGroup out = group;
    bool changed = false;
    for (std::size_t i = 0; i < group.segment_count(); ++i) {
      std::map<double, std::vector<std::string>> by_score;
      for (const auto& [sys, row] : group.systems) by_score[row[i]].push_back(sys);

      bool touched = false;
      for (const auto& [score, systems] : by_score) {
        if (systems.size() < 2) continue;
        touched = true;
        for (const auto& sys : systems) out.systems[sys][i] = score + eps * total[sys];
        for (std::size_t a = 0; a < systems.size(); ++a) {
          for (std::size_t b = a + 1; b < systems.size(); ++b) {
            if (total[systems[a]] == total[systems[b]]) ++report.irreducible;
            else if (out.systems[systems[a]][i] == out.systems[systems[b]][i]) ++report.collisions_after;
          }
        }
      }
      if (touched) {
        ++report.segments_touched;
        changed = true;
      }
    }
    if (changed) result.scores.set_group(metric, lp, std::move(out));
  }
  return result;
}

}  // namespace discotk
