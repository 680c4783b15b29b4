#include "discotk/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "discotk/error.hpp"

namespace discotk {

std::optional<TiePolicy> parse_tie_policy(std::string_view name) {
  if (name == "discordant") return TiePolicy::Discordant;
  if (name == "excluded") return TiePolicy::Excluded;
  return std::nullopt;
}

std::optional<double> TauCounts::tau() const {
  const std::size_t n = concordant + discordant;
  if (n == 0) return std::nullopt;
  return (static_cast<double>(concordant) - static_cast<double>(discordant)) / static_cast<double>(n);
}

TauCounts count_concordance(std::span<const ScoredPair> pairs, const TauConfig& cfg) {
  TauCounts c;
  for (const auto& p : pairs) {
    if (p.winner > p.loser) ++c.concordant;
    else if (p.winner < p.loser) ++c.discordant;
    else if (cfg.ties == TiePolicy::Discordant) ++c.discordant;
    else ++c.excluded;
  }
  return c;
}

std::optional<double> kendall_tau(std::span<const ScoredPair> pairs, const TauConfig& cfg) {
  return count_concordance(pairs, cfg).tau();
}

std::vector<ScoredPair> score_pairs(std::span<const PairwiseJudgment> judgments, const ScoreMatrix& m,
                                    const std::string& metric) {
  std::vector<ScoredPair> out;
  out.reserve(judgments.size());
  for (const auto& j : judgments)
    out.push_back({m.at(metric, j.langpair, j.winner, j.segment), m.at(metric, j.langpair, j.loser, j.segment)});
  return out;
}

std::optional<double> kendall_tau(std::span<const PairwiseJudgment> judgments, const ScoreMatrix& m,
                                  const std::string& metric, const TauConfig& cfg) {
  const auto pairs = score_pairs(judgments, m, metric);
  return kendall_tau(pairs, cfg);
}

HumanSystemScores human_system_scores(std::span<const PairwiseJudgment> judgments, const std::string& langpair,
                                      std::span<const std::string> known_systems) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // wins, losses
  for (const auto& j : judgments) {
    if (j.langpair != langpair) continue;
    ++tally[j.winner].first;
    ++tally[j.loser].second;
  }
  if (tally.empty()) throw DataError("no judgments for language pair " + langpair);

  HumanSystemScores out;
  for (const auto& [sys, wl] : tally)
    out.scores[sys] = static_cast<double>(wl.first) / static_cast<double>(wl.first + wl.second);
  for (const auto& sys : known_systems)
    if (!tally.count(sys)) out.excluded.push_back(sys);
  return out;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // positions i..j (0-based) share ranks i+1..j+1
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: inputs differ in length");
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  return pearson(rx, ry);
}

double average_over_langpairs(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("average over zero language pairs");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

void write_report(std::ostream& out, std::span<const ReportRow> rows) {
  for (const auto& r : rows)
    out << r.metric << '\t' << r.langpair << '\t' << r.statistic << '\t' << format_score(r.value) << '\n';
}

}  // namespace discotk
