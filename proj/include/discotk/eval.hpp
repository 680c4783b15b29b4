#pragma once

// Correlation of metric scores with human judgments.
//
// Report TSV: metric \t langpair \t statistic \t value, statistic in
// {tau, pearson, spearman}; langpair `avg` carries the cross-pair mean.

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discotk/judge.hpp"
#include "discotk/scores.hpp"

namespace discotk {

enum class TiePolicy {
  Discordant,  // a metric tie counts against the metric
  Excluded,    // a metric tie is left out of numerator and denominator
};

std::optional<TiePolicy> parse_tie_policy(std::string_view name);

struct TauConfig {
  TiePolicy ties = TiePolicy::Discordant;
};

/// Metric scores of the human winner and loser of one judgment.
struct ScoredPair {
  double winner = 0.0;
  double loser = 0.0;
};

struct TauCounts {
  std::size_t concordant = 0;
  std::size_t discordant = 0;
  std::size_t excluded = 0;

  /// (C - D) / (C + D); empty when no pair is evaluable.
  std::optional<double> tau() const;
};

TauCounts count_concordance(std::span<const ScoredPair> pairs, const TauConfig& cfg = {});

std::optional<double> kendall_tau(std::span<const ScoredPair> pairs, const TauConfig& cfg = {});

/// Looks every judged (system, segment) up in `metric`; a missing score
/// throws DataError.
std::vector<ScoredPair> score_pairs(std::span<const PairwiseJudgment> judgments, const ScoreMatrix& m,
                                    const std::string& metric);

std::optional<double> kendall_tau(std::span<const PairwiseJudgment> judgments, const ScoreMatrix& m,
                                  const std::string& metric, const TauConfig& cfg = {});

struct HumanSystemScores {
  std::map<std::string, double> scores;  // wins / (wins + losses)
  std::vector<std::string> excluded;     // known systems without a strict comparison
};

/// Throws DataError when the language pair has no judgments.
HumanSystemScores human_system_scores(std::span<const PairwiseJudgment> judgments, const std::string& langpair,
                                      std::span<const std::string> known_systems = {});

/// Product-moment correlation; empty when either input is constant.
/// Throws std::invalid_argument on a length mismatch.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Ranks from 1, ties sharing the average of the ranks they span.
std::vector<double> fractional_ranks(std::span<const double> x);

std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

/// Unweighted mean; throws std::invalid_argument for an empty input.
double average_over_langpairs(std::span<const double> values);

struct ReportRow {
  std::string metric;
  std::string langpair;
  std::string statistic;
  double value = 0.0;
};

void write_report(std::ostream& out, std::span<const ReportRow> rows);

}  // namespace discotk
