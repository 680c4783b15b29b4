#pragma once

// Metric scores keyed by (metric, language pair, system, segment).
//
// Segment TSV: metric \t langpair \t testset \t system \t segment \t score
// System  TSV: metric \t langpair \t testset \t system \t score
// No header, '.' decimal point, scores written with 12 significant digits.

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace discotk {

/// All systems of one (metric, language pair), each with one score per
/// segment; segment id s lives at index s-1.
struct ScoreGroup {
  std::string testset;
  std::map<std::string, std::vector<double>> systems;

  std::size_t segment_count() const { return systems.empty() ? 0 : systems.begin()->second.size(); }

  friend bool operator==(const ScoreGroup&, const ScoreGroup&) = default;
};

class ScoreMatrix {
 public:
  using LangPairMap = std::map<std::string, ScoreGroup>;

  bool has_metric(const std::string& metric) const { return metrics_.count(metric) != 0; }
  std::vector<std::string> metric_ids() const;

  const LangPairMap& metric(const std::string& metric) const;
  const ScoreGroup* group(const std::string& metric, const std::string& langpair) const;

  std::optional<double> find(const std::string& metric, const std::string& langpair, const std::string& system,
                             int segment) const;
  /// Throws DataError naming the missing key.
  double at(const std::string& metric, const std::string& langpair, const std::string& system, int segment) const;

  /// Replaces any existing group for (metric, langpair). All systems must have
  /// the same, non-zero number of segments.
  void set_group(const std::string& metric, const std::string& langpair, ScoreGroup group);

  /// Adds the groups of `other`; an overlapping (metric, langpair, system) is
  /// a duplicate and throws DataError.
  void merge(const ScoreMatrix& other);

  std::size_t entry_count() const;
  bool empty() const { return metrics_.empty(); }

  auto begin() const { return metrics_.begin(); }
  auto end() const { return metrics_.end(); }

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

 private:
  std::map<std::string, LangPairMap> metrics_;
};

struct SystemGroup {
  std::string testset;
  std::map<std::string, double> systems;

  friend bool operator==(const SystemGroup&, const SystemGroup&) = default;
};

/// metric -> language pair -> system scores.
using SystemScores = std::map<std::string, std::map<std::string, SystemGroup>>;

ScoreMatrix read_segment_scores(std::istream& in, const std::string& source = "<stream>");
ScoreMatrix read_segment_scores(const std::string& path);
void write_segment_scores(std::ostream& out, const ScoreMatrix& m);

SystemScores read_system_scores(std::istream& in, const std::string& source = "<stream>");
SystemScores read_system_scores(const std::string& path);
void write_system_scores(std::ostream& out, const SystemScores& s);

/// Shared number formatting for every TSV this toolkit writes.
std::string format_score(double x);

/// Mean over segments for every (metric, langpair, system).
SystemScores system_means(const ScoreMatrix& m);

/// (x - min) / (max - min) within each (metric, language pair), pooling all
/// systems and segments; a constant group maps to 0.5.
ScoreMatrix minmax_normalize(const ScoreMatrix& m);

/// Per-segment function of the selected metrics' scores, in `metrics` order.
using SegmentCombiner = std::function<double(std::span<const double>)>;

/// Builds one synthetic metric from `metrics`. Every selected metric must
/// cover the same language pairs, systems and segment counts.
ScoreMatrix combine(const ScoreMatrix& m, const std::vector<std::string>& metrics, const std::string& out_metric,
                    const SegmentCombiner& fn);

/// Arithmetic mean of the selected metrics per segment.
ScoreMatrix combine_uniform(const ScoreMatrix& m, const std::vector<std::string>& metrics,
                            const std::string& out_metric);

}  // namespace discotk
