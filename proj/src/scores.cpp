#include "discotk/scores.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <set>

#include "discotk/error.hpp"
#include "discotk/tsv.hpp"

namespace discotk {

namespace {

std::string key_name(const std::string& metric, const std::string& lp, const std::string& system) {
  return "(" + metric + ", " + lp + ", " + system + ")";
}

struct PendingGroup {
  std::string testset;
  std::map<std::string, std::map<int, double>> systems;
};

ScoreGroup finish_group(const std::string& metric, const std::string& lp, PendingGroup pending) {
  std::set<int> ids;
  for (const auto& [sys, segs] : pending.systems)
    for (const auto& [seg, _] : segs) ids.insert(seg);
  const int n = static_cast<int>(ids.size());
  if (*ids.rbegin() != n) {
    int missing = 1;
    while (ids.count(missing)) ++missing;
    throw DataError("segment ids of (" + metric + ", " + lp + ") are not contiguous from 1: segment " +
                    std::to_string(missing) + " is absent");
  }

  ScoreGroup group;
  group.testset = std::move(pending.testset);
  for (auto& [sys, segs] : pending.systems) {
    if (static_cast<int>(segs.size()) != n) {
      for (int s = 1; s <= n; ++s)
        if (!segs.count(s))
          throw DataError("coverage gap: " + key_name(metric, lp, sys) + " has no score for segment " +
                          std::to_string(s));
    }
    std::vector<double> row;
    row.reserve(segs.size());
    for (const auto& [seg, score] : segs) row.push_back(score);
    group.systems.emplace(sys, std::move(row));
  }
  return group;
}

template <typename T>
std::vector<std::string> keys_of(const std::map<std::string, T>& m) {
  std::vector<std::string> out;
  for (const auto& [k, _] : m) out.push_back(k);
  return out;
}

}  // namespace

std::vector<std::string> ScoreMatrix::metric_ids() const { return keys_of(metrics_); }

const ScoreMatrix::LangPairMap& ScoreMatrix::metric(const std::string& metric) const {
  const auto it = metrics_.find(metric);
  if (it == metrics_.end()) throw DataError("unknown metric '" + metric + "'");
  return it->second;
}

const ScoreGroup* ScoreMatrix::group(const std::string& metric, const std::string& langpair) const {
  const auto it = metrics_.find(metric);
  if (it == metrics_.end()) return nullptr;
  const auto g = it->second.find(langpair);
  return g == it->second.end() ? nullptr : &g->second;
}

std::optional<double> ScoreMatrix::find(const std::string& metric, const std::string& langpair,
                                        const std::string& system, int segment) const {
  const auto* g = group(metric, langpair);
  if (!g) return std::nullopt;
  const auto it = g->systems.find(system);
  if (it == g->systems.end() || segment < 1 || static_cast<std::size_t>(segment) > it->second.size())
    return std::nullopt;
  return it->second[segment - 1];
}

double ScoreMatrix::at(const std::string& metric, const std::string& langpair, const std::string& system,
                       int segment) const {
  if (const auto v = find(metric, langpair, system, segment)) return *v;
  throw DataError("no score for metric '" + metric + "', " + langpair + ", system '" + system + "', segment " +
                  std::to_string(segment));
}

void ScoreMatrix::set_group(const std::string& metric, const std::string& langpair, ScoreGroup group) {
  const std::size_t n = group.segment_count();
  if (n == 0) throw DataError("empty score group for " + metric + "/" + langpair);
  for (const auto& [sys, row] : group.systems)
    if (row.size() != n)
      throw DataError("coverage gap: " + key_name(metric, langpair, sys) + " has " + std::to_string(row.size()) +
                      " segments, expected " + std::to_string(n));
  metrics_[metric][langpair] = std::move(group);
}

void ScoreMatrix::merge(const ScoreMatrix& other) {
  for (const auto& [metric, lps] : other.metrics_) {
    for (const auto& [lp, g] : lps) {
      auto& mine = metrics_[metric];
      const auto it = mine.find(lp);
      if (it == mine.end()) {
        mine.emplace(lp, g);
        continue;
      }
      auto& target = it->second;
      if (target.testset != g.testset)
        throw DataError("test set mismatch for (" + metric + ", " + lp + "): '" + target.testset + "' vs '" +
                        g.testset + "'");
      if (target.segment_count() != g.segment_count())
        throw DataError("segment count mismatch for (" + metric + ", " + lp + ")");
      for (const auto& [sys, row] : g.systems) {
        if (!target.systems.emplace(sys, row).second)
          throw DataError("duplicate scores for " + key_name(metric, lp, sys));
      }
    }
  }
}

std::size_t ScoreMatrix::entry_count() const {
  std::size_t n = 0;
  for (const auto& [metric, lps] : metrics_)
    for (const auto& [lp, g] : lps) n += g.systems.size() * g.segment_count();
  return n;
}

std::string format_score(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ScoreMatrix read_segment_scores(std::istream& in, const std::string& source) {
  std::map<std::pair<std::string, std::string>, PendingGroup> pending;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!tsv::clean_line(line)) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto f = tsv::split(line);
    if (f.size() != 6)
      throw DataError(where + ": expected 6 tab-separated columns, got " + std::to_string(f.size()));
    for (const auto& field : f)
      if (field.empty()) throw DataError(where + ": empty field");
    const std::string metric(f[0]), lp(f[1]), testset(f[2]), system(f[3]);
    const int segment = tsv::parse_positive_int(f[4], where);
    const double score = tsv::parse_real(f[5], where);

    auto [it, fresh] = pending.try_emplace({metric, lp});
    if (fresh) it->second.testset = testset;
    else if (it->second.testset != testset)
      throw DataError(where + ": test set '" + testset + "' differs from '" + it->second.testset + "' for (" +
                      metric + ", " + lp + ")");
    if (!it->second.systems[system].emplace(segment, score).second)
      throw DataError(where + ": duplicate key (" + metric + ", " + lp + ", " + system + ", " +
                      std::to_string(segment) + ")");
  }

  ScoreMatrix m;
  for (auto& [key, group] : pending) m.set_group(key.first, key.second, finish_group(key.first, key.second, std::move(group)));
  return m;
}

ScoreMatrix read_segment_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open score file '" + path + "'");
  return read_segment_scores(in, path);
}

void write_segment_scores(std::ostream& out, const ScoreMatrix& m) {
  for (const auto& [metric, lps] : m)
    for (const auto& [lp, g] : lps)
      for (const auto& [sys, row] : g.systems)
        for (std::size_t i = 0; i < row.size(); ++i)
          out << metric << '\t' << lp << '\t' << g.testset << '\t' << sys << '\t' << (i + 1) << '\t'
              << format_score(row[i]) << '\n';
}

SystemScores read_system_scores(std::istream& in, const std::string& source) {
  SystemScores out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!tsv::clean_line(line)) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto f = tsv::split(line);
    if (f.size() != 5)
      throw DataError(where + ": expected 5 tab-separated columns, got " + std::to_string(f.size()));
    for (const auto& field : f)
      if (field.empty()) throw DataError(where + ": empty field");
    auto& group = out[std::string(f[0])][std::string(f[1])];
    if (group.systems.empty()) group.testset = std::string(f[2]);
    else if (group.testset != f[2]) throw DataError(where + ": inconsistent test set");
    if (!group.systems.emplace(std::string(f[3]), tsv::parse_real(f[4], where)).second)
      throw DataError(where + ": duplicate key " + key_name(std::string(f[0]), std::string(f[1]), std::string(f[3])));
  }
  return out;
}

SystemScores read_system_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open score file '" + path + "'");
  return read_system_scores(in, path);
}

void write_system_scores(std::ostream& out, const SystemScores& s) {
  for (const auto& [metric, lps] : s)
    for (const auto& [lp, g] : lps)
      for (const auto& [sys, score] : g.systems)
        out << metric << '\t' << lp << '\t' << g.testset << '\t' << sys << '\t' << format_score(score) << '\n';
}

SystemScores system_means(const ScoreMatrix& m) {
  SystemScores out;
  for (const auto& [metric, lps] : m) {
    for (const auto& [lp, g] : lps) {
      auto& target = out[metric][lp];
      target.testset = g.testset;
      for (const auto& [sys, row] : g.systems) {
        double sum = 0.0;
        for (const double x : row) sum += x;
        target.systems[sys] = sum / static_cast<double>(row.size());
      }
    }
  }
  return out;
}

ScoreMatrix minmax_normalize(const ScoreMatrix& m) {
  ScoreMatrix out;
  for (const auto& [metric, lps] : m) {
    for (const auto& [lp, g] : lps) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& [sys, row] : g.systems) {
        const auto [mn, mx] = std::minmax_element(row.begin(), row.end());
        lo = std::min(lo, *mn);
        hi = std::max(hi, *mx);
      }
      ScoreGroup norm = g;
      for (auto& [sys, row] : norm.systems)
        for (double& x : row) x = hi > lo ? (x - lo) / (hi - lo) : 0.5;
      out.set_group(metric, lp, std::move(norm));
    }
  }
  return out;
}

ScoreMatrix combine(const ScoreMatrix& m, const std::vector<std::string>& metrics, const std::string& out_metric,
                    const SegmentCombiner& fn) {
  if (metrics.empty()) throw DataError("no metrics selected for combination");
  for (const auto& id : metrics)
    if (!m.has_metric(id)) throw DataError("unknown metric '" + id + "'");

  const auto& first = m.metric(metrics.front());
  for (const auto& id : metrics) {
    const auto& lps = m.metric(id);
    if (keys_of(lps) != keys_of(first))
      throw DataError("coverage mismatch: metrics '" + metrics.front() + "' and '" + id +
                      "' cover different language pairs");
    for (const auto& [lp, g] : lps) {
      const auto& ref = first.at(lp);
      if (keys_of(g.systems) != keys_of(ref.systems) || g.segment_count() != ref.segment_count())
        throw DataError("coverage mismatch: metrics '" + metrics.front() + "' and '" + id + "' differ on " + lp);
    }
  }

  ScoreMatrix out;
  std::vector<double> values(metrics.size());
  for (const auto& [lp, ref] : first) {
    ScoreGroup g;
    g.testset = ref.testset;
    for (const auto& [sys, row] : ref.systems) {
      std::vector<const std::vector<double>*> rows;
      for (const auto& id : metrics) rows.push_back(&m.metric(id).at(lp).systems.at(sys));
      std::vector<double> combined(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) {
        for (std::size_t k = 0; k < rows.size(); ++k) values[k] = (*rows[k])[i];
        combined[i] = fn(values);
      }
      g.systems.emplace(sys, std::move(combined));
    }
    out.set_group(out_metric, lp, std::move(g));
  }
  return out;
}

ScoreMatrix combine_uniform(const ScoreMatrix& m, const std::vector<std::string>& metrics,
                            const std::string& out_metric) {
  return combine(m, metrics, out_metric, [](std::span<const double> v) {
    double sum = 0.0;
    for (const double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  });
}

}  // namespace discotk
