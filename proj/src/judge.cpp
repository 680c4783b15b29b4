#include "discotk/judge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>

#include "discotk/error.hpp"
#include "discotk/tsv.hpp"

namespace discotk {

void RankingRecord::validate() const {
  const std::string where = "ranking (" + langpair + ", segment " + std::to_string(segment) + ")";
  if (items.size() < 2 || items.size() > 5)
    throw DataError(where + ": expected 2 to 5 ranked systems, got " + std::to_string(items.size()));
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (item.rank <= 0) throw DataError(where + ": rank must be positive");
    if (item.system.empty()) throw DataError(where + ": empty system id");
    if (!seen.insert(item.system).second) throw DataError(where + ": system '" + item.system + "' ranked twice");
  }
}

std::vector<PairwiseJudgment> expand_pairs(const RankingRecord& record) {
  std::vector<PairwiseJudgment> out;
  const auto& items = record.items;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].rank == items[j].rank) continue;
      const bool first_wins = items[i].rank < items[j].rank;
      out.push_back({record.langpair, record.segment, first_wins ? items[i].system : items[j].system,
                     first_wins ? items[j].system : items[i].system});
    }
  }
  return out;
}

std::vector<PairwiseJudgment> expand_pairs(std::span<const RankingRecord> records) {
  std::vector<PairwiseJudgment> out;
  for (const auto& r : records) {
    auto pairs = expand_pairs(r);
    out.insert(out.end(), std::make_move_iterator(pairs.begin()), std::make_move_iterator(pairs.end()));
  }
  return out;
}

RankingFile read_rankings(std::istream& in, const std::string& source) {
  RankingFile file;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!tsv::clean_line(line)) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto f = tsv::split(line);
    if (f.size() != 5)
      throw DataError(where + ": expected 5 tab-separated columns, got " + std::to_string(f.size()));
    if (f[0].empty()) throw DataError(where + ": empty language pair");

    RankingRecord r;
    r.langpair = std::string(f[0]);
    r.segment = tsv::parse_positive_int(f[1], where);
    r.document = std::string(f[2]);
    r.judge = std::string(f[3]);
    if (r.document.empty()) {
      r.document = std::to_string(r.segment);
      file.warnings.push_back(where + ": no document id, using segment id " + r.document);
    }
    for (const auto item : tsv::split(f[4], ',')) {
      const auto eq = item.rfind('=');
      if (eq == std::string_view::npos) throw DataError(where + ": ranked item without '=': '" + std::string(item) + "'");
      r.items.push_back({std::string(item.substr(0, eq)), tsv::parse_positive_int(item.substr(eq + 1), where)});
    }
    try {
      r.validate();
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    file.records.push_back(std::move(r));
  }
  return file;
}

RankingFile read_rankings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open rankings file '" + path + "'");
  return read_rankings(in, path);
}

void write_rankings(std::ostream& out, std::span<const RankingRecord> records) {
  for (const auto& r : records) {
    out << r.langpair << '\t' << r.segment << '\t' << r.document << '\t' << r.judge << '\t';
    for (std::size_t i = 0; i < r.items.size(); ++i)
      out << (i ? "," : "") << r.items[i].system << '=' << r.items[i].rank;
    out << '\n';
  }
}

std::size_t FoldAssignment::fold(const std::string& document) const {
  const auto it = fold_of.find(document);
  if (it == fold_of.end()) throw DataError("document '" + document + "' has no fold");
  return it->second;
}

double FoldAssignment::imbalance() const {
  if (fold_segments.empty()) return 0.0;
  double total = 0.0;
  for (const auto n : fold_segments) total += static_cast<double>(n);
  const double mean = total / static_cast<double>(fold_segments.size());
  double worst = 0.0;
  for (const auto n : fold_segments) worst = std::max(worst, std::abs(static_cast<double>(n) - mean) / mean);
  return worst;
}

std::map<std::pair<std::string, int>, std::string> segment_documents(std::span<const RankingRecord> records) {
  std::map<std::pair<std::string, int>, std::string> out;
  for (const auto& r : records) {
    const auto [it, fresh] = out.try_emplace({r.langpair, r.segment}, r.document);
    if (!fresh && it->second != r.document)
      throw DataError("segment " + std::to_string(r.segment) + " of " + r.langpair + " belongs to documents '" +
                      it->second + "' and '" + r.document + "'");
  }
  return out;
}

FoldAssignment make_folds(std::span<const RankingRecord> records, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("need at least 2 folds");
  segment_documents(records);

  std::map<std::string, std::set<int>> doc_segments;
  for (const auto& r : records) doc_segments[r.document].insert(r.segment);
  if (doc_segments.size() < k)
    throw DataError("only " + std::to_string(doc_segments.size()) + " documents for " + std::to_string(k) + " folds");

  struct Doc {
    std::string id;
    std::size_t size;
  };
  std::vector<Doc> docs;
  for (const auto& [id, segs] : doc_segments) docs.push_back({id, segs.size()});

  // Fisher-Yates with an explicit engine so the order is the same on every
  // standard library.
  std::mt19937_64 rng(seed);
  for (std::size_t i = docs.size(); i > 1; --i) std::swap(docs[i - 1], docs[rng() % i]);
  std::stable_sort(docs.begin(), docs.end(), [](const Doc& a, const Doc& b) { return a.size > b.size; });

  FoldAssignment folds;
  folds.k = k;
  folds.fold_segments.assign(k, 0);
  for (const auto& d : docs) {
    const auto smallest = static_cast<std::size_t>(
        std::min_element(folds.fold_segments.begin(), folds.fold_segments.end()) - folds.fold_segments.begin());
    folds.fold_of[d.id] = smallest;
    folds.fold_segments[smallest] += d.size;
  }
  return folds;
}

}  // namespace discotk
