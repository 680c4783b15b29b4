#pragma once

// Human relative rankings, their pairwise expansion and document-level
// cross-validation folds.
//
// Rankings TSV: langpair \t segment \t document \t judge \t sys1=rank1,sys2=rank2,...
// An empty document field falls back to the segment id.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace discotk {

struct RankedItem {
  std::string system;
  int rank = 0;  // 1 is best; equal ranks are ties

  friend bool operator==(const RankedItem&, const RankedItem&) = default;
};

struct RankingRecord {
  std::string langpair;
  int segment = 0;
  std::string document;
  std::string judge;
  std::vector<RankedItem> items;

  /// 2..5 items, positive ranks, distinct systems; throws DataError.
  void validate() const;
};

struct PairwiseJudgment {
  std::string langpair;
  int segment = 0;
  std::string winner;
  std::string loser;

  friend auto operator<=>(const PairwiseJudgment&, const PairwiseJudgment&) = default;
};

/// One judgment per item pair with a strictly better rank; ties are dropped.
std::vector<PairwiseJudgment> expand_pairs(const RankingRecord& record);
std::vector<PairwiseJudgment> expand_pairs(std::span<const RankingRecord> records);

struct RankingFile {
  std::vector<RankingRecord> records;
  std::vector<std::string> warnings;
};

RankingFile read_rankings(std::istream& in, const std::string& source = "<stream>");
RankingFile read_rankings(const std::string& path);
void write_rankings(std::ostream& out, std::span<const RankingRecord> records);

struct FoldAssignment {
  std::size_t k = 0;
  std::map<std::string, std::size_t> fold_of;  // document -> fold
  std::vector<std::size_t> fold_segments;      // distinct segments per fold

  /// Throws DataError for an unknown document.
  std::size_t fold(const std::string& document) const;
  /// Largest relative deviation of a fold size from the mean fold size.
  double imbalance() const;
};

/// Document of each (langpair, segment); throws DataError when one segment is
/// attributed to two documents.
std::map<std::pair<std::string, int>, std::string> segment_documents(std::span<const RankingRecord> records);

/// Documents sorted by segment count (largest first, equal sizes in seeded
/// shuffle order) and dealt to the currently smallest fold.
FoldAssignment make_folds(std::span<const RankingRecord> records, std::size_t k, std::uint64_t seed);

}  // namespace discotk
