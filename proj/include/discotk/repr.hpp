#pragma once

// Kernel-input views of a discourse tree. Label spellings are part of the
// contract: the kernel matches labels by string equality.
//
//   NOLEX   Elaboration_ROOT(EDU_Nuc EDU_Sat)
//   LEX1    NOLEX plus word preterminals under each EDU, each over a dummy `*`
//   LEX1_1  LEX1 plus W-NUC:<nuc>, W-REL:<parent rel>, W-RELNUC:<parent rel>_<nuc>
//           word groups appended to every EDU
//   LEX2    SPAN(NUC:<nuc> REL:<rel> ...children) and EDU(NUC:<nuc> NGRAM(words))
//   LEX2_1  LEX2 plus the same three word groups appended to every EDU

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "discotk/dtree.hpp"

namespace discotk {

enum class ReprKind { Nolex, Lex1, Lex1_1, Lex2, Lex2_1 };

inline constexpr ReprKind kAllReprKinds[] = {ReprKind::Nolex, ReprKind::Lex1, ReprKind::Lex1_1,
                                              ReprKind::Lex2, ReprKind::Lex2_1};

/// Command-line / metric-id spelling: nolex, lex1, lex1.1, lex2, lex2.1.
std::string_view repr_name(ReprKind kind);
std::optional<ReprKind> parse_repr_kind(std::string_view name);

inline constexpr std::string_view kDummyLeaf = "*";

struct ReprNode {
  std::string label;
  std::vector<ReprNode> children;

  bool is_leaf() const noexcept { return children.empty(); }
  std::size_t size() const;

  friend bool operator==(const ReprNode&, const ReprNode&) = default;
};

struct ReprTree {
  ReprNode root;

  std::size_t size() const { return root.size(); }

  friend bool operator==(const ReprTree&, const ReprTree&) = default;
};

/// Suffix spelling of a nuclearity inside labels: Nuc, Sat, ROOT.
std::string_view nuclearity_suffix(Nuclearity n);

ReprTree to_repr(const DiscourseTree& tree, ReprKind kind);

/// Drops the W-NUC / W-REL / W-RELNUC word groups.
ReprTree without_propagated(const ReprTree& tree);

/// Text form `(label child*)`; childless nodes print as `(label)`. A backslash
/// escapes '(', ')', '\\', space and tab inside labels.
std::string serialize_repr(const ReprTree& tree);
ReprTree parse_repr(std::string_view text);

}  // namespace discotk
