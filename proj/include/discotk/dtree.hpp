#pragma once

// Sentence-level RST discourse trees and their one-line text form.
//
// Grammar (one tree per line):
//   tree  := node
//   node  := '(' LABEL ':' NUC ws child+ ')'
//   child := node | TOKEN
//   NUC   := 'N' | 'S' | 'R'
//
// A node whose children are all tokens is an EDU leaf and must be labeled
// `EDU`. Inside tokens a backslash escapes '(', ')', ':', '\' and ' '.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace discotk {

enum class Nuclearity { Nucleus, Satellite, Root };

/// Single-letter code used in the serialized form: N, S or R.
char nuclearity_code(Nuclearity n);

struct DtNode {
  std::string label;
  Nuclearity nuclearity = Nuclearity::Nucleus;
  std::vector<DtNode> children;    // internal node
  std::vector<std::string> tokens; // EDU leaf

  bool is_edu() const noexcept { return children.empty(); }

  friend bool operator==(const DtNode&, const DtNode&) = default;
};

struct DiscourseTree {
  DtNode root;

  std::size_t edu_count() const;
  std::size_t internal_count() const;
  std::size_t word_count() const;

  friend bool operator==(const DiscourseTree&, const DiscourseTree&) = default;
};

/// True for the 18 coarse-grained RST relations and the span tag SPAN.
bool is_known_relation(std::string_view label);

/// Relation labels of internal nodes that are not in the known set, in
/// first-occurrence order without duplicates.
std::vector<std::string> unknown_relations(const DiscourseTree& tree);

/// Throws ParseError (with byte offset) on any deviation from the grammar or
/// tree invariants; never returns a partial tree.
DiscourseTree parse_dtree(std::string_view text);

/// Canonical one-line form: single space between siblings, tokens escaped.
std::string serialize_dtree(const DiscourseTree& tree);

std::string escape_token(std::string_view token);

/// Line i of the stream is segment i+1; blank lines yield std::nullopt.
/// Parse failures are rethrown as DataError prefixed with the line number.
struct TreeFile {
  std::vector<std::optional<DiscourseTree>> trees;
  std::vector<std::string> warnings;
};

TreeFile read_tree_file(std::istream& in);
TreeFile read_tree_file(const std::string& path);

}  // namespace discotk
