#include "discotk/repr.hpp"

#include "discotk/error.hpp"

namespace discotk {

namespace {

ReprNode leaf(std::string label) { return ReprNode{std::move(label), {}}; }

ReprNode word(const std::string& token) { return ReprNode{token, {leaf(std::string(kDummyLeaf))}}; }

std::vector<ReprNode> words(const DtNode& edu) {
  std::vector<ReprNode> out;
  out.reserve(edu.tokens.size());
  for (const auto& tok : edu.tokens) out.push_back(word(tok));
  return out;
}

std::string join(std::string_view a, std::string_view b) {
  std::string s(a);
  s.push_back('_');
  s += b;
  return s;
}

// The three word groups that tie each word to the nuclearity and to the
// relation the EDU participates in.
void append_propagated(const DtNode& edu, std::string_view parent_rel, std::vector<ReprNode>& out) {
  const auto nuc = nuclearity_suffix(edu.nuclearity);
  out.push_back(ReprNode{"W-NUC:" + std::string(nuc), words(edu)});
  out.push_back(ReprNode{"W-REL:" + std::string(parent_rel), words(edu)});
  out.push_back(ReprNode{"W-RELNUC:" + join(parent_rel, nuc), words(edu)});
}

class Builder {
 public:
  explicit Builder(ReprKind kind) : kind_(kind) {}

  ReprNode build(const DtNode& node, std::string_view parent_rel) const {
    const bool lex2 = kind_ == ReprKind::Lex2 || kind_ == ReprKind::Lex2_1;
    const bool propagate = kind_ == ReprKind::Lex1_1 || kind_ == ReprKind::Lex2_1;
    const auto nuc = nuclearity_suffix(node.nuclearity);

    ReprNode out;
    if (node.is_edu()) {
      if (lex2) {
        out.label = "EDU";
        out.children.push_back(leaf("NUC:" + std::string(nuc)));
        out.children.push_back(ReprNode{"NGRAM", words(node)});
      } else {
        out.label = join("EDU", nuc);
        if (kind_ != ReprKind::Nolex) out.children = words(node);
      }
      if (propagate) append_propagated(node, parent_rel, out.children);
      return out;
    }

    if (lex2) {
      out.label = "SPAN";
      out.children.push_back(leaf("NUC:" + std::string(nuc)));
      out.children.push_back(leaf("REL:" + node.label));
    } else {
      out.label = join(node.label, nuc);
    }
    for (const auto& child : node.children) out.children.push_back(build(child, node.label));
    return out;
  }

 private:
  ReprKind kind_;
};

// A word preterminal has exactly one leaf child, so a word that happens to
// start with "W-" is never mistaken for a propagated group.
bool is_propagated_group(const ReprNode& n) {
  if (!n.label.starts_with("W-")) return false;
  return !(n.children.size() == 1 && n.children.front().is_leaf());
}

void strip_propagated(ReprNode& node) {
  std::erase_if(node.children, is_propagated_group);
  for (auto& c : node.children) strip_propagated(c);
}

void escape_label(std::string_view label, std::string& out) {
  for (const char c : label) {
    if (c == '(' || c == ')' || c == '\\' || c == ' ' || c == '\t') out.push_back('\\');
    out.push_back(c);
  }
}

void serialize_node(const ReprNode& node, std::string& out) {
  out.push_back('(');
  escape_label(node.label, out);
  for (const auto& c : node.children) {
    out.push_back(' ');
    serialize_node(c, out);
  }
  out.push_back(')');
}

class ReprParser {
 public:
  explicit ReprParser(std::string_view text) : text_(text) {}

  ReprTree parse() {
    skip_ws();
    ReprTree tree{node(0)};
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing characters after tree", pos_);
    return tree;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  ReprNode node(std::size_t depth) {
    if (depth > 4096) throw ParseError("tree nested too deeply", pos_);
    if (pos_ >= text_.size() || text_[pos_] != '(') throw ParseError("expected '('", pos_);
    ++pos_;
    ReprNode n;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '(' || c == ')') break;
      if (c == '\\') {
        if (++pos_ >= text_.size()) throw ParseError("dangling escape", pos_);
        c = text_[pos_];
      }
      n.label.push_back(c);
      ++pos_;
    }
    if (n.label.empty()) throw ParseError("empty label", pos_);
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size()) throw ParseError("unterminated node", pos_);
      if (text_[pos_] == ')') break;
      n.children.push_back(node(depth + 1));
    }
    ++pos_;
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view repr_name(ReprKind kind) {
  switch (kind) {
    case ReprKind::Nolex: return "nolex";
    case ReprKind::Lex1: return "lex1";
    case ReprKind::Lex1_1: return "lex1.1";
    case ReprKind::Lex2: return "lex2";
    case ReprKind::Lex2_1: return "lex2.1";
  }
  return "?";
}

std::optional<ReprKind> parse_repr_kind(std::string_view name) {
  for (const auto k : kAllReprKinds)
    if (repr_name(k) == name) return k;
  return std::nullopt;
}

std::size_t ReprNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::string_view nuclearity_suffix(Nuclearity n) {
  switch (n) {
    case Nuclearity::Nucleus: return "Nuc";
    case Nuclearity::Satellite: return "Sat";
    case Nuclearity::Root: return "ROOT";
  }
  return "?";
}

ReprTree to_repr(const DiscourseTree& tree, ReprKind kind) {
  return ReprTree{Builder(kind).build(tree.root, "ROOT")};
}

ReprTree without_propagated(const ReprTree& tree) {
  ReprTree out = tree;
  strip_propagated(out.root);
  return out;
}

std::string serialize_repr(const ReprTree& tree) {
  std::string out;
  serialize_node(tree.root, out);
  return out;
}

ReprTree parse_repr(std::string_view text) { return ReprParser(text).parse(); }

}  // namespace discotk
