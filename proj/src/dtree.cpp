#include "discotk/dtree.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>

#include "discotk/error.hpp"

namespace discotk {

namespace {

constexpr std::size_t kMaxDepth = 4096;

constexpr std::array<std::string_view, 19> kKnownRelations = {
    "Attribution", "Background",  "Cause",          "Comparison", "Condition",
    "Contrast",    "Elaboration", "Enablement",     "Evaluation", "Explanation",
    "Joint",       "Manner-Means", "Topic-Comment", "Summary",    "Temporal",
    "Topic-Change", "Textual-Organization", "Same-Unit", "SPAN"};

bool is_ws(char c) { return c == ' ' || c == '\t'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  DiscourseTree parse() {
    skip_ws();
    DiscourseTree tree{parse_node(0)};
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after tree");
    return tree;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && is_ws(peek())) ++pos_;
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  DtNode parse_node(std::size_t depth) {
    if (depth > kMaxDepth) fail("tree nested too deeply");
    const std::size_t open = pos_;
    expect('(');

    DtNode node;
    while (!at_end() && peek() != ':') {
      const char c = peek();
      if (is_ws(c) || c == '(' || c == ')' || c == '\\') fail("invalid character in label");
      node.label.push_back(c);
      ++pos_;
    }
    if (node.label.empty()) fail("empty label");
    expect(':');

    if (at_end()) fail("missing nuclearity");
    switch (peek()) {
      case 'N': node.nuclearity = Nuclearity::Nucleus; break;
      case 'S': node.nuclearity = Nuclearity::Satellite; break;
      case 'R': node.nuclearity = Nuclearity::Root; break;
      default: fail("nuclearity must be N, S or R");
    }
    ++pos_;
    if (depth == 0 && node.nuclearity != Nuclearity::Root) fail("root node must have nuclearity R");
    if (depth > 0 && node.nuclearity == Nuclearity::Root) {
      pos_ -= 1;
      fail("nuclearity R below the root");
    }
    if (at_end() || !is_ws(peek())) fail("expected whitespace after nuclearity");

    for (;;) {
      skip_ws();
      if (at_end()) fail("unterminated node");
      const char c = peek();
      if (c == ')') break;
      if (c == '(') {
        if (!node.tokens.empty()) fail("node mixes tokens and subtrees");
        node.children.push_back(parse_node(depth + 1));
      } else {
        if (!node.children.empty()) fail("node mixes tokens and subtrees");
        node.tokens.push_back(parse_token());
      }
    }
    if (node.children.empty() && node.tokens.empty()) fail("empty node");
    if (!node.tokens.empty() && node.label != "EDU") {
      pos_ = open;
      fail("leaf node must be labeled EDU, got '" + node.label + "'");
    }
    if (!node.children.empty() && node.label == "EDU") {
      pos_ = open;
      fail("EDU node cannot have subtrees");
    }
    expect(')');
    return node;
  }

  std::string parse_token() {
    std::string token;
    while (!at_end()) {
      const char c = peek();
      if (is_ws(c) || c == '(' || c == ')') break;
      if (c == '\\') {
        ++pos_;
        if (at_end()) fail("dangling escape");
        const char e = peek();
        if (e != '(' && e != ')' && e != ':' && e != '\\' && e != ' ') fail("invalid escape");
        token.push_back(e);
      } else if (c == '\r' || c == '\n') {
        fail("line break inside tree");
      } else {
        token.push_back(c);
      }
      ++pos_;
    }
    return token;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void serialize_node(const DtNode& node, std::string& out) {
  out.push_back('(');
  out += node.label;
  out.push_back(':');
  out.push_back(nuclearity_code(node.nuclearity));
  for (const auto& tok : node.tokens) {
    out.push_back(' ');
    out += escape_token(tok);
  }
  for (const auto& child : node.children) {
    out.push_back(' ');
    serialize_node(child, out);
  }
  out.push_back(')');
}

template <typename F>
void visit(const DtNode& node, F&& f) {
  f(node);
  for (const auto& c : node.children) visit(c, f);
}

}  // namespace

char nuclearity_code(Nuclearity n) {
  switch (n) {
    case Nuclearity::Nucleus: return 'N';
    case Nuclearity::Satellite: return 'S';
    case Nuclearity::Root: return 'R';
  }
  return '?';
}

std::size_t DiscourseTree::edu_count() const {
  std::size_t n = 0;
  visit(root, [&](const DtNode& x) { n += x.is_edu(); });
  return n;
}

std::size_t DiscourseTree::internal_count() const {
  std::size_t n = 0;
  visit(root, [&](const DtNode& x) { n += !x.is_edu(); });
  return n;
}

std::size_t DiscourseTree::word_count() const {
  std::size_t n = 0;
  visit(root, [&](const DtNode& x) { n += x.tokens.size(); });
  return n;
}

bool is_known_relation(std::string_view label) {
  return std::find(kKnownRelations.begin(), kKnownRelations.end(), label) != kKnownRelations.end();
}

std::vector<std::string> unknown_relations(const DiscourseTree& tree) {
  std::vector<std::string> out;
  visit(tree.root, [&](const DtNode& x) {
    if (x.is_edu() || is_known_relation(x.label)) return;
    if (std::find(out.begin(), out.end(), x.label) == out.end()) out.push_back(x.label);
  });
  return out;
}

DiscourseTree parse_dtree(std::string_view text) { return Parser(text).parse(); }

std::string serialize_dtree(const DiscourseTree& tree) {
  std::string out;
  serialize_node(tree.root, out);
  return out;
}

std::string escape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (const char c : token) {
    if (c == '(' || c == ')' || c == ':' || c == '\\' || c == ' ') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

TreeFile read_tree_file(std::istream& in) {
  TreeFile file;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), is_ws)) {
      file.trees.emplace_back(std::nullopt);
      continue;
    }
    try {
      auto tree = parse_dtree(line);
      for (const auto& label : unknown_relations(tree))
        file.warnings.push_back("line " + std::to_string(lineno) + ": unknown relation '" + label + "'");
      file.trees.emplace_back(std::move(tree));
    } catch (const ParseError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return file;
}

TreeFile read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tree file '" + path + "'");
  return read_tree_file(in);
}

}  // namespace discotk
