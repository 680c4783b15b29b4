#include <random>

#include <gtest/gtest.h>

#include "discotk/dtree.hpp"
#include "discotk/error.hpp"
#include "discotk/repr.hpp"
#include "support/oracles.hpp"

using namespace discotk;

namespace {

const DiscourseTree& fig1() {
  static const DiscourseTree t = parse_dtree("(Elaboration:R (EDU:N the cat) (EDU:S sat))");
  return t;
}

std::size_t count_words(const DtNode& n) {
  std::size_t w = n.tokens.size();
  for (const auto& c : n.children) w += count_words(c);
  return w;
}

// Node counts derived by hand from each construction: I internal nodes,
// E EDUs, W words.
std::size_t expected_size(ReprKind k, std::size_t I, std::size_t E, std::size_t W) {
  switch (k) {
    case ReprKind::Nolex: return I + E;
    case ReprKind::Lex1: return I + E + 2 * W;
    case ReprKind::Lex1_1: return I + E + 2 * W + 3 * E + 3 * 2 * W;
    case ReprKind::Lex2: return 3 * I + 3 * E + 2 * W;
    case ReprKind::Lex2_1: return 3 * I + 3 * E + 2 * W + 3 * E + 3 * 2 * W;
  }
  return 0;
}

}  // namespace

TEST(Repr, NamesRoundTrip) {
  for (const auto k : kAllReprKinds) EXPECT_EQ(parse_repr_kind(repr_name(k)), k);
  EXPECT_FALSE(parse_repr_kind("lex3").has_value());
  EXPECT_EQ(repr_name(ReprKind::Lex2_1), "lex2.1");
}

TEST(Repr, NolexOfTwoEduTree) {
  EXPECT_EQ(serialize_repr(to_repr(fig1(), ReprKind::Nolex)), "(Elaboration_ROOT (EDU_Nuc) (EDU_Sat))");
}

TEST(Repr, Lex1AddsWordPreterminals) {
  EXPECT_EQ(serialize_repr(to_repr(fig1(), ReprKind::Lex1)),
            "(Elaboration_ROOT (EDU_Nuc (the (*)) (cat (*))) (EDU_Sat (sat (*))))");
}

TEST(Repr, Lex1_1AppendsPropagatedGroups) {
  EXPECT_EQ(serialize_repr(to_repr(fig1(), ReprKind::Lex1_1)),
            "(Elaboration_ROOT"
            " (EDU_Nuc (the (*)) (cat (*))"
            " (W-NUC:Nuc (the (*)) (cat (*)))"
            " (W-REL:Elaboration (the (*)) (cat (*)))"
            " (W-RELNUC:Elaboration_Nuc (the (*)) (cat (*))))"
            " (EDU_Sat (sat (*))"
            " (W-NUC:Sat (sat (*)))"
            " (W-REL:Elaboration (sat (*)))"
            " (W-RELNUC:Elaboration_Sat (sat (*)))))");
}

TEST(Repr, Lex2UsesPropertyNodes) {
  EXPECT_EQ(serialize_repr(to_repr(fig1(), ReprKind::Lex2)),
            "(SPAN (NUC:ROOT) (REL:Elaboration)"
            " (EDU (NUC:Nuc) (NGRAM (the (*)) (cat (*))))"
            " (EDU (NUC:Sat) (NGRAM (sat (*)))))");
}

TEST(Repr, RootEduHasRootParentRelation) {
  const auto t = to_repr(parse_dtree("(EDU:R hi)"), ReprKind::Lex2_1);
  EXPECT_EQ(serialize_repr(t),
            "(EDU (NUC:ROOT) (NGRAM (hi (*))) (W-NUC:ROOT (hi (*))) (W-REL:ROOT (hi (*))) (W-RELNUC:ROOT_ROOT (hi (*))))");
}

TEST(Repr, WordsLookingLikeGroupsSurviveStripping) {
  const auto t = to_repr(parse_dtree("(EDU:R W-REL:x plain)"), ReprKind::Lex1_1);
  EXPECT_EQ(without_propagated(t), to_repr(parse_dtree("(EDU:R W-REL:x plain)"), ReprKind::Lex1));
}

TEST(Repr, TextRoundTripWithEscapes) {
  const auto t = to_repr(parse_dtree(R"((Elaboration:R (EDU:N a\(b c\)d) (EDU:S e\\f g\ h)))"), ReprKind::Lex2_1);
  const auto text = serialize_repr(t);
  EXPECT_EQ(parse_repr(text), t);
}

TEST(Repr, ParseRejectsMalformed) {
  for (const char* bad : {"", "x", "()", "(a", "(a (b)", "(a) (b)", "(a\\"}) EXPECT_THROW(parse_repr(bad), ParseError) << bad;
}

TEST(ReprProperty, NodeCountsMatchConstruction) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto t = oracle::random_dtree(rng);
    const auto E = t.edu_count(), I = t.internal_count(), W = count_words(t.root);
    ASSERT_EQ(W, t.word_count());
    for (const auto k : kAllReprKinds)
      EXPECT_EQ(to_repr(t, k).size(), expected_size(k, I, E, W)) << repr_name(k) << " " << serialize_dtree(t);
  }
}

TEST(ReprProperty, StrippingGroupsRecoversBaseRepresentation) {
  std::mt19937_64 rng(5);
  oracle::DtreeGenOptions opts;
  opts.vocab = {"W-NUC:x", "W-", "a", "b"};
  for (int i = 0; i < 100; ++i) {
    const auto t = oracle::random_dtree(rng, opts);
    EXPECT_EQ(without_propagated(to_repr(t, ReprKind::Lex1_1)), to_repr(t, ReprKind::Lex1));
    EXPECT_EQ(without_propagated(to_repr(t, ReprKind::Lex2_1)), to_repr(t, ReprKind::Lex2));
  }
}

TEST(ReprProperty, SerializationRoundTrips) {
  std::mt19937_64 rng(9);
  oracle::DtreeGenOptions opts;
  opts.vocab = {"(", ")", "\\", "a b", "c:d", "*"};
  for (int i = 0; i < 100; ++i) {
    const auto t = oracle::random_dtree(rng, opts);
    for (const auto k : kAllReprKinds) {
      const auto r = to_repr(t, k);
      EXPECT_EQ(parse_repr(serialize_repr(r)), r);
    }
  }
}
