#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "discotk/error.hpp"
#include "discotk/tuner.hpp"
#include "support/synthetic.hpp"

using namespace discotk;

namespace {

TrainingSet from_rows(std::size_t dim, const std::vector<std::vector<double>>& diffs) {
  TrainingSet t;
  t.dim = dim;
  for (const auto& d : diffs) {
    t.add(d, 1);
    std::vector<double> neg(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) neg[i] = -d[i];
    t.add(neg, 0);
  }
  return t;
}

}  // namespace

TEST(Tuner, OneJudgmentGivesTwoOppositeInstances) {
  ScoreMatrix m;
  m.set_group("a", "de-en", ScoreGroup{"t", {{"x", {0.9}}, {"y", {0.2}}}});
  m.set_group("b", "de-en", ScoreGroup{"t", {{"x", {0.1}}, {"y", {0.4}}}});
  const std::vector<PairwiseJudgment> j = {{"de-en", 1, "x", "y"}};
  const auto t = build_instances(j, m, {"a", "b"});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.y, (std::vector<int>{1, 0}));
  EXPECT_DOUBLE_EQ(t.row(0)[0], 0.7);
  EXPECT_DOUBLE_EQ(t.row(1)[0], -0.7);
  EXPECT_DOUBLE_EQ(t.row(0)[1], -0.3);
  EXPECT_DOUBLE_EQ(t.row(1)[1], 0.3);
}

TEST(Tuner, EqualFeaturesGiveZeroInstancesAndZeroWeights) {
  ScoreMatrix m;
  m.set_group("a", "de-en", ScoreGroup{"t", {{"x", {0.5}}, {"y", {0.5}}}});
  const std::vector<PairwiseJudgment> j = {{"de-en", 1, "x", "y"}};
  const auto t = build_instances(j, m, {"a"});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.row(0)[0], 0.0);
  const auto r = train(t, {"a"});
  EXPECT_EQ(r.weights.weights, std::vector<double>{0.0});
  EXPECT_TRUE(r.converged);
}

TEST(Tuner, MissingFeatureNamesKey) {
  ScoreMatrix m;
  m.set_group("a", "de-en", ScoreGroup{"t", {{"x", {0.5}}}});
  const std::vector<PairwiseJudgment> j = {{"de-en", 1, "x", "ghost"}};
  try {
    build_instances(j, m, {"a"});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
  }
}

TEST(Tuner, SeparableOneDimensionalDataGivesPositiveWeight) {
  const auto t = from_rows(1, {{0.3}, {1.2}, {0.01}});
  const auto r = train(t, {"a"});
  EXPECT_GT(r.weights.weights[0], 0.0);
}

TEST(Tuner, ObjectiveNeverIncreases) {
  const auto d = oracle::make_synthetic({.dim = 5, .segments_per_langpair = 60, .noise = 0.2, .seed = 3});
  const auto t = build_instances(expand_pairs(d.records), d.scores, d.schema);
  const auto r = train(t, d.schema);
  ASSERT_GE(r.objective.size(), 2u);
  for (std::size_t i = 1; i < r.objective.size(); ++i) EXPECT_LE(r.objective[i], r.objective[i - 1]);
  EXPECT_TRUE(r.converged);
}

TEST(Tuner, ConfigValidation) {
  EXPECT_THROW((TrainConfig{.l2 = -1}.validate()), std::invalid_argument);
  EXPECT_THROW((TrainConfig{.max_epochs = 0}.validate()), std::invalid_argument);
  EXPECT_THROW((TrainConfig{.tolerance = 0}.validate()), std::invalid_argument);
  EXPECT_THROW(train(TrainingSet{.dim = 1, .x = {}, .y = {}}, {"a"}), DataError);
}

TEST(Tuner, HugeFeaturesAreReported) {
  const auto t = from_rows(1, {{1e308}, {2.0}});
  EXPECT_THROW(train(t, {"a"}), DataError);
}

TEST(Tuner, RecoversPlantedDirection) {
  const auto d = oracle::make_synthetic({.dim = 6, .segments_per_langpair = 100, .seed = 5});
  const auto t = build_instances(expand_pairs(d.records), d.scores, d.schema);
  const auto r = train(t, d.schema);
  EXPECT_GE(oracle::cosine(r.weights.weights, d.w_star), 0.99);
}

TEST(Tuner, ZeroL2IsScaleCovariant) {
  // Scaling every feature by c scales the unregularised optimum by 1/c.
  auto d = oracle::make_synthetic({.dim = 3, .segments_per_langpair = 40, .noise = 0.5, .seed = 7});
  const auto t = build_instances(expand_pairs(d.records), d.scores, d.schema);
  auto scaled = t;
  for (auto& x : scaled.x) x *= 4.0;
  const TrainConfig cfg{.l2 = 0.0, .max_epochs = 20000, .tolerance = 1e-14};
  const auto a = train(t, d.schema, cfg).weights.weights;
  const auto b = train(scaled, d.schema, cfg).weights.weights;
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(b[k] * 4.0, a[k], 1e-5 * (1 + std::abs(a[k])));
}

TEST(Tuner, PredictionExamples) {
  const WeightVector zero{{"a", "b"}, {0, 0}};
  const WeightVector w{{"a", "b"}, {1, -2}};
  EXPECT_EQ(predict_segment(zero, std::vector<double>{3, 4}), 0.5);
  EXPECT_EQ(predict_segment(w, std::vector<double>{2, 1}), 0.5);
  EXPECT_GT(predict_segment(w, std::vector<double>{2.1, 1}), 0.5);
  const std::vector<std::vector<double>> segs = {{-1, 0}, {0, 0}, {1, 0}};
  EXPECT_EQ(predict_system(w, segs), 0.0);
  EXPECT_EQ(predict_system(zero, segs), 0.0);
  EXPECT_EQ(predict_system(w, std::vector<std::vector<double>>{{3, 1}}), 1.0);
  EXPECT_THROW(w.dot(std::vector<double>{1}), DataError);
}

TEST(Tuner, SigmoidIsStable) {
  EXPECT_EQ(sigmoid(0), 0.5);
  EXPECT_EQ(sigmoid(-1000), 0.0);
  EXPECT_EQ(sigmoid(1000), 1.0);
  EXPECT_NEAR(sigmoid(-30), std::exp(-30.0), 1e-25);
}

TEST(TunerProperty, SymmetricInstancesAreAntisymmetric) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0, 3);
  for (int i = 0; i < 500; ++i) {
    const WeightVector w{{"a", "b", "c"}, {g(rng), g(rng), g(rng)}};
    const std::vector<double> f = {g(rng), g(rng), g(rng)};
    const std::vector<double> nf = {-f[0], -f[1], -f[2]};
    EXPECT_NEAR(predict_segment(w, f) + predict_segment(w, nf), 1.0, 1e-12);
  }
}

TEST(Tuner, WeightFileRoundTripIsExact) {
  const WeightVector w{{"DR.nolex", "BLEU"}, {1.0 / 3, -2.5e-17}};
  std::ostringstream out;
  write_weights(out, w);
  std::istringstream in(out.str());
  EXPECT_EQ(read_weights(in), w);
  std::istringstream dup("a\t1\na\t2\n");
  EXPECT_THROW(read_weights(dup), DataError);
  std::istringstream empty("");
  EXPECT_THROW(read_weights(empty), DataError);
}

TEST(CrossVal, FixedSingleFeatureMatchesEvalTau) {
  const auto d = oracle::make_synthetic({.dim = 2, .segments_per_langpair = 50, .noise = 0.3, .seed = 9});
  const auto folds = make_folds(d.records, 5, 0);
  const Trainer fixed = [&](const TrainingSet&) { return WeightVector{d.schema, {1.0, 0.0}}; };
  const auto cv = crossval_tau(d.scores, d.records, folds, d.schema, fixed);
  const auto direct = kendall_tau(expand_pairs(d.records), d.scores, "f0");
  ASSERT_TRUE(direct.has_value());
  EXPECT_NEAR(cv.pooled_tau, *direct, 1e-12);
}

TEST(CrossVal, EverySegmentPredictedOnce) {
  auto opts = oracle::SyntheticOptions{.dim = 2, .langpairs = {"xx-en"}, .segments_per_langpair = 3003, .seed = 11};
  const auto d = oracle::make_synthetic(opts);
  const auto folds = make_folds(d.records, 10, 0);
  const Trainer fixed = [&](const TrainingSet&) { return WeightVector{d.schema, {1.0, 1.0}}; };
  const auto cv = crossval_tau(d.scores, d.records, folds, d.schema, fixed);
  EXPECT_EQ(cv.predicted_by.size(), 3003u);
  EXPECT_EQ(cv.fold_tau.size(), 10u);
  for (const auto& r : d.records) EXPECT_EQ(cv.predicted_by.at({r.langpair, r.segment}), folds.fold(r.document));
}

TEST(CrossVal, NoiseFreeSyntheticDataIsNearlyPerfect) {
  const auto d = oracle::make_synthetic({.dim = 5, .segments_per_langpair = 200, .seed = 13});
  const auto folds = make_folds(d.records, 5, 0);
  const auto cv = crossval_tau(d.scores, d.records, folds, d.schema, TrainConfig{});
  EXPECT_GE(cv.pooled_tau, 0.95);
}
