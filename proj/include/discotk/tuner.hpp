#pragma once

// Pairwise learning-to-rank over metric scores: every human preference
// becomes a feature-difference instance for a bias-free L2-regularised
// logistic regression, whose weights define a linear metric combination.
//
// Weight file TSV: metric-id \t weight, one row per schema entry in order.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "discotk/eval.hpp"
#include "discotk/judge.hpp"
#include "discotk/scores.hpp"

namespace discotk {

/// Metric ids, in feature order.
using FeatureSchema = std::vector<std::string>;

struct WeightVector {
  FeatureSchema schema;
  std::vector<double> weights;

  /// Throws DataError when `features` does not match the schema length.
  double dot(std::span<const double> features) const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

/// Feature vector of one (langpair, system, segment); a missing metric score
/// throws DataError naming metric, system and segment.
std::vector<double> feature_vector(const ScoreMatrix& m, const FeatureSchema& schema, const std::string& langpair,
                                   const std::string& system, int segment);

/// Row-major difference vectors with binary labels.
struct TrainingSet {
  std::size_t dim = 0;
  std::vector<double> x;
  std::vector<int> y;

  std::size_t size() const { return y.size(); }
  std::span<const double> row(std::size_t i) const { return {x.data() + i * dim, dim}; }
  void add(std::span<const double> diff, int label);
};

/// Each judgment (winner w, loser l, segment s) emits (f(w,s) - f(l,s), 1)
/// and (f(l,s) - f(w,s), 0).
TrainingSet build_instances(std::span<const PairwiseJudgment> judgments, const ScoreMatrix& m,
                            const FeatureSchema& schema);

struct TrainConfig {
  double l2 = 1e-3;
  int max_epochs = 5000;
  double tolerance = 1e-9;  // on objective improvement per accepted step
  std::uint64_t seed = 0;   // drives fold shuffling; the optimiser itself is deterministic

  void validate() const;
};

struct TrainResult {
  WeightVector weights;
  std::vector<double> objective;  // after each accepted step, starting with the initial value
  int epochs = 0;
  bool converged = false;
};

/// Minimises mean logistic loss + l2/2 |w|^2 by full-batch gradient descent
/// (Barzilai-Borwein trial step, Armijo backtracking) from w = 0.
TrainResult train(const TrainingSet& data, const FeatureSchema& schema, const TrainConfig& cfg = {});

double sigmoid(double z);

/// sigma(w . f).
double predict_segment(const WeightVector& w, std::span<const double> features);

/// Mean of the raw w . f over a system's segments; no sigmoid.
double predict_system(const WeightVector& w, std::span<const std::vector<double>> segment_features);

WeightVector read_weights(std::istream& in, const std::string& source = "<stream>");
WeightVector read_weights(const std::string& path);
void write_weights(std::ostream& out, const WeightVector& w);

using Trainer = std::function<WeightVector(const TrainingSet&)>;

struct CrossValResult {
  std::vector<double> fold_tau;
  double pooled_tau = 0.0;
  std::vector<WeightVector> fold_weights;
  /// Held-out fold that produced the prediction of each (langpair, segment).
  std::map<std::pair<std::string, int>, std::size_t> predicted_by;
};

/// For each fold: train on every record whose document is in another fold
/// (all language pairs pooled) and score the held-out records with raw
/// w . f. Tau is monotone-invariant, so the sigmoid is skipped here. Throws
/// DataError for a fold without evaluable pairs.
CrossValResult crossval_tau(const ScoreMatrix& m, std::span<const RankingRecord> records,
                            const FoldAssignment& folds, const FeatureSchema& schema, const Trainer& trainer,
                            const TauConfig& tau_cfg = {});

CrossValResult crossval_tau(const ScoreMatrix& m, std::span<const RankingRecord> records,
                            const FoldAssignment& folds, const FeatureSchema& schema, const TrainConfig& cfg,
                            const TauConfig& tau_cfg = {});

}  // namespace discotk
