#include "discotk/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "discotk/error.hpp"
#include "discotk/tsv.hpp"

namespace discotk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

class Objective {
 public:
  Objective(const TrainingSet& data, double l2) : data_(data), l2_(l2) {}

  double operator()(std::span<const double> w, std::vector<double>& grad) const {
    const std::size_t d = data_.dim;
    const double inv_n = 1.0 / static_cast<double>(data_.size());
    grad.assign(d, 0.0);
    double loss = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      const auto x = data_.row(i);
      const double sign = data_.y[i] ? 1.0 : -1.0;
      const double margin = sign * dot(x, w);
      loss += softplus(-margin);
      const double coef = -sign * sigmoid(-margin) * inv_n;
      for (std::size_t k = 0; k < d; ++k) grad[k] += coef * x[k];
    }
    double norm2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      grad[k] += l2_ * w[k];
      norm2 += w[k] * w[k];
    }
    return loss * inv_n + 0.5 * l2_ * norm2;
  }

 private:
  const TrainingSet& data_;
  double l2_;
};

[[noreturn]] void report_non_finite(const TrainingSet& data, const FeatureSchema& schema) {
  std::size_t worst = 0;
  double scale = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    for (std::size_t k = 0; k < data.dim; ++k) {
      if (!std::isfinite(x[k]) || std::abs(x[k]) > scale) {
        scale = std::isfinite(x[k]) ? std::abs(x[k]) : HUGE_VAL;
        worst = k;
      }
    }
  }
  throw DataError("training objective is not finite; largest feature difference is " + format_score(scale) +
                  " on feature '" + (worst < schema.size() ? schema[worst] : std::to_string(worst)) +
                  "'; rescale or normalize the metric scores");
}

}  // namespace

double WeightVector::dot(std::span<const double> features) const {
  if (features.size() != weights.size())
    throw DataError("feature vector has " + std::to_string(features.size()) + " entries, weight schema has " +
                    std::to_string(weights.size()));
  return discotk::dot(weights, features);
}

std::vector<double> feature_vector(const ScoreMatrix& m, const FeatureSchema& schema, const std::string& langpair,
                                   const std::string& system, int segment) {
  std::vector<double> f;
  f.reserve(schema.size());
  for (const auto& metric : schema) f.push_back(m.at(metric, langpair, system, segment));
  return f;
}

void TrainingSet::add(std::span<const double> diff, int label) {
  if (diff.size() != dim) throw std::invalid_argument("instance dimension mismatch");
  x.insert(x.end(), diff.begin(), diff.end());
  y.push_back(label);
}

TrainingSet build_instances(std::span<const PairwiseJudgment> judgments, const ScoreMatrix& m,
                            const FeatureSchema& schema) {
  TrainingSet set;
  set.dim = schema.size();
  set.x.reserve(judgments.size() * 2 * set.dim);
  std::vector<double> diff(set.dim);
  for (const auto& j : judgments) {
    const auto fw = feature_vector(m, schema, j.langpair, j.winner, j.segment);
    const auto fl = feature_vector(m, schema, j.langpair, j.loser, j.segment);
    for (std::size_t k = 0; k < set.dim; ++k) diff[k] = fw[k] - fl[k];
    set.add(diff, 1);
    for (auto& v : diff) v = -v;
    set.add(diff, 0);
  }
  return set;
}

void TrainConfig::validate() const {
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw std::invalid_argument("L2 strength must be a non-negative number");
  if (max_epochs < 1) throw std::invalid_argument("epoch cap must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

TrainResult train(const TrainingSet& data, const FeatureSchema& schema, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw DataError("no training instances");
  if (data.dim != schema.size()) throw DataError("training data dimension does not match feature schema");

  const Objective objective(data, cfg.l2);
  const std::size_t d = data.dim;

  TrainResult result;
  result.weights.schema = schema;
  std::vector<double> w(d, 0.0), grad, trial(d), trial_grad;
  double value = objective(w, grad);
  if (!std::isfinite(value)) report_non_finite(data, schema);
  result.objective.push_back(value);

  double step0 = 1.0;
  while (result.epochs < cfg.max_epochs) {
    const double gnorm2 = dot(grad, grad);
    if (!std::isfinite(gnorm2)) report_non_finite(data, schema);
    if (gnorm2 == 0.0) {
      result.converged = true;
      break;
    }

    double step = step0;
    double trial_value = value;
    bool accepted = false, any_finite = false;
    for (int halvings = 0; halvings < 60; ++halvings, step *= 0.5) {
      for (std::size_t k = 0; k < d; ++k) trial[k] = w[k] - step * grad[k];
      trial_value = objective(trial, trial_grad);
      if (!std::isfinite(trial_value)) continue;
      any_finite = true;
      if (trial_value <= value - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_finite) report_non_finite(data, schema);
      result.converged = true;
      break;
    }
    ++result.epochs;

    double ss = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double s = trial[k] - w[k];
      const double yk = trial_grad[k] - grad[k];
      ss += s * s;
      sy += s * yk;
    }
    step0 = sy > 0.0 ? ss / sy : 2.0 * step;

    const double improvement = value - trial_value;
    w.swap(trial);
    grad.swap(trial_grad);
    value = trial_value;
    result.objective.push_back(value);
    if (improvement < cfg.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.weights.weights = std::move(w);
  return result;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double predict_segment(const WeightVector& w, std::span<const double> features) { return sigmoid(w.dot(features)); }

double predict_system(const WeightVector& w, std::span<const std::vector<double>> segment_features) {
  if (segment_features.empty()) throw DataError("system has no segments to score");
  double sum = 0.0;
  for (const auto& f : segment_features) sum += w.dot(f);
  return sum / static_cast<double>(segment_features.size());
}

WeightVector read_weights(std::istream& in, const std::string& source) {
  WeightVector w;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!tsv::clean_line(line)) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto f = tsv::split(line);
    if (f.size() != 2 || f[0].empty()) throw DataError(where + ": expected 'metric<TAB>weight'");
    for (const auto& id : w.schema)
      if (id == f[0]) throw DataError(where + ": metric '" + id + "' listed twice");
    w.schema.emplace_back(f[0]);
    w.weights.push_back(tsv::parse_real(f[1], where));
  }
  if (w.schema.empty()) throw DataError(source + ": empty weight file");
  return w;
}

WeightVector read_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open weight file '" + path + "'");
  return read_weights(in, path);
}

void write_weights(std::ostream& out, const WeightVector& w) {
  char buf[64];
  for (std::size_t k = 0; k < w.schema.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", w.weights[k]);
    out << w.schema[k] << '\t' << buf << '\n';
  }
}

CrossValResult crossval_tau(const ScoreMatrix& m, std::span<const RankingRecord> records,
                            const FoldAssignment& folds, const FeatureSchema& schema, const Trainer& trainer,
                            const TauConfig& tau_cfg) {
  CrossValResult out;
  std::vector<ScoredPair> pooled;

  for (std::size_t fold = 0; fold < folds.k; ++fold) {
    std::vector<RankingRecord> train_records, test_records;
    for (const auto& r : records) (folds.fold(r.document) == fold ? test_records : train_records).push_back(r);

    const auto train_pairs = expand_pairs(train_records);
    const auto w = trainer(build_instances(train_pairs, m, schema));

    std::map<std::tuple<std::string, std::string, int>, double> predicted;
    for (const auto& r : test_records) {
      out.predicted_by.emplace(std::make_pair(r.langpair, r.segment), fold);
      for (const auto& item : r.items) {
        const auto key = std::make_tuple(r.langpair, item.system, r.segment);
        if (!predicted.count(key)) predicted[key] = w.dot(feature_vector(m, schema, r.langpair, item.system, r.segment));
      }
    }

    std::vector<ScoredPair> scored;
    for (const auto& j : expand_pairs(test_records))
      scored.push_back({predicted.at({j.langpair, j.winner, j.segment}), predicted.at({j.langpair, j.loser, j.segment})});
    const auto tau = kendall_tau(scored, tau_cfg);
    if (!tau) throw DataError("fold " + std::to_string(fold) + " has no evaluable pairs");
    out.fold_tau.push_back(*tau);
    out.fold_weights.push_back(w);
    pooled.insert(pooled.end(), scored.begin(), scored.end());
  }

  const auto tau = kendall_tau(pooled, tau_cfg);
  if (!tau) throw DataError("no evaluable pairs across folds");
  out.pooled_tau = *tau;
  return out;
}

CrossValResult crossval_tau(const ScoreMatrix& m, std::span<const RankingRecord> records,
                            const FoldAssignment& folds, const FeatureSchema& schema, const TrainConfig& cfg,
                            const TauConfig& tau_cfg) {
  return crossval_tau(
      m, records, folds, schema, [&](const TrainingSet& data) { return train(data, schema, cfg).weights; }, tau_cfg);
}

}  // namespace discotk
