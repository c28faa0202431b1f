// Copyright 2026 The qgssl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qgssl/metrics.hpp"

namespace qgssl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts count_classes(const std::vector<double>& scores, const std::vector<bool>& positives) {
  if (scores.size() != positives.size()) {
    throw std::invalid_argument("scores and positive mask differ in length");
  }
  ClassCounts c;
  for (bool p : positives) (p ? c.positives : c.negatives)++;
  return c;
}

void require_both_classes(const ClassCounts& c, const char* op) {
  if (c.positives == 0 || c.negatives == 0) {
    throw std::invalid_argument(std::string(op) + ": need at least one positive and one negative");
  }
}

// Indices sorted by descending score.
std::vector<std::size_t> descending_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

ClassificationMetrics classification_metrics(const std::vector<int>& truth,
                                             const std::vector<int>& predicted, int class_count) {
  if (truth.size() != predicted.size() || truth.empty()) {
    throw std::invalid_argument("classification_metrics: need equal nonempty label vectors");
  }
  if (class_count < 1) throw std::invalid_argument("classification_metrics: class_count < 1");
  const auto k = static_cast<std::size_t>(class_count);
  std::vector<double> tp(k, 0.0), fp(k, 0.0), fn(k, 0.0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predicted[i];
    if (t < 0 || t >= class_count || p < 0 || p >= class_count) {
      throw std::invalid_argument("classification_metrics: class id out of range at index " +
                                  std::to_string(i));
    }
    if (t == p) {
      ++correct;
      tp[static_cast<std::size_t>(t)] += 1.0;
    } else {
      fp[static_cast<std::size_t>(p)] += 1.0;
      fn[static_cast<std::size_t>(t)] += 1.0;
    }
  }
  ClassificationMetrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  for (std::size_t c = 0; c < k; ++c) {
    const double precision = tp[c] + fp[c] > 0.0 ? tp[c] / (tp[c] + fp[c]) : 0.0;
    const double recall = tp[c] + fn[c] > 0.0 ? tp[c] / (tp[c] + fn[c]) : 0.0;
    const double f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    m.precision_macro += precision;
    m.recall_macro += recall;
    m.f1_macro += f1;
  }
  m.precision_macro /= static_cast<double>(k);
  m.recall_macro /= static_cast<double>(k);
  m.f1_macro /= static_cast<double>(k);
  return m;
}

double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positives) {
  const ClassCounts c = count_classes(scores, positives);
  require_both_classes(c, "binary_auc");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of doubled midranks keeps every term an integer.
  double doubled_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double doubled_midrank = static_cast<double>(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t) {
      if (positives[order[t]]) doubled_rank_sum += doubled_midrank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(c.positives);
  const double nn = static_cast<double>(c.negatives);
  const double doubled_u = doubled_rank_sum - np * (np + 1.0);
  return doubled_u / (2.0 * np * nn);
}

AucResult roc_auc_ovr(const Eigen::MatrixXd& scores, const std::vector<int>& truth) {
  if (static_cast<std::size_t>(scores.rows()) != truth.size()) {
    throw std::invalid_argument("roc_auc_ovr: score rows and labels differ in length");
  }
  AucResult r;
  double sum = 0.0;
  int defined = 0;
  for (Eigen::Index c = 0; c < scores.cols(); ++c) {
    std::vector<double> col(scores.col(c).data(), scores.col(c).data() + scores.rows());
    std::vector<bool> pos(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) pos[i] = truth[i] == static_cast<int>(c);
    const ClassCounts cc = count_classes(col, pos);
    if (cc.positives == 0 || cc.negatives == 0) {
      std::cerr << "warning: class " << c << " has no "
                << (cc.positives == 0 ? "positive" : "negative")
                << " examples; AUC excluded from the mean\n";
      r.per_class.push_back(kNaN);
      r.excluded.push_back(static_cast<int>(c));
      continue;
    }
    r.per_class.push_back(binary_auc(col, pos));
    sum += r.per_class.back();
    ++defined;
  }
  r.overall = defined > 0 ? sum / defined : kNaN;
  return r;
}

double ks_statistic(const std::vector<double>& scores, const std::vector<bool>& positives) {
  const ClassCounts c = count_classes(scores, positives);
  require_both_classes(c, "ks_statistic");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  const double np = static_cast<double>(c.positives);
  const double nn = static_cast<double>(c.negatives);
  std::size_t pos_le = 0;
  std::size_t neg_le = 0;
  double best = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = scores[order[i]];
    while (i < order.size() && scores[order[i]] == t) {
      (positives[order[i]] ? pos_le : neg_le)++;
      ++i;
    }
    best = std::max(best, std::abs(static_cast<double>(pos_le) / np -
                                   static_cast<double>(neg_le) / nn));
  }
  return best;
}

std::vector<RocPoint> roc_curve_points(const std::vector<double>& scores,
                                       const std::vector<bool>& positives) {
  const ClassCounts c = count_classes(scores, positives);
  require_both_classes(c, "roc_curve_points");
  const auto order = descending_order(scores);
  const double np = static_cast<double>(c.positives);
  const double nn = static_cast<double>(c.negatives);
  std::vector<RocPoint> pts{{0.0, 0.0}};
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = scores[order[i]];
    while (i < order.size() && scores[order[i]] == t) {
      (positives[order[i]] ? tp : fp)++;
      ++i;
    }
    pts.push_back({static_cast<double>(fp) / nn, static_cast<double>(tp) / np});
  }
  if (pts.back().fpr != 1.0 || pts.back().tpr != 1.0) pts.push_back({1.0, 1.0});
  return pts;
}

double trapezoid_area(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

std::string to_string(ScoreNormalization n) {
  return n == ScoreNormalization::kRowSum ? "row_sum" : "softmax";
}

NormalizedScores normalize_scores(const Eigen::MatrixXd& scores) {
  NormalizedScores out;
  out.probabilities.resize(scores.rows(), scores.cols());
  if (scores.size() == 0 || scores.minCoeff() >= 0.0) {
    out.method = ScoreNormalization::kRowSum;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      const double s = scores.row(i).sum();
      if (s > 0.0) {
        out.probabilities.row(i) = scores.row(i) / s;
      } else {
        out.probabilities.row(i).setConstant(1.0 / static_cast<double>(scores.cols()));
      }
    }
  } else {
    out.method = ScoreNormalization::kSoftmax;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      const Eigen::RowVectorXd e = (scores.row(i).array() - scores.row(i).maxCoeff()).exp();
      out.probabilities.row(i) = e / e.sum();
    }
  }
  return out;
}

MetricsReport evaluate(const Eigen::MatrixXd& scores, const std::vector<int>& truth,
                       const std::vector<int>& predicted, int class_count) {
  if (scores.cols() != class_count) {
    throw std::invalid_argument("evaluate: score matrix has wrong class count");
  }
  MetricsReport r;
  const ClassificationMetrics cm = classification_metrics(truth, predicted, class_count);
  r.accuracy = cm.accuracy;
  r.precision_macro = cm.precision_macro;
  r.recall_macro = cm.recall_macro;
  r.f1_macro = cm.f1_macro;

  const NormalizedScores norm = normalize_scores(scores);
  r.normalization = norm.method;
  const AucResult auc = roc_auc_ovr(norm.probabilities, truth);
  r.auc_per_class = auc.per_class;
  r.auc_overall = auc.overall;
  for (int c = 0; c < class_count; ++c) {
    if (std::isnan(auc.per_class[static_cast<std::size_t>(c)])) {
      r.ks_per_class.push_back(kNaN);
      r.roc_curves.emplace_back();
      continue;
    }
    const Eigen::VectorXd col = norm.probabilities.col(c);
    std::vector<double> s(col.data(), col.data() + col.size());
    std::vector<bool> pos(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) pos[i] = truth[i] == c;
    r.ks_per_class.push_back(ks_statistic(s, pos));
    r.roc_curves.push_back(roc_curve_points(s, pos));
  }
  return r;
}

}  // namespace qgssl
