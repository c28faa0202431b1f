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

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgssl {

struct ClassificationMetrics {
  double accuracy = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
};

/// Per-class precision/recall with 0/0 taken as 0, averaged without weights.
ClassificationMetrics classification_metrics(const std::vector<int>& truth,
                                             const std::vector<int>& predicted, int class_count);

/// Mann-Whitney AUC: P(score_pos > score_neg) + P(tie) / 2.
double binary_auc(const std::vector<double>& scores, const std::vector<bool>& positives);

struct AucResult {
  std::vector<double> per_class;  // NaN where a class has no positives or no negatives
  double overall = 0.0;           // mean over defined classes
  std::vector<int> excluded;      // classes left out of the mean
};

AucResult roc_auc_ovr(const Eigen::MatrixXd& scores, const std::vector<int>& truth);

/// Two-sample KS distance between positive and negative score distributions.
double ks_statistic(const std::vector<double>& scores, const std::vector<bool>& positives);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// One point per distinct score (descending), framed by (0,0) and (1,1).
std::vector<RocPoint> roc_curve_points(const std::vector<double>& scores,
                                       const std::vector<bool>& positives);

double trapezoid_area(const std::vector<RocPoint>& points);

enum class ScoreNormalization { kRowSum, kSoftmax };

std::string to_string(ScoreNormalization n);

struct NormalizedScores {
  Eigen::MatrixXd probabilities;
  ScoreNormalization method = ScoreNormalization::kRowSum;
};

/// Row-sum normalization when every entry is nonnegative (zero rows become
/// uniform), otherwise a row-wise softmax.
NormalizedScores normalize_scores(const Eigen::MatrixXd& scores);

struct MetricsReport {
  double accuracy = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
  std::vector<double> auc_per_class;
  double auc_overall = 0.0;
  std::vector<double> ks_per_class;
  std::vector<std::vector<RocPoint>> roc_curves;
  ScoreNormalization normalization = ScoreNormalization::kRowSum;
};

/// Metrics over the given rows. `scores` holds raw class scores for the
/// evaluated nodes only; they are normalized before ROC/KS.
MetricsReport evaluate(const Eigen::MatrixXd& scores, const std::vector<int>& truth,
                       const std::vector<int>& predicted, int class_count);

}  // namespace qgssl
