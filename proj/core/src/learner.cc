/* Copyright 2026 The terra-active Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "terra/learner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace terra {

std::vector<int> Prediction::labels() const {
  std::vector<int> out(num_pixels());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto p = probs_at(i);
    out[i] = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  }
  return out;
}

SurrogateModel::SurrogateModel(std::vector<double> priors,
                               std::vector<std::vector<double>> means,
                               std::vector<std::vector<double>> variances,
                               std::array<std::size_t, 3> trained_on)
    : priors_(std::move(priors)),
      means_(std::move(means)),
      variances_(std::move(variances)),
      trained_on_(trained_on) {
  const std::size_t K = priors_.size();
  if (K < 2 || means_.size() != K || variances_.size() != K) {
    throw std::invalid_argument("model needs >= 2 classes with matching shapes");
  }
  const std::size_t d = means_.front().size();
  if (d == 0) throw std::invalid_argument("model feature dim must be >= 1");
  log_priors_.resize(K);
  log_norm_.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (means_[k].size() != d || variances_[k].size() != d) {
      throw std::invalid_argument("ragged model parameters");
    }
    log_priors_[k] = priors_[k] > 0.0 ? std::log(priors_[k])
                                      : -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double v : variances_[k]) {
      if (!(v > 0.0)) throw std::invalid_argument("variances must be > 0");
      acc += std::log(2.0 * std::numbers::pi * v);
    }
    log_norm_[k] = -0.5 * acc;
  }
}

void SurrogateModel::posterior(std::span<const double> feature,
                               std::span<double> out) const {
  const int K = num_classes();
  const int d = dim();
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    double ll = log_priors_[k] + log_norm_[k];
    const auto& mu = means_[k];
    const auto& var = variances_[k];
    for (int j = 0; j < d; ++j) {
      const double z = feature[j] - mu[j];
      ll -= 0.5 * z * z / var[j];
    }
    out[k] = ll;
    best = std::max(best, ll);
  }
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    out[k] = std::isinf(out[k]) ? 0.0 : std::exp(out[k] - best);
    total += out[k];
  }
  for (int k = 0; k < K; ++k) out[k] /= total;
}

Prediction SurrogateModel::predict(std::span<const double> features) const {
  const std::size_t d = static_cast<std::size_t>(dim());
  if (features.empty() || features.size() % d != 0) {
    throw std::invalid_argument("feature buffer of size " +
                                std::to_string(features.size()) +
                                " does not match model dim " + std::to_string(d));
  }
  const std::size_t n = features.size() / d;
  const std::size_t K = static_cast<std::size_t>(num_classes());
  Prediction pred;
  pred.num_classes = num_classes();
  pred.probs.resize(n * K);
  pred.uncertainty.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> out(pred.probs.data() + i * K, K);
    posterior(features.subspan(i * d, d), out);
    pred.uncertainty[i] = normalized_entropy(out);
  }
  return pred;
}

Prediction SurrogateModel::predict(const FeatureRaster& patch) const {
  if (patch.dim() != dim()) {
    throw std::invalid_argument("patch feature dim " + std::to_string(patch.dim()) +
                                " != model dim " + std::to_string(dim()));
  }
  return predict(patch.values());
}

double normalized_entropy(std::span<const double> probs) {
  if (probs.size() < 2) return 0.0;
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::clamp(h / std::log(static_cast<double>(probs.size())), 0.0, 1.0);
}

SurrogateModel train(std::span<const LabelledPixel> pixels, int num_classes,
                     const TrainOptions& options) {
  if (pixels.empty()) throw std::invalid_argument("training set is empty");
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (!(options.variance_floor > 0.0)) {
    throw std::invalid_argument("variance_floor must be > 0");
  }
  if (!(options.prior_smoothing >= 0.0)) {
    throw std::invalid_argument("prior_smoothing must be >= 0");
  }
  const std::size_t d = pixels.front().feature.size();
  if (d == 0) throw std::invalid_argument("feature vectors are empty");
  const std::size_t K = static_cast<std::size_t>(num_classes);

  std::vector<double> weight(K, 0.0);
  std::vector<std::vector<double>> sum(K, std::vector<double>(d, 0.0));
  std::vector<double> pooled_sum(d, 0.0);
  double pooled_weight = 0.0;
  std::array<std::size_t, 3> counts{};
  for (const auto& px : pixels) {
    if (px.feature.size() != d) throw std::invalid_argument("ragged feature vectors");
    if (px.label < 0 || px.label >= num_classes) {
      throw std::invalid_argument("label " + std::to_string(px.label) +
                                  " outside [0, " + std::to_string(num_classes) +
                                  ")");
    }
    if (!(px.weight > 0.0)) throw std::invalid_argument("pixel weight must be > 0");
    weight[px.label] += px.weight;
    pooled_weight += px.weight;
    for (std::size_t j = 0; j < d; ++j) {
      sum[px.label][j] += px.weight * px.feature[j];
      pooled_sum[j] += px.weight * px.feature[j];
    }
    ++counts[static_cast<std::size_t>(px.source)];
  }

  std::vector<std::vector<double>> means(K, std::vector<double>(d, 0.0));
  std::vector<double> pooled_mean(d);
  for (std::size_t j = 0; j < d; ++j) pooled_mean[j] = pooled_sum[j] / pooled_weight;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      means[k][j] = weight[k] > 0.0 ? sum[k][j] / weight[k] : pooled_mean[j];
    }
  }

  // Second pass for central moments.
  std::vector<std::vector<double>> sq(K, std::vector<double>(d, 0.0));
  std::vector<double> pooled_sq(d, 0.0);
  for (const auto& px : pixels) {
    for (std::size_t j = 0; j < d; ++j) {
      const double z = px.feature[j] - means[px.label][j];
      sq[px.label][j] += px.weight * z * z;
      const double zp = px.feature[j] - pooled_mean[j];
      pooled_sq[j] += px.weight * zp * zp;
    }
  }
  std::vector<std::vector<double>> variances(K, std::vector<double>(d, 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = weight[k] > 0.0 ? sq[k][j] / weight[k]
                                       : pooled_sq[j] / pooled_weight;
      variances[k][j] = std::max(v, options.variance_floor);
    }
  }

  std::vector<double> priors(K);
  const double denom =
      pooled_weight + options.prior_smoothing * static_cast<double>(K);
  for (std::size_t k = 0; k < K; ++k) {
    priors[k] = (weight[k] + options.prior_smoothing) / denom;
  }
  return SurrogateModel(std::move(priors), std::move(means), std::move(variances),
                        counts);
}

SegmentationScores segmentation_scores(std::span<const int> ground_truth,
                                       std::span<const int> prediction,
                                       int num_classes, ClassPresenceRule rule) {
  if (ground_truth.size() != prediction.size()) {
    throw std::invalid_argument("ground truth and prediction sizes differ");
  }
  const std::size_t K = static_cast<std::size_t>(num_classes);
  std::vector<std::size_t> tp(K, 0), fp(K, 0), fn(K, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    const int g = ground_truth[i];
    const int p = prediction[i];
    if (g < 0 || g >= num_classes || p < 0 || p >= num_classes) {
      throw std::invalid_argument("class id outside [0, K)");
    }
    if (g == p) {
      ++tp[g];
      ++correct;
    } else {
      ++fn[g];
      ++fp[p];
    }
  }
  SegmentationScores scores;
  scores.accuracy = ground_truth.empty()
                        ? 0.0
                        : static_cast<double>(correct) /
                              static_cast<double>(ground_truth.size());
  scores.per_class_iou.assign(K, std::numeric_limits<double>::quiet_NaN());
  double total = 0.0;
  int included = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const bool in_gt = tp[k] + fn[k] > 0;
    const bool in_pred = tp[k] + fp[k] > 0;
    bool include = true;
    switch (rule) {
      case ClassPresenceRule::kGroundTruthOrPrediction:
        include = in_gt || in_pred;
        break;
      case ClassPresenceRule::kGroundTruth:
        include = in_gt;
        break;
      case ClassPresenceRule::kAllClasses:
        break;
    }
    if (!include) continue;
    const std::size_t denom = tp[k] + fp[k] + fn[k];
    const double iou =
        denom == 0 ? 0.0 : static_cast<double>(tp[k]) / static_cast<double>(denom);
    scores.per_class_iou[k] = iou;
    total += iou;
    ++included;
  }
  scores.miou = included == 0 ? 0.0 : total / included;
  return scores;
}

SegmentationScores evaluate(const SurrogateModel& model,
                            const SemanticGridWorld& world,
                            ClassPresenceRule rule) {
  const Prediction pred = model.predict(world.features());
  const std::vector<int> labels = pred.labels();
  return segmentation_scores(world.labels().values(), labels, world.num_classes(),
                             rule);
}

}  // namespace terra
