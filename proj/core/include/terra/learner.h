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

#ifndef TERRA_LEARNER_H_
#define TERRA_LEARNER_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "terra/grid.h"
#include "terra/world.h"

namespace terra {

enum class LabelSource { kHuman = 0, kPseudo = 1, kSeed = 2 };

struct LabelledPixel {
  Cell cell;
  std::vector<double> feature;
  int label = 0;
  double weight = 1.0;
  LabelSource source = LabelSource::kHuman;
};

struct TrainOptions {
  double variance_floor = 1e-6;
  double prior_smoothing = 1.0;  // pseudo-weight added to every class

  friend bool operator==(const TrainOptions&, const TrainOptions&) = default;
};

// Per-pixel class posteriors (row-major, K per pixel) and normalized entropy.
struct Prediction {
  int num_classes = 0;
  std::vector<double> probs;
  std::vector<double> uncertainty;

  std::size_t num_pixels() const { return uncertainty.size(); }
  std::span<const double> probs_at(std::size_t i) const {
    return {probs.data() + i * static_cast<std::size_t>(num_classes),
            static_cast<std::size_t>(num_classes)};
  }
  // Argmax class per pixel, lowest id on ties.
  std::vector<int> labels() const;
};

// Weighted Gaussian naive Bayes pixel classifier with diagonal covariances.
class SurrogateModel {
 public:
  SurrogateModel(std::vector<double> priors,
                 std::vector<std::vector<double>> means,
                 std::vector<std::vector<double>> variances,
                 std::array<std::size_t, 3> trained_on = {});

  int num_classes() const { return static_cast<int>(priors_.size()); }
  int dim() const { return static_cast<int>(means_.front().size()); }
  const std::vector<double>& class_priors() const { return priors_; }
  const std::vector<std::vector<double>>& class_means() const { return means_; }
  const std::vector<std::vector<double>>& class_variances() const {
    return variances_;
  }
  // Pixel counts per LabelSource used to fit the model.
  const std::array<std::size_t, 3>& trained_on() const { return trained_on_; }

  // Posterior over classes for one feature vector, written into `out` (size K).
  void posterior(std::span<const double> feature, std::span<double> out) const;

  Prediction predict(const FeatureRaster& patch) const;
  // `features` holds n consecutive d-vectors.
  Prediction predict(std::span<const double> features) const;

  friend bool operator==(const SurrogateModel&, const SurrogateModel&) = default;

 private:
  std::vector<double> priors_;
  std::vector<std::vector<double>> means_;
  std::vector<std::vector<double>> variances_;
  std::vector<double> log_priors_;
  std::vector<double> log_norm_;  // -0.5 * sum_j log(2 pi var_kj)
  std::array<std::size_t, 3> trained_on_;
};

// Weighted maximum-likelihood fit. Priors are proportional to the class weight
// sum plus `prior_smoothing`; classes without weight fall back to the pooled
// mean/variance of all pixels. Throws std::invalid_argument on empty input,
// non-positive weights, labels outside [0, K) or ragged feature vectors.
SurrogateModel train(std::span<const LabelledPixel> pixels, int num_classes,
                     const TrainOptions& options = {});

// Shannon entropy of `probs` divided by ln K; 0 for one-hot, 1 for uniform.
double normalized_entropy(std::span<const double> probs);

enum class ClassPresenceRule {
  kGroundTruthOrPrediction,  // classes absent in both are skipped
  kGroundTruth,
  kAllClasses,
};

struct SegmentationScores {
  double miou = 0.0;
  double accuracy = 0.0;
  std::vector<double> per_class_iou;  // NaN for excluded classes
};

SegmentationScores segmentation_scores(
    std::span<const int> ground_truth, std::span<const int> prediction,
    int num_classes,
    ClassPresenceRule rule = ClassPresenceRule::kGroundTruthOrPrediction);

// Argmax prediction over every world cell, scored against the labels.
SegmentationScores evaluate(
    const SurrogateModel& model, const SemanticGridWorld& world,
    ClassPresenceRule rule = ClassPresenceRule::kGroundTruthOrPrediction);

}  // namespace terra

#endif  // TERRA_LEARNER_H_
