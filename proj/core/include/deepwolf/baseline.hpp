// Copyright 2026 The deepwolf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPWOLF_BASELINE_HPP_
#define DEEPWOLF_BASELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deepwolf/augment.hpp"
#include "deepwolf/oracle.hpp"

namespace deepwolf {

// Native value model: logistic regression over hashed word n-gram counts.

struct FeatureSpec {
  std::uint32_t dim = 1u << 16;
  std::vector<int> ngram_orders = {1, 2};
};

// Sorted by bucket, buckets unique, values are counts.
using SparseFeatures = std::vector<std::pair<std::uint32_t, double>>;

// FNV-1a of the n-gram (words joined by a single space) modulo dim.
std::uint32_t feature_bucket(std::string_view ngram, std::uint32_t dim);

// Lowercases, splits on ASCII whitespace and counts every n-gram of the
// requested orders into dim buckets.
SparseFeatures featurize(std::string_view text, const FeatureSpec& spec);

// Keeps the last `max_chars` bytes.
std::string_view truncate_front(std::string_view text, std::size_t max_chars);

inline constexpr std::size_t kDefaultMaxInputChars = 8192;

// Loss kernel shared by training and the gradient check. Works for any
// dimension; `weights` must cover every bucket that appears in `x`.
struct LabeledFeatures {
  SparseFeatures x;
  double y = 0.0;
};

double sigmoid(double z);
double predict(std::span<const double> weights, double bias,
               const SparseFeatures& x);
// Mean binary cross-entropy.
double mean_loss(std::span<const double> weights, double bias,
                 std::span<const LabeledFeatures> batch);
// Gradient of mean_loss; grad_w is overwritten and must match weights.
void loss_gradient(std::span<const double> weights, double bias,
                   std::span<const LabeledFeatures> batch,
                   std::span<double> grad_w, double& grad_b);

struct BaselineModel {
  OracleKey key{Role::kVillager, PlayerId(1)};
  std::uint32_t dim = 0;
  std::vector<int> ngram_orders;
  std::vector<double> weights;
  double bias = 0.0;

  FeatureSpec features() const { return {dim, ngram_orders}; }
  // Throws ModelFormatError: dim must be a power of two >= 4096, weights
  // sized dim and finite, orders non-empty and positive.
  void validate() const;

  friend bool operator==(const BaselineModel&, const BaselineModel&) = default;
};

struct TrainOptions {
  int epochs = 5;
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  FeatureSpec features;
  std::size_t max_input_chars = kDefaultMaxInputChars;
};

struct TrainResult {
  BaselineModel model;
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

// Mini-batch SGD on mean cross-entropy. An epoch that raises the full-data
// loss is rolled back and the step size halved, so final_loss never exceeds
// initial_loss. Throws EmptyDataset or KeyMismatch.
TrainResult train_baseline(std::span<const TrainingExample> examples,
                           const OracleKey& key, const TrainOptions& options);

Score score(const BaselineModel& model, std::string_view text,
            std::size_t max_input_chars = kDefaultMaxInputChars);

// Binary layout, little-endian:
//   "DWLR" | u32 version=1 | u8 role | u8 player | u16 0 | u32 dim |
//   u32 n_orders | u32 orders[n] | f64 bias | f64 weights[dim]
std::string serialize_model(const BaselineModel& model);
BaselineModel deserialize_model(std::string_view bytes);
void save_model(const BaselineModel& model, const std::filesystem::path& path);
BaselineModel load_model(const std::filesystem::path& path);

class BaselineOracle : public Oracle {
 public:
  explicit BaselineOracle(BaselineModel model,
                          std::size_t max_input_chars = kDefaultMaxInputChars);

  double score(std::string_view log_text,
               std::string_view candidate_line) const override;

  const BaselineModel& model() const { return model_; }

 private:
  BaselineModel model_;
  std::size_t max_input_chars_;
};

}  // namespace deepwolf

#endif  // DEEPWOLF_BASELINE_HPP_
