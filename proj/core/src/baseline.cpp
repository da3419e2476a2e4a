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

#include "deepwolf/baseline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>

#include "deepwolf/logfmt.hpp"
#include "deepwolf/manifest.hpp"
#include "deepwolf/rng.hpp"

namespace deepwolf {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) {
      std::string tok(text.substr(i, j - i));
      for (char& c : tok) c = lower(c);
      out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

// log(1 + e^z) without overflow.
double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

constexpr char kMagic[4] = {'D', 'W', 'L', 'R'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

void put_f64(std::string& out, double v) {
  put(out, std::bit_cast<std::uint64_t>(v));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view b) : b_(b) {}
  template <typename T>
  T get() {
    if (b_.size() < sizeof(T)) throw ModelFormatError("truncated model file");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<unsigned char>(b_[i])) << (8 * i);
    }
    b_.remove_prefix(sizeof(T));
    return v;
  }
  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::string_view take(std::size_t n) {
    if (b_.size() < n) throw ModelFormatError("truncated model file");
    auto s = b_.substr(0, n);
    b_.remove_prefix(n);
    return s;
  }
  bool done() const { return b_.empty(); }

 private:
  std::string_view b_;
};

}  // namespace

std::uint32_t feature_bucket(std::string_view ngram, std::uint32_t dim) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : ngram) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return static_cast<std::uint32_t>(h % dim);
}

SparseFeatures featurize(std::string_view text, const FeatureSpec& spec) {
  const auto tokens = tokenize(text);
  std::vector<std::uint32_t> buckets;
  std::string gram;
  for (int n : spec.ngram_orders) {
    if (n <= 0) continue;
    const auto order = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      gram.clear();
      for (std::size_t k = 0; k < order; ++k) {
        if (k) gram += ' ';
        gram += tokens[i + k];
      }
      buckets.push_back(feature_bucket(gram, spec.dim));
    }
  }
  std::sort(buckets.begin(), buckets.end());
  SparseFeatures out;
  for (std::uint32_t b : buckets) {
    if (!out.empty() && out.back().first == b) {
      out.back().second += 1.0;
    } else {
      out.emplace_back(b, 1.0);
    }
  }
  return out;
}

std::string_view truncate_front(std::string_view text, std::size_t max_chars) {
  if (text.size() <= max_chars) return text;
  return text.substr(text.size() - max_chars);
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double predict(std::span<const double> weights, double bias,
               const SparseFeatures& x) {
  double z = bias;
  for (const auto& [i, v] : x) z += weights[i] * v;
  return sigmoid(z);
}

double mean_loss(std::span<const double> weights, double bias,
                 std::span<const LabeledFeatures> batch) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : batch) {
    double z = bias;
    for (const auto& [i, v] : ex.x) z += weights[i] * v;
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    total += softplus(z) - ex.y * z;
  }
  return total / static_cast<double>(batch.size());
}

void loss_gradient(std::span<const double> weights, double bias,
                   std::span<const LabeledFeatures> batch,
                   std::span<double> grad_w, double& grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  if (batch.empty()) return;
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) {
    const double err = (predict(weights, bias, ex.x) - ex.y) * scale;
    for (const auto& [i, v] : ex.x) grad_w[i] += err * v;
    grad_b += err;
  }
}

void BaselineModel::validate() const {
  if (dim < 4096 || !std::has_single_bit(dim)) {
    throw ModelFormatError("dim must be a power of two >= 4096");
  }
  if (weights.size() != dim) throw ModelFormatError("weight count != dim");
  if (ngram_orders.empty()) throw ModelFormatError("no n-gram orders");
  for (int n : ngram_orders) {
    if (n <= 0) throw ModelFormatError("n-gram order must be positive");
  }
  if (!std::isfinite(bias)) throw ModelFormatError("non-finite bias");
  for (double w : weights) {
    if (!std::isfinite(w)) throw ModelFormatError("non-finite weight");
  }
}

TrainResult train_baseline(std::span<const TrainingExample> examples,
                           const OracleKey& key, const TrainOptions& options) {
  if (examples.empty()) throw EmptyDataset("no training examples for " + key.str());
  for (const auto& ex : examples) {
    if (ex.key != key) {
      throw KeyMismatch("example for " + ex.key.str() + " in " + key.str() +
                        " training set");
    }
  }

  BaselineModel model;
  model.key = key;
  model.dim = options.features.dim;
  model.ngram_orders = options.features.ngram_orders;
  model.weights.assign(model.dim, 0.0);
  model.bias = 0.0;

  std::vector<LabeledFeatures> data;
  data.reserve(examples.size());
  for (const auto& ex : examples) {
    data.push_back({featurize(truncate_front(ex.text, options.max_input_chars),
                              options.features),
                    static_cast<double>(ex.label)});
  }

  TrainResult result;
  result.initial_loss = mean_loss(model.weights, model.bias, data);
  double best_loss = result.initial_loss;
  BaselineModel best = model;

  Rng rng = make_rng(options.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  double lr = options.learning_rate;
  std::vector<std::pair<std::uint32_t, double>> step;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[uniform_index(rng, i)]);
    }
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double scale = 1.0 / static_cast<double>(end - start);
      step.clear();
      double grad_b = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const auto& ex = data[order[k]];
        const double err =
            (predict(model.weights, model.bias, ex.x) - ex.y) * scale;
        for (const auto& [i, v] : ex.x) step.emplace_back(i, err * v);
        grad_b += err;
      }
      for (const auto& [i, g] : step) model.weights[i] -= lr * g;
      model.bias -= lr * grad_b;
    }
    const double loss = mean_loss(model.weights, model.bias, data);
    if (std::isfinite(loss) && loss <= best_loss) {
      best_loss = loss;
      best = model;
    } else {
      model = best;
      lr *= 0.5;
    }
  }
  result.model = std::move(best);
  result.final_loss = best_loss;
  return result;
}

Score score(const BaselineModel& model, std::string_view text,
            std::size_t max_input_chars) {
  const auto x = featurize(truncate_front(text, max_input_chars), model.features());
  return Score(predict(model.weights, model.bias, x));
}

std::string serialize_model(const BaselineModel& m) {
  m.validate();
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(m.key.role));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(m.key.player.number()));
  put<std::uint16_t>(out, 0);
  put<std::uint32_t>(out, m.dim);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.ngram_orders.size()));
  for (int n : m.ngram_orders) put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put_f64(out, m.bias);
  for (double w : m.weights) put_f64(out, w);
  return out;
}

BaselineModel deserialize_model(std::string_view bytes) {
  ByteReader r(bytes);
  if (std::memcmp(r.take(4).data(), kMagic, 4) != 0) {
    throw ModelFormatError("bad magic");
  }
  if (r.get<std::uint32_t>() != kVersion) {
    throw ModelFormatError("unsupported model version");
  }
  const auto role = r.get<std::uint8_t>();
  const auto player = r.get<std::uint8_t>();
  r.get<std::uint16_t>();
  if (role > static_cast<std::uint8_t>(Role::kWerewolf) || player < 1 ||
      player > kNumPlayers) {
    throw ModelFormatError("bad model key");
  }
  BaselineModel m;
  m.key = OracleKey{static_cast<Role>(role), PlayerId(player)};
  m.dim = r.get<std::uint32_t>();
  const auto n_orders = r.get<std::uint32_t>();
  if (n_orders > 16) throw ModelFormatError("too many n-gram orders");
  for (std::uint32_t i = 0; i < n_orders; ++i) {
    m.ngram_orders.push_back(static_cast<int>(r.get<std::uint32_t>()));
  }
  m.bias = r.get_f64();
  if (m.dim > (1u << 26)) throw ModelFormatError("dim too large");
  m.weights.resize(m.dim);
  for (auto& w : m.weights) w = r.get_f64();
  if (!r.done()) throw ModelFormatError("trailing bytes in model file");
  m.validate();
  return m;
}

void save_model(const BaselineModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

BaselineModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path));
}

BaselineOracle::BaselineOracle(BaselineModel model, std::size_t max_input_chars)
    : model_(std::move(model)), max_input_chars_(max_input_chars) {
  model_.validate();
}

double BaselineOracle::score(std::string_view log_text,
                             std::string_view candidate_line) const {
  return deepwolf::score(model_, oracle_input(log_text, candidate_line),
                         max_input_chars_)
      .value();
}

}  // namespace deepwolf
