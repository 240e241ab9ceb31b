#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sphrase/context.hpp"
#include "sphrase/errors.hpp"
#include "sphrase/rng.hpp"
#include "sphrase/vocab.hpp"

namespace sphrase {

/// Input/output embedding matrices plus output biases. Parameters are
/// stored row-major; training uses Real = float, the gradient oracle
/// runs the same kernels with Real = double.
template <class Real>
struct EmbeddingModelT {
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  std::vector<Real> input;   // V x d
  std::vector<Real> output;  // V x d
  std::vector<Real> bias;    // V

  std::span<Real> input_row(std::size_t i) {
    return {input.data() + i * dim, dim};
  }
  std::span<const Real> input_row(std::size_t i) const {
    return {input.data() + i * dim, dim};
  }
  std::span<Real> output_row(std::size_t i) {
    return {output.data() + i * dim, dim};
  }
  std::span<const Real> output_row(std::size_t i) const {
    return {output.data() + i * dim, dim};
  }
};

using EmbeddingModel = EmbeddingModelT<float>;

/// Input vectors uniform in [-0.5/d, 0.5/d]; output vectors and biases
/// zero. Deterministic in the seed.
template <class Real>
EmbeddingModelT<Real> init_model(std::size_t vocab_size, std::size_t dim,
                                 std::uint64_t seed) {
  EmbeddingModelT<Real> model;
  model.vocab_size = vocab_size;
  model.dim = dim;
  model.input.resize(vocab_size * dim);
  model.output.assign(vocab_size * dim, Real(0));
  model.bias.assign(vocab_size, Real(0));
  Rng rng(mix_seed(seed, 0x696E6974ULL));
  const double scale = 0.5 / static_cast<double>(dim);
  for (Real& x : model.input) {
    x = static_cast<Real>((2.0 * rng.uniform_real() - 1.0) * scale);
  }
  return model;
}

/// O(1) sampling from a discrete distribution (Walker's alias method).
class AliasSampler {
 public:
  AliasSampler() = default;
  explicit AliasSampler(std::span<const double> probabilities);

  WordId sample(Rng& rng) const;
  std::size_t size() const { return threshold_.size(); }

 private:
  std::vector<double> threshold_;
  std::vector<WordId> alias_;
};

/// The candidate set shared by one batch: the distinct true context ids
/// (in first-appearance order) followed by num_sampled noise draws.
/// log_expected[j] = log(num_sampled * P_noise(ids[j])); the per-pair
/// correction for a pair's own true class (expected count 1) is applied
/// at scoring time.
template <class Real>
struct CandidateSetT {
  std::vector<WordId> ids;
  std::vector<Real> log_expected;
  std::size_t true_count = 0;
  std::unordered_map<WordId, std::uint32_t> true_column;

  std::size_t size() const { return ids.size(); }
};

using CandidateSet = CandidateSetT<float>;

/// Draws the batch's candidate set. Noise ids are sampled with
/// replacement; draws colliding with any true id of the batch are
/// resampled.
template <class Real>
CandidateSetT<Real> make_candidate_set(std::span<const TrainingPair> batch,
                                       std::size_t num_sampled,
                                       const NoiseDistribution& noise,
                                       const AliasSampler& sampler, Rng& rng);

/// Corrected logits for every (pair, candidate) combination, row-major
/// batch.size() x candidates.size():
///   logit = input[target] . output[s] + bias[s] - log(E(s))
/// with E(s) = num_sampled * P_noise(s), except E = 1 for the pair's own
/// true class. Intended for small instances; training streams rows
/// internally. Throws NumericalError on non-finite values.
template <class Real>
std::vector<Real> candidate_scores(std::span<const TrainingPair> pairs,
                                   const EmbeddingModelT<Real>& model,
                                   const CandidateSetT<Real>& candidates);

/// Gradients for the parameter rows a batch touches. Output rows cover
/// the candidate set (duplicate noise draws merged); input rows cover the
/// batch's distinct targets.
template <class Real>
struct BatchGradients {
  std::size_t dim = 0;
  std::vector<WordId> input_rows;
  std::vector<Real> input_grads;  // input_rows.size() x dim
  std::vector<WordId> output_rows;
  std::vector<Real> output_grads;  // output_rows.size() x dim
  std::vector<Real> bias_grads;    // output_rows.size()
};

/// Mean negative log softmax probability of each pair's true class over
/// the candidate set. Softmax and loss are accumulated in double. Pass
/// grads = nullptr for a loss-only evaluation (the finite-difference
/// oracle path). Throws NumericalError on a non-finite loss.
template <class Real>
double batch_loss_and_grads(std::span<const TrainingPair> batch,
                            const EmbeddingModelT<Real>& model,
                            const CandidateSetT<Real>& candidates,
                            BatchGradients<Real>* grads);

/// Adam moments shaped like the model. Moments follow sparse semantics:
/// only rows touched by a step are updated or decayed.
template <class Real>
struct AdamStateT {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<Real> input_m, input_v;
  std::vector<Real> output_m, output_v;
  std::vector<Real> bias_m, bias_v;

  static AdamStateT like(const EmbeddingModelT<Real>& model) {
    AdamStateT state;
    state.input_m.assign(model.input.size(), Real(0));
    state.input_v.assign(model.input.size(), Real(0));
    state.output_m.assign(model.output.size(), Real(0));
    state.output_v.assign(model.output.size(), Real(0));
    state.bias_m.assign(model.bias.size(), Real(0));
    state.bias_v.assign(model.bias.size(), Real(0));
    return state;
  }
};

using AdamState = AdamStateT<float>;

/// One bias-corrected Adam update over the touched rows. The step
/// counter is incremented atomically so lock-free workers share it.
template <class Real>
void adam_step(EmbeddingModelT<Real>& model, const BatchGradients<Real>& grads,
               AdamStateT<Real>& state, double lr);

/// initial_lr * decay^epoch.
double lr_schedule(std::size_t epoch, double initial_lr, double decay);

/// Stream seed used for sentence `index` of epoch `epoch`; the pairs
/// debug command shares it so its dump equals the epoch-0 training
/// stream.
std::uint64_t pair_stream_seed(std::uint64_t seed, std::size_t epoch,
                               std::size_t sentence_index);

struct TrainConfig {
  std::size_t dim = 300;
  std::size_t window = 5;
  Regime regime = Regime::kSPhraseR;
  std::size_t epochs = 20;
  double initial_lr = 0.001;
  double decay = 0.9;
  std::size_t batch_tokens = 60000;
  std::size_t num_sampled = 5000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool deterministic = true;
  std::string checkpoint_dir;  // empty: no per-epoch checkpoints

  /// Throws InvalidConfig on violation of the documented bounds.
  void validate() const;
};

struct TrainResult {
  EmbeddingModel model;
  std::vector<double> epoch_mean_loss;
  std::vector<std::size_t> epoch_pairs;
};

/// Runs the full training loop: per epoch, regenerate pairs under the
/// configured regime, group whole sentences into batches of at least
/// batch_tokens target tokens, and apply candidate-sampling updates with
/// the decayed learning rate. Progress lines
/// `epoch<TAB>mean_loss<TAB>lr<TAB>pairs` go to *progress when given.
TrainResult train(std::span<const EncodedSentence> corpus,
                  const Vocabulary& vocab, const TrainConfig& config,
                  std::ostream* progress = nullptr);

/// Binary checkpoint: 8-byte magic "SPHRCKP1", u32 version, u64 V, u64 d,
/// then input, output and bias blocks as row-major little-endian f32.
void save_checkpoint(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_checkpoint(const std::string& path);

}  // namespace sphrase
