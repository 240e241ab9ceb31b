#include "sphrase/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace sphrase {
namespace {

constexpr std::uint64_t kPairStreamTag = 0x70616972ULL;
constexpr std::uint64_t kNoiseTag = 0x6E6F6973ULL;
constexpr char kCheckpointMagic[8] = {'S', 'P', 'H', 'R', 'C', 'K', 'P', '1'};

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || n < 2 * threads) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (std::thread& t : pool) t.join();
}

template <class Real>
void score_row(const EmbeddingModelT<Real>& model,
               const CandidateSetT<Real>& candidates, WordId target,
               Real* out) {
  const Real* x = model.input.data() + std::size_t(target) * model.dim;
  for (std::size_t j = 0; j < candidates.ids.size(); ++j) {
    const WordId s = candidates.ids[j];
    const Real* w = model.output.data() + std::size_t(s) * model.dim;
    Real dot = 0;
    for (std::size_t i = 0; i < model.dim; ++i) dot += x[i] * w[i];
    out[j] = dot + model.bias[s] - candidates.log_expected[j];
  }
}

}  // namespace

AliasSampler::AliasSampler(std::span<const double> probabilities) {
  const std::size_t n = probabilities.size();
  threshold_.assign(n, 1.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<WordId> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probabilities[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<WordId>(i));
  }
  while (!small.empty() && !large.empty()) {
    const WordId s = small.back();
    const WordId l = large.back();
    small.pop_back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
}

WordId AliasSampler::sample(Rng& rng) const {
  const std::size_t i = static_cast<std::size_t>(rng.uniform(size()));
  return rng.uniform_real() < threshold_[i] ? static_cast<WordId>(i)
                                            : alias_[i];
}

template <class Real>
CandidateSetT<Real> make_candidate_set(std::span<const TrainingPair> batch,
                                       std::size_t num_sampled,
                                       const NoiseDistribution& noise,
                                       const AliasSampler& sampler, Rng& rng) {
  CandidateSetT<Real> candidates;
  for (const TrainingPair& pair : batch) {
    if (!candidates.true_column.contains(pair.context)) {
      candidates.true_column.emplace(
          pair.context, static_cast<std::uint32_t>(candidates.ids.size()));
      candidates.ids.push_back(pair.context);
    }
  }
  candidates.true_count = candidates.ids.size();
  // When the true classes already cover the vocabulary there is nothing
  // left to draw as noise.
  if (candidates.true_count < noise.probabilities.size()) {
    for (std::size_t k = 0; k < num_sampled; ++k) {
      WordId id;
      do {
        id = sampler.sample(rng);
      } while (candidates.true_column.contains(id));
      candidates.ids.push_back(id);
    }
  }
  candidates.log_expected.reserve(candidates.ids.size());
  for (const WordId id : candidates.ids) {
    candidates.log_expected.push_back(static_cast<Real>(
        std::log(static_cast<double>(num_sampled) * noise.probabilities[id])));
  }
  return candidates;
}

template <class Real>
std::vector<Real> candidate_scores(std::span<const TrainingPair> pairs,
                                   const EmbeddingModelT<Real>& model,
                                   const CandidateSetT<Real>& candidates) {
  const std::size_t cols = candidates.size();
  std::vector<Real> scores(pairs.size() * cols);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    Real* row = scores.data() + p * cols;
    score_row(model, candidates, pairs[p].target, row);
    const std::uint32_t true_col = candidates.true_column.at(pairs[p].context);
    row[true_col] += candidates.log_expected[true_col];  // E(true) = 1
    for (std::size_t j = 0; j < cols; ++j) {
      if (!std::isfinite(static_cast<double>(row[j]))) {
        throw NumericalError("non-finite candidate score");
      }
    }
  }
  return scores;
}

template <class Real>
double batch_loss_and_grads(std::span<const TrainingPair> batch,
                            const EmbeddingModelT<Real>& model,
                            const CandidateSetT<Real>& candidates,
                            BatchGradients<Real>* grads) {
  if (batch.empty()) return 0.0;
  const std::size_t cols = candidates.size();
  const std::size_t dim = model.dim;

  // Column -> gradient slot, merging duplicate noise draws of one id.
  std::vector<std::uint32_t> slot_of_col;
  std::unordered_map<WordId, std::uint32_t> input_slot;
  if (grads) {
    grads->dim = dim;
    std::unordered_map<WordId, std::uint32_t> output_slot;
    slot_of_col.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      const auto [it, inserted] = output_slot.emplace(
          candidates.ids[j],
          static_cast<std::uint32_t>(grads->output_rows.size()));
      if (inserted) grads->output_rows.push_back(candidates.ids[j]);
      slot_of_col[j] = it->second;
    }
    grads->output_grads.assign(grads->output_rows.size() * dim, Real(0));
    grads->bias_grads.assign(grads->output_rows.size(), Real(0));
  }

  std::vector<Real> logits(cols);
  std::vector<double> unnorm(cols);
  double total_loss = 0.0;
  for (const TrainingPair& pair : batch) {
    score_row(model, candidates, pair.target, logits.data());
    const std::uint32_t true_col = candidates.true_column.at(pair.context);
    logits[true_col] += candidates.log_expected[true_col];  // E(true) = 1

    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols; ++j) {
      max_logit = std::max(max_logit, static_cast<double>(logits[j]));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      unnorm[j] = std::exp(static_cast<double>(logits[j]) - max_logit);
      sum += unnorm[j];
    }
    total_loss -=
        static_cast<double>(logits[true_col]) - max_logit - std::log(sum);

    if (grads) {
      const auto [it, inserted] = input_slot.emplace(
          pair.target, static_cast<std::uint32_t>(grads->input_rows.size()));
      if (inserted) {
        grads->input_rows.push_back(pair.target);
        grads->input_grads.resize(grads->input_rows.size() * dim, Real(0));
      }
      Real* g_in = grads->input_grads.data() + std::size_t(it->second) * dim;
      const Real* x = model.input.data() + std::size_t(pair.target) * dim;
      const double inv_sum = 1.0 / sum;
      for (std::size_t j = 0; j < cols; ++j) {
        const Real coef = static_cast<Real>(unnorm[j] * inv_sum -
                                            (j == true_col ? 1.0 : 0.0));
        const Real* w =
            model.output.data() + std::size_t(candidates.ids[j]) * dim;
        Real* g_out = grads->output_grads.data() + std::size_t(slot_of_col[j]) * dim;
        for (std::size_t i = 0; i < dim; ++i) {
          g_in[i] += coef * w[i];
          g_out[i] += coef * x[i];
        }
        grads->bias_grads[slot_of_col[j]] += coef;
      }
    }
  }

  const double mean_loss = total_loss / static_cast<double>(batch.size());
  if (!std::isfinite(mean_loss)) {
    throw NumericalError("non-finite batch loss");
  }
  if (grads) {
    const Real scale = static_cast<Real>(1.0 / static_cast<double>(batch.size()));
    for (Real& g : grads->input_grads) g *= scale;
    for (Real& g : grads->output_grads) g *= scale;
    for (Real& g : grads->bias_grads) g *= scale;
  }
  return mean_loss;
}

namespace {

template <class Real>
void adam_update_block(Real* params, const Real* grad, Real* m, Real* v,
                       std::size_t n, double beta1, double beta2, double eps,
                       double lr, double bias1, double bias2) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = static_cast<double>(grad[i]);
    const double mi = beta1 * static_cast<double>(m[i]) + (1.0 - beta1) * g;
    const double vi =
        beta2 * static_cast<double>(v[i]) + (1.0 - beta2) * g * g;
    m[i] = static_cast<Real>(mi);
    v[i] = static_cast<Real>(vi);
    params[i] = static_cast<Real>(
        static_cast<double>(params[i]) -
        lr * (mi / bias1) / (std::sqrt(vi / bias2) + eps));
  }
}

}  // namespace

template <class Real>
void adam_step(EmbeddingModelT<Real>& model, const BatchGradients<Real>& grads,
               AdamStateT<Real>& state, double lr) {
  const std::uint64_t t =
      std::atomic_ref<std::uint64_t>(state.step).fetch_add(
          1, std::memory_order_relaxed) +
      1;
  const double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(t));
  const double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(t));
  const std::size_t dim = grads.dim;
  for (std::size_t r = 0; r < grads.input_rows.size(); ++r) {
    const std::size_t row = grads.input_rows[r];
    adam_update_block(model.input.data() + row * dim,
                      grads.input_grads.data() + r * dim,
                      state.input_m.data() + row * dim,
                      state.input_v.data() + row * dim, dim, state.beta1,
                      state.beta2, state.epsilon, lr, bias1, bias2);
  }
  for (std::size_t r = 0; r < grads.output_rows.size(); ++r) {
    const std::size_t row = grads.output_rows[r];
    adam_update_block(model.output.data() + row * dim,
                      grads.output_grads.data() + r * dim,
                      state.output_m.data() + row * dim,
                      state.output_v.data() + row * dim, dim, state.beta1,
                      state.beta2, state.epsilon, lr, bias1, bias2);
    adam_update_block(model.bias.data() + row, grads.bias_grads.data() + r,
                      state.bias_m.data() + row, state.bias_v.data() + row, 1,
                      state.beta1, state.beta2, state.epsilon, lr, bias1,
                      bias2);
  }
}

double lr_schedule(std::size_t epoch, double initial_lr, double decay) {
  double lr = initial_lr;
  for (std::size_t e = 0; e < epoch; ++e) lr *= decay;
  return lr;
}

std::uint64_t pair_stream_seed(std::uint64_t seed, std::size_t epoch,
                               std::size_t sentence_index) {
  return mix_seed(seed, kPairStreamTag, epoch, sentence_index);
}

void TrainConfig::validate() const {
  if (dim < 1) throw InvalidConfig("dim must be >= 1");
  if (window < 1) throw InvalidConfig("window must be >= 1");
  if (epochs < 1) throw InvalidConfig("epochs must be >= 1");
  if (!(initial_lr > 0.0)) throw InvalidConfig("initial_lr must be > 0");
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw InvalidConfig("decay must be in (0, 1]");
  }
  if (batch_tokens < 1) throw InvalidConfig("batch_tokens must be >= 1");
  if (num_sampled < 1) throw InvalidConfig("num_sampled must be >= 1");
  if (threads < 1) throw InvalidConfig("threads must be >= 1");
}

namespace {

struct EpochBatches {
  std::vector<std::vector<TrainingPair>> batches;
  std::size_t total_pairs = 0;
};

EpochBatches make_batches(std::span<const EncodedSentence> corpus,
                          const TrainConfig& config, std::size_t epoch) {
  std::vector<std::vector<TrainingPair>> per_sentence(corpus.size());
  parallel_for(corpus.size(), config.threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   per_sentence[i] = generate_pairs(
                       corpus[i], config.regime, config.window,
                       pair_stream_seed(config.seed, epoch, i));
                 }
               });

  EpochBatches out;
  std::vector<TrainingPair> current;
  std::size_t current_tokens = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    current.insert(current.end(), per_sentence[i].begin(),
                   per_sentence[i].end());
    per_sentence[i].clear();
    per_sentence[i].shrink_to_fit();
    current_tokens += corpus[i].ids.size();
    if (current_tokens >= config.batch_tokens) {
      if (!current.empty()) {
        out.total_pairs += current.size();
        out.batches.push_back(std::move(current));
        current = {};
      }
      current_tokens = 0;
    }
  }
  if (!current.empty()) {
    out.total_pairs += current.size();
    out.batches.push_back(std::move(current));
  }
  return out;
}

}  // namespace

TrainResult train(std::span<const EncodedSentence> corpus,
                  const Vocabulary& vocab, const TrainConfig& config,
                  std::ostream* progress) {
  config.validate();
  if (config.num_sampled >= vocab.size()) {
    throw InvalidConfig("num_sampled must be smaller than the vocabulary (" +
                        std::to_string(config.num_sampled) +
                        " >= " + std::to_string(vocab.size()) + ")");
  }
  const NoiseDistribution noise = noise_distribution(vocab, 0.75);
  const AliasSampler sampler(noise.probabilities);

  TrainResult result;
  result.model = init_model<float>(vocab.size(), config.dim, config.seed);
  AdamState state = AdamState::like(result.model);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, config.initial_lr, config.decay);
    EpochBatches epoch_batches = make_batches(corpus, config, epoch);
    if (epoch == 0 && epoch_batches.total_pairs == 0) {
      throw EmptyCorpus("corpus generated no training pairs");
    }

    double loss_sum = 0.0;
    const auto process_batch = [&](std::size_t bi) {
      const std::vector<TrainingPair>& batch = epoch_batches.batches[bi];
      Rng rng(mix_seed(config.seed, kNoiseTag, epoch, bi));
      const CandidateSet candidates = make_candidate_set<float>(
          batch, config.num_sampled, noise, sampler, rng);
      BatchGradients<float> grads;
      const double loss = batch_loss_and_grads<float>(
          batch, result.model, candidates, &grads);
      adam_step(result.model, grads, state, lr);
      return loss * static_cast<double>(batch.size());
    };

    if (config.deterministic || config.threads <= 1) {
      for (std::size_t bi = 0; bi < epoch_batches.batches.size(); ++bi) {
        loss_sum += process_batch(bi);
      }
    } else {
      // Lock-free workers: parameter rows are updated without locks and
      // lost updates are tolerated; quality is verified statistically.
      std::atomic<std::size_t> next{0};
      std::mutex loss_mutex;
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < config.threads; ++w) {
        pool.emplace_back([&] {
          double local = 0.0;
          while (true) {
            const std::size_t bi =
                next.fetch_add(1, std::memory_order_relaxed);
            if (bi >= epoch_batches.batches.size()) break;
            local += process_batch(bi);
          }
          const std::lock_guard<std::mutex> lock(loss_mutex);
          loss_sum += local;
        });
      }
      for (std::thread& t : pool) t.join();
    }

    const double mean_loss =
        epoch_batches.total_pairs == 0
            ? 0.0
            : loss_sum / static_cast<double>(epoch_batches.total_pairs);
    result.epoch_mean_loss.push_back(mean_loss);
    result.epoch_pairs.push_back(epoch_batches.total_pairs);
    if (progress) {
      (*progress) << epoch << '\t' << mean_loss << '\t' << lr << '\t'
                  << epoch_batches.total_pairs << std::endl;
    }
    if (!config.checkpoint_dir.empty()) {
      char name[64];
      std::snprintf(name, sizeof(name), "/checkpoint_epoch_%03zu.bin", epoch);
      save_checkpoint(result.model, config.checkpoint_dir + name);
    }
  }
  return result;
}

void save_checkpoint(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  const std::uint32_t version = 1;
  const std::uint64_t v = model.vocab_size;
  const std::uint64_t d = model.dim;
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
  out.write(reinterpret_cast<const char*>(&d), sizeof(d));
  const auto write_block = [&](const std::vector<float>& block) {
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size() * sizeof(float)));
  };
  write_block(model.input);
  write_block(model.output);
  write_block(model.bias);
  if (!out.good()) throw IoError("failed writing checkpoint: " + path);
}

EmbeddingModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint: " + path);
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t v = 0;
  std::uint64_t d = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  in.read(reinterpret_cast<char*>(&d), sizeof(d));
  if (!in.good() || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0 ||
      version != 1) {
    throw IoError("not a checkpoint file: " + path);
  }
  EmbeddingModel model;
  model.vocab_size = v;
  model.dim = d;
  model.input.resize(v * d);
  model.output.resize(v * d);
  model.bias.resize(v);
  const auto read_block = [&](std::vector<float>& block) {
    in.read(reinterpret_cast<char*>(block.data()),
            static_cast<std::streamsize>(block.size() * sizeof(float)));
  };
  read_block(model.input);
  read_block(model.output);
  read_block(model.bias);
  if (!in.good()) throw IoError("truncated checkpoint: " + path);
  return model;
}

template CandidateSetT<float> make_candidate_set<float>(
    std::span<const TrainingPair>, std::size_t, const NoiseDistribution&,
    const AliasSampler&, Rng&);
template CandidateSetT<double> make_candidate_set<double>(
    std::span<const TrainingPair>, std::size_t, const NoiseDistribution&,
    const AliasSampler&, Rng&);
template std::vector<float> candidate_scores<float>(
    std::span<const TrainingPair>, const EmbeddingModelT<float>&,
    const CandidateSetT<float>&);
template std::vector<double> candidate_scores<double>(
    std::span<const TrainingPair>, const EmbeddingModelT<double>&,
    const CandidateSetT<double>&);
template double batch_loss_and_grads<float>(std::span<const TrainingPair>,
                                            const EmbeddingModelT<float>&,
                                            const CandidateSetT<float>&,
                                            BatchGradients<float>*);
template double batch_loss_and_grads<double>(std::span<const TrainingPair>,
                                             const EmbeddingModelT<double>&,
                                             const CandidateSetT<double>&,
                                             BatchGradients<double>*);
template void adam_step<float>(EmbeddingModelT<float>&,
                               const BatchGradients<float>&,
                               AdamStateT<float>&, double);
template void adam_step<double>(EmbeddingModelT<double>&,
                                const BatchGradients<double>&,
                                AdamStateT<double>&, double);

}  // namespace sphrase
