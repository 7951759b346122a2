#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chartrl/rng.hpp"
#include "chartrl/taskgen.hpp"
#include "chartrl/vocab.hpp"

namespace chartrl {

inline constexpr int kHistoryTokens = 3;
inline constexpr int kPositionBuckets = 8;
inline constexpr int kSchemaSlots = 6;
inline constexpr int kDefaultHidden = 64;

/// Total conditioning dimension: template one-hot, per-slot schema flags,
/// k previous-token one-hots, position bucket.
int feature_dim();

/// Active feature indices for one decoding position. All features are
/// one-hot, so indices fully describe the vector.
struct ContextFeatures {
  std::vector<int> active;
};

void featurize(const TaskInstance& task, std::span<const Token> prefix, int position,
               ContextFeatures& out);

/// One-hidden-layer tanh network over the context features:
///   logits = W2 * tanh(W1 * phi + b1) + b2
/// Tensors are row-major; a PolicyParams of identical shape doubles as a
/// gradient accumulator.
struct PolicyParams {
  int input_dim = 0;
  int hidden_dim = 0;
  int vocab_size = 0;
  std::vector<double> w1;  // hidden_dim x input_dim
  std::vector<double> b1;  // hidden_dim
  std::vector<double> w2;  // vocab_size x hidden_dim
  std::vector<double> b2;  // vocab_size

  bool operator==(const PolicyParams&) const = default;
};

/// Uniform init in [-0.05, 0.05], seeded; near-uniform initial policy.
PolicyParams init_params(uint64_t seed, int hidden_dim = kDefaultHidden);
PolicyParams zeros_like(const PolicyParams& p);

/// Deep immutable copy; later updates to the source leave it unchanged.
PolicyParams snapshot(const PolicyParams& p);

struct PolicyWorkspace {
  ContextFeatures ctx;
  std::vector<double> hidden;
  std::vector<double> logits;
  std::vector<double> probs;
  std::vector<double> dlogits;
  std::vector<double> ref_hidden;
  std::vector<double> ref_logits;
  std::vector<double> ref_probs;
};

void forward(const PolicyParams& p, const ContextFeatures& ctx, std::span<double> hidden,
             std::span<double> logits);

/// Accumulates dL/dparams into `grad` given dL/dlogits at this position.
void backward(const PolicyParams& p, const ContextFeatures& ctx, std::span<const double> hidden,
              std::span<const double> dlogits, PolicyParams& grad);

void softmax(std::span<const double> logits, std::span<double> probs);
double log_sum_exp(std::span<const double> logits);

/// Convenience: logits for (task, prefix, position).
std::vector<double> policy_logits(const PolicyParams& p, const TaskInstance& task,
                                  std::span<const Token> prefix, int position);

struct SamplerConfig {
  double temperature = 0.7;
  double top_p = 0.9;
  int max_len = 64;
  uint64_t rng_seed = 0;

  bool valid() const { return temperature > 0.0 && top_p > 0.0 && top_p <= 1.0 && max_len > 0; }
};

struct SampledSequence {
  std::vector<Token> tokens;
  std::vector<double> logprobs;  // untempered model logprobs of the sampled tokens
};

/// Autoregressive sampling with temperature and nucleus truncation; stops at
/// END or max_len. Reported logprobs come from the full untempered
/// distribution (the ones importance ratios are built from).
SampledSequence sample_sequence(const PolicyParams& p, const TaskInstance& task,
                                const SamplerConfig& config, Rng& rng);

/// Argmax decoding (the temperature -> 0 limit); deterministic.
std::vector<Token> greedy_sequence(const PolicyParams& p, const TaskInstance& task, int max_len);

/// Total log-probability of `tokens` under the policy; when `grad` is
/// non-null the analytic gradient is accumulated into it.
double sequence_logprob(const PolicyParams& p, const TaskInstance& task,
                        std::span<const Token> tokens, PolicyParams* grad);

/// Binary checkpoint: header (vocab size, input dim, hidden dim, history k,
/// seed) followed by w1, b1, w2, b2 as little-endian doubles.
void save_checkpoint(const std::string& path, const PolicyParams& p, uint64_t seed);
struct Checkpoint {
  PolicyParams params;
  uint64_t seed = 0;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace chartrl
