#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chartrl/policy.hpp"
#include "chartrl/reward.hpp"
#include "chartrl/rng.hpp"
#include "chartrl/taskgen.hpp"

namespace chartrl {

/// One prompt's rollout batch: G completions sampled from the rollout
/// snapshot, their logprobs under that snapshot, and their scored rewards.
/// `task` points into the dataset owned by the surrounding run.
struct Group {
  int64_t task_id = 0;
  const TaskInstance* task = nullptr;
  std::vector<std::vector<Token>> completions;
  std::vector<std::vector<double>> old_logprobs;
  std::vector<double> rewards;
  std::vector<RewardBreakdown> breakdowns;
  std::vector<bool> format_mask;  // true = failed the format gate
};

struct TrainerConfig {
  int group_size = 8;
  double clip_eps = 0.2;
  double kl_beta = 0.04;
  double learning_rate = 0.01;  // toy-scale default; 1e-5 suits LLM-sized runs
  double weight_decay = 0.1;
  double warmup_frac = 0.05;  // cosine schedule warmup fraction
  double grad_norm_clip = 0.1;
  int inner_epochs = 1;
  int total_steps = 300;
  int prompts_per_batch = 8;
  /// Supervised warmup updates before policy-gradient steps. A random-init
  /// policy emits no well-formed output, so every group scores all-zero and
  /// the standardized advantages vanish; a short imitation phase plays the
  /// role of the pretrained backbone RL fine-tuning starts from.
  int sft_warmup_steps = 50;
  RewardWeights reward_weights;
  bool mask_format_failures_from_loss = false;
  bool sample_std = false;  // Bessel-corrected group std instead of population
  uint64_t seed = 42;

  bool valid() const {
    return group_size >= 2 && clip_eps > 0 && kl_beta >= 0 && inner_epochs >= 1 &&
           total_steps >= 0 && prompts_per_batch >= 1 && sft_warmup_steps >= 0;
  }
};

struct StepMetrics {
  int64_t step = 0;
  double mean_reward = 0.0;
  double reward_std = 0.0;
  double format_reward_rate = 0.0;
  double mean_kl = 0.0;
  double grad_norm = 0.0;
  double loss = 0.0;
  double mean_completion_length = 0.0;
  double learning_rate = 0.0;
};

std::string metrics_csv_header();
std::string metrics_to_csv(const StepMetrics& m);

/// Samples G completions from the rollout snapshot and scores each with the
/// two-stage reward. Deterministic given the rng stream.
Group rollout_group(const PolicyParams& pi_old, const TaskInstance& task, int group_size,
                    const SamplerConfig& sampler, const RewardEngine& engine, Rng& rng);

/// Within-group standardization (r - mean) / std with population std by
/// default. A near-zero std (< 1e-8) yields all-zero advantages.
std::vector<double> normalize_advantages(std::span<const double> rewards, bool sample_std = false);

/// Scalar clipped-surrogate term: min(ratio * adv, clip(ratio) * adv).
double clipped_surrogate(double ratio, double advantage, double clip_eps);

struct GrpoLoss {
  double loss = 0.0;
  double mean_kl = 0.0;
  PolicyParams grad;
};

/// Clipped-surrogate-plus-KL loss over a batch of groups. Ratios compare the
/// live policy against the stored rollout logprobs; the KL term against the
/// frozen reference is computed exactly over the vocabulary at every token.
/// Every token of a sequence shares the sequence's advantage. Averaging is
/// per-token within a sequence, then uniform over the G completions and the
/// batch. loss = -(mean surrogate - kl_beta * mean KL).
GrpoLoss grpo_loss_and_grad(const PolicyParams& params, const PolicyParams& pi_ref,
                            std::span<const Group> groups,
                            const std::vector<std::vector<double>>& advantages, double clip_eps,
                            double kl_beta, bool mask_format_failures);

double global_norm(const PolicyParams& grad);
void clip_global_norm(PolicyParams& grad, double max_norm);

/// Linear warmup to base_lr, then cosine decay to zero across the horizon.
double cosine_lr(int64_t update_index, int64_t horizon, double base_lr, double warmup_frac);

/// Decoupled-weight-decay adaptive-moment update.
struct AdamW {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  int64_t t = 0;
  PolicyParams m;
  PolicyParams v;

  void init(const PolicyParams& shape);
  void update(PolicyParams& params, const PolicyParams& grad, double lr);
};

/// Everything a training run needs; tasks are owned here so Groups can point
/// into them.
struct TrainRun {
  TrainerConfig trainer;
  SamplerConfig sampler;
  RewardEngine engine;
  std::vector<TaskInstance> tasks;
};

class Trainer {
 public:
  explicit Trainer(TrainRun run);

  /// One supervised update on the next batch's reference outputs.
  StepMetrics sft_step();

  /// One rollout + scored + clipped-surrogate update (inner_epochs passes).
  StepMetrics grpo_step();

  /// sft_warmup_steps supervised updates followed by total_steps policy
  /// steps; invokes the callback after each step.
  std::vector<StepMetrics> run_all(const std::function<void(const StepMetrics&)>& on_step = {});

  const PolicyParams& params() const { return params_; }
  const PolicyParams& reference() const { return ref_; }
  const TrainRun& run() const { return run_; }
  int64_t step() const { return step_; }

  void save_state(const std::string& path) const;
  void load_state(const std::string& path);
  void set_params(PolicyParams p) { params_ = std::move(p); }

 private:
  StepMetrics apply_update(PolicyParams&& grad, double raw_loss, StepMetrics metrics);

  TrainRun run_;
  PolicyParams params_;
  PolicyParams ref_;
  AdamW opt_;
  int64_t step_ = 0;
  int64_t update_index_ = 0;
  int64_t horizon_ = 0;
};

}  // namespace chartrl
