#include "chartrl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace chartrl {

int feature_dim() {
  return kTemplateCount + 3 * kSchemaSlots + kHistoryTokens * kVocabSize + kPositionBuckets;
}

void featurize(const TaskInstance& task, std::span<const Token> prefix, int position,
               ContextFeatures& out) {
  out.active.clear();
  out.active.push_back(static_cast<int>(task.template_id));

  int base = kTemplateCount;
  for (int s = 0; s < kSchemaSlots; ++s) {
    int flag = 2;  // absent
    if (s < task.table.width())
      flag = task.table.columns[static_cast<size_t>(s)].kind == ColumnKind::CATEGORICAL ? 0 : 1;
    out.active.push_back(base + 3 * s + flag);
  }

  base += 3 * kSchemaSlots;
  for (int j = 1; j <= kHistoryTokens; ++j) {
    int idx = position - j;
    if (idx >= 0 && idx < static_cast<int>(prefix.size())) {
      out.active.push_back(base + (j - 1) * kVocabSize +
                           static_cast<int>(prefix[static_cast<size_t>(idx)]));
    }
  }

  base += kHistoryTokens * kVocabSize;
  int bucket = std::min(kPositionBuckets - 1, position / 8);
  out.active.push_back(base + bucket);
}

PolicyParams init_params(uint64_t seed, int hidden_dim) {
  PolicyParams p;
  p.input_dim = feature_dim();
  p.hidden_dim = hidden_dim;
  p.vocab_size = kVocabSize;
  p.w1.resize(static_cast<size_t>(p.hidden_dim) * p.input_dim);
  p.b1.resize(static_cast<size_t>(p.hidden_dim));
  p.w2.resize(static_cast<size_t>(p.vocab_size) * p.hidden_dim);
  p.b2.resize(static_cast<size_t>(p.vocab_size));
  Rng rng(mix_seed(seed, 0x706f6c69637975ull));
  for (double& v : p.w1) v = rng.uniform(-0.05, 0.05);
  for (double& v : p.b1) v = rng.uniform(-0.05, 0.05);
  for (double& v : p.w2) v = rng.uniform(-0.05, 0.05);
  for (double& v : p.b2) v = rng.uniform(-0.05, 0.05);
  return p;
}

PolicyParams zeros_like(const PolicyParams& p) {
  PolicyParams z;
  z.input_dim = p.input_dim;
  z.hidden_dim = p.hidden_dim;
  z.vocab_size = p.vocab_size;
  z.w1.assign(p.w1.size(), 0.0);
  z.b1.assign(p.b1.size(), 0.0);
  z.w2.assign(p.w2.size(), 0.0);
  z.b2.assign(p.b2.size(), 0.0);
  return z;
}

PolicyParams snapshot(const PolicyParams& p) { return p; }

void forward(const PolicyParams& p, const ContextFeatures& ctx, std::span<double> hidden,
             std::span<double> logits) {
  const int h_dim = p.hidden_dim;
  for (int h = 0; h < h_dim; ++h) hidden[static_cast<size_t>(h)] = p.b1[static_cast<size_t>(h)];
  // Features are one-hot, so the matvec reduces to summing active columns.
  for (int d : ctx.active) {
    const double* col = p.w1.data() + d;
    for (int h = 0; h < h_dim; ++h)
      hidden[static_cast<size_t>(h)] += col[static_cast<size_t>(h) * p.input_dim];
  }
  for (int h = 0; h < h_dim; ++h)
    hidden[static_cast<size_t>(h)] = std::tanh(hidden[static_cast<size_t>(h)]);

  for (int v = 0; v < p.vocab_size; ++v) {
    const double* row = p.w2.data() + static_cast<size_t>(v) * h_dim;
    double acc = p.b2[static_cast<size_t>(v)];
    for (int h = 0; h < h_dim; ++h) acc += row[h] * hidden[static_cast<size_t>(h)];
    logits[static_cast<size_t>(v)] = acc;
  }
}

void backward(const PolicyParams& p, const ContextFeatures& ctx, std::span<const double> hidden,
              std::span<const double> dlogits, PolicyParams& grad) {
  const int h_dim = p.hidden_dim;
  std::vector<double> dhidden(static_cast<size_t>(h_dim), 0.0);
  for (int v = 0; v < p.vocab_size; ++v) {
    const double dv = dlogits[static_cast<size_t>(v)];
    if (dv == 0.0) continue;
    const double* row = p.w2.data() + static_cast<size_t>(v) * h_dim;
    double* grow = grad.w2.data() + static_cast<size_t>(v) * h_dim;
    for (int h = 0; h < h_dim; ++h) {
      dhidden[static_cast<size_t>(h)] += row[h] * dv;
      grow[h] += dv * hidden[static_cast<size_t>(h)];
    }
    grad.b2[static_cast<size_t>(v)] += dv;
  }
  for (int h = 0; h < h_dim; ++h) {
    const double hv = hidden[static_cast<size_t>(h)];
    const double dz = dhidden[static_cast<size_t>(h)] * (1.0 - hv * hv);
    grad.b1[static_cast<size_t>(h)] += dz;
    double* grow = grad.w1.data() + static_cast<size_t>(h) * p.input_dim;
    for (int d : ctx.active) grow[d] += dz;
  }
}

void softmax(std::span<const double> logits, std::span<double> probs) {
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - m);
    sum += probs[i];
  }
  for (size_t i = 0; i < logits.size(); ++i) probs[i] /= sum;
}

double log_sum_exp(std::span<const double> logits) {
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - m);
  return m + std::log(sum);
}

std::vector<double> policy_logits(const PolicyParams& p, const TaskInstance& task,
                                  std::span<const Token> prefix, int position) {
  ContextFeatures ctx;
  featurize(task, prefix, position, ctx);
  std::vector<double> hidden(static_cast<size_t>(p.hidden_dim));
  std::vector<double> logits(static_cast<size_t>(p.vocab_size));
  forward(p, ctx, hidden, logits);
  return logits;
}

SampledSequence sample_sequence(const PolicyParams& p, const TaskInstance& task,
                                const SamplerConfig& config, Rng& rng) {
  SampledSequence out;
  const int v_dim = p.vocab_size;
  std::vector<double> hidden(static_cast<size_t>(p.hidden_dim));
  std::vector<double> logits(static_cast<size_t>(v_dim));
  std::vector<double> tempered(static_cast<size_t>(v_dim));
  std::vector<double> probs(static_cast<size_t>(v_dim));
  std::vector<int> order(static_cast<size_t>(v_dim));
  ContextFeatures ctx;

  for (int pos = 0; pos < config.max_len; ++pos) {
    featurize(task, out.tokens, pos, ctx);
    forward(p, ctx, hidden, logits);

    for (int v = 0; v < v_dim; ++v)
      tempered[static_cast<size_t>(v)] = logits[static_cast<size_t>(v)] / config.temperature;
    softmax(tempered, probs);

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double pa = probs[static_cast<size_t>(a)], pb = probs[static_cast<size_t>(b)];
      if (pa != pb) return pa > pb;
      return a < b;
    });

    // Smallest prefix whose mass reaches top_p; always at least one token.
    double cum = 0.0;
    size_t kept = 0;
    for (size_t k = 0; k < order.size(); ++k) {
      cum += probs[static_cast<size_t>(order[k])];
      kept = k + 1;
      if (cum >= config.top_p) break;
    }

    double r = rng.next_double() * cum;
    int chosen = order[kept - 1];
    double acc = 0.0;
    for (size_t k = 0; k < kept; ++k) {
      acc += probs[static_cast<size_t>(order[k])];
      if (r < acc) {
        chosen = order[k];
        break;
      }
    }

    const double lse = log_sum_exp(logits);
    out.logprobs.push_back(logits[static_cast<size_t>(chosen)] - lse);
    out.tokens.push_back(static_cast<Token>(chosen));
    if (static_cast<Token>(chosen) == Token::END) break;
  }
  return out;
}

std::vector<Token> greedy_sequence(const PolicyParams& p, const TaskInstance& task, int max_len) {
  std::vector<Token> tokens;
  std::vector<double> hidden(static_cast<size_t>(p.hidden_dim));
  std::vector<double> logits(static_cast<size_t>(p.vocab_size));
  ContextFeatures ctx;
  for (int pos = 0; pos < max_len; ++pos) {
    featurize(task, tokens, pos, ctx);
    forward(p, ctx, hidden, logits);
    int best = 0;
    for (int v = 1; v < p.vocab_size; ++v)
      if (logits[static_cast<size_t>(v)] > logits[static_cast<size_t>(best)]) best = v;
    tokens.push_back(static_cast<Token>(best));
    if (static_cast<Token>(best) == Token::END) break;
  }
  return tokens;
}

double sequence_logprob(const PolicyParams& p, const TaskInstance& task,
                        std::span<const Token> tokens, PolicyParams* grad) {
  double total = 0.0;
  std::vector<double> hidden(static_cast<size_t>(p.hidden_dim));
  std::vector<double> logits(static_cast<size_t>(p.vocab_size));
  std::vector<double> probs(static_cast<size_t>(p.vocab_size));
  std::vector<double> dlogits(static_cast<size_t>(p.vocab_size));
  ContextFeatures ctx;

  for (size_t t = 0; t < tokens.size(); ++t) {
    featurize(task, tokens.first(t), static_cast<int>(t), ctx);
    forward(p, ctx, hidden, logits);
    const int y = static_cast<int>(tokens[t]);
    total += logits[static_cast<size_t>(y)] - log_sum_exp(logits);
    if (grad) {
      softmax(logits, probs);
      for (int v = 0; v < p.vocab_size; ++v)
        dlogits[static_cast<size_t>(v)] = (v == y ? 1.0 : 0.0) - probs[static_cast<size_t>(v)];
      backward(p, ctx, hidden, dlogits, *grad);
    }
  }
  return total;
}

namespace {

constexpr char kMagic[8] = {'C', 'H', 'A', 'R', 'T', 'R', 'L', '1'};

void write_u32(std::ofstream& out, uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ofstream& out, uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_doubles(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}
uint32_t read_u32(std::ifstream& in) {
  uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
uint64_t read_u64(std::ifstream& in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
void read_doubles(std::ifstream& in, std::vector<double>& v) {
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

void save_checkpoint(const std::string& path, const PolicyParams& p, uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, static_cast<uint32_t>(p.vocab_size));
  write_u32(out, static_cast<uint32_t>(p.input_dim));
  write_u32(out, static_cast<uint32_t>(p.hidden_dim));
  write_u32(out, static_cast<uint32_t>(kHistoryTokens));
  write_u64(out, seed);
  write_doubles(out, p.w1);
  write_doubles(out, p.b1);
  write_doubles(out, p.w2);
  write_doubles(out, p.b2);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("'" + path + "' is not a policy checkpoint");
  Checkpoint ck;
  ck.params.vocab_size = static_cast<int>(read_u32(in));
  ck.params.input_dim = static_cast<int>(read_u32(in));
  ck.params.hidden_dim = static_cast<int>(read_u32(in));
  uint32_t history = read_u32(in);
  ck.seed = read_u64(in);
  if (ck.params.vocab_size != kVocabSize || ck.params.input_dim != feature_dim() ||
      history != kHistoryTokens)
    throw std::runtime_error("'" + path + "' has incompatible dimensions");
  ck.params.w1.resize(static_cast<size_t>(ck.params.hidden_dim) * ck.params.input_dim);
  ck.params.b1.resize(static_cast<size_t>(ck.params.hidden_dim));
  ck.params.w2.resize(static_cast<size_t>(ck.params.vocab_size) * ck.params.hidden_dim);
  ck.params.b2.resize(static_cast<size_t>(ck.params.vocab_size));
  read_doubles(in, ck.params.w1);
  read_doubles(in, ck.params.b1);
  read_doubles(in, ck.params.w2);
  read_doubles(in, ck.params.b2);
  if (!in) throw std::runtime_error("truncated checkpoint '" + path + "'");
  return ck;
}

}  // namespace chartrl
