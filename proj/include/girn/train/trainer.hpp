#pragma once
// Training harness: seed-deterministic epochs with mirroring augmentation,
// per-type pretraining followed by combined fine-tuning, early stopping on
// validation loss, and append-only run logs.
//
// Determinism contract: every random decision derives from (seed, phase,
// epoch, sample index), per-sample gradients are computed on independent
// tapes and combined with a pairwise tree in sample order, so results do not
// depend on thread count.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "girn/model/forward.hpp"
#include "girn/model/params.hpp"
#include "girn/numcore/adam.hpp"
#include "girn/numcore/reduce.hpp"
#include "girn/skeldata/preprocess.hpp"
#include "girn/train/weights.hpp"

namespace girn::train {

struct TrainConfig {
  double lr = 1e-4;
  int batch_size = 16;
  int max_epochs = 30;
  int patience = 10;
  std::uint64_t seed = 1;
  double mirror_prob = 0.5;
  std::size_t threads = num::default_thread_count();
  bool action_class_weights = true;

  void validate() const {
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size >= 1");
    if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs >= 1");
    if (!(mirror_prob >= 0.0 && mirror_prob <= 1.0)) {
      throw std::invalid_argument("TrainConfig: mirror_prob in [0, 1]");
    }
  }
};

struct EpochStats {
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct RunLogEntry {
  std::string phase;
  int epoch = 0;
  EpochStats stats;
  double wall_seconds = 0.0;
};

using RunLog = std::vector<RunLogEntry>;

// Observer for per-sample training events (used by tests to check the
// mirroring contract).
struct SampleEvent {
  std::size_t dataset_index = 0;
  bool mirrored = false;
  int label_used = 0;
};
using SampleObserver = std::function<void(const SampleEvent&)>;

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
};

struct LossWeights {
  std::vector<double> group;   // empty = unit weights
  std::vector<double> action;  // empty = unit weights
};

namespace detail {

inline model::ForwardOptions eval_options(const LossWeights& w) {
  model::ForwardOptions opt;
  opt.with_loss = true;
  if (!w.group.empty()) opt.group_weights = &w.group;
  if (!w.action.empty()) opt.action_weights = &w.action;
  return opt;
}

inline std::uint64_t phase_key(const std::string& phase) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : phase) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

// Evaluation-mode loss and group accuracy over a split.
inline EvalResult evaluate(const model::GirnParams& params,
                           const std::vector<data::GroupSample>& samples,
                           const LossWeights& weights = {},
                           std::size_t threads = num::default_thread_count()) {
  if (samples.empty()) throw std::invalid_argument("evaluate: empty split");
  std::vector<double> losses(samples.size(), 0.0);
  std::vector<double> correct(samples.size(), 0.0);
  num::parallel_for(samples.size(), threads, [&](std::size_t i) {
    num::Tape tape;
    const model::BoundGirn bound = bind_girn(tape, params, false);
    const model::GirnOutput out =
        girn_forward(tape, samples[i], bound, detail::eval_options(weights));
    losses[i] = out.loss_value;
    correct[i] =
        num::argmax(tape.val(out.group_probs)) == static_cast<std::size_t>(samples[i].group_label)
            ? 1.0
            : 0.0;
  });
  EvalResult r;
  r.loss = num::tree_sum_scalars(losses) / static_cast<double>(samples.size());
  r.accuracy = num::tree_sum_scalars(correct) / static_cast<double>(samples.size());
  return r;
}

// One shuffled pass: mirroring per sample, Adam step per batch. Returns the
// running train loss/accuracy seen during the pass.
inline EpochStats train_epoch(model::GirnParams& params, num::OptimizerState& opt_state,
                              const std::vector<data::GroupSample>& train_set,
                              const TrainConfig& cfg, const std::string& phase, int epoch,
                              const LossWeights& weights = {},
                              const SampleObserver& observer = nullptr) {
  cfg.validate();
  if (train_set.empty()) throw std::invalid_argument("train_epoch: empty train set");
  const std::vector<num::ParamRef> refs = param_refs(params);
  const std::size_t n_params = num::total_size(refs);

  num::RngStream epoch_rng =
      num::RngStream(cfg.seed).derive(detail::phase_key(phase)).derive(
          static_cast<std::uint64_t>(epoch));

  // shuffle, then draw the per-sample mirror decisions in shuffled order
  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[epoch_rng.below(i)]);
  }
  std::vector<std::uint8_t> mirrored(train_set.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    mirrored[k] = epoch_rng.bernoulli(cfg.mirror_prob) ? 1 : 0;
  }

  double loss_sum = 0.0;
  double correct = 0.0;
  for (std::size_t start = 0; start < order.size();
       start += static_cast<std::size_t>(cfg.batch_size)) {
    const std::size_t stop =
        std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
    const std::size_t n = stop - start;
    std::vector<std::vector<double>> grads(n);
    std::vector<double> losses(n, 0.0);
    std::vector<double> hits(n, 0.0);

    num::parallel_for(n, cfg.threads, [&](std::size_t k) {
      const std::size_t di = order[start + k];
      data::GroupSample sample = train_set[di];
      if (mirrored[start + k]) sample = data::mirror(sample);
      if (observer) observer({di, mirrored[start + k] != 0, sample.group_label});

      num::RngStream dropout_rng = num::RngStream(cfg.seed)
                                       .derive(detail::phase_key(phase + "/dropout"))
                                       .derive(static_cast<std::uint64_t>(epoch))
                                       .derive(di);
      num::Tape tape;
      const model::BoundGirn bound = bind_girn(tape, params, true);
      model::ForwardOptions fwd = detail::eval_options(weights);
      fwd.training = true;
      fwd.dropout_rng = &dropout_rng;
      const model::GirnOutput out = girn_forward(tape, sample, bound, fwd);
      if (!std::isfinite(out.loss_value)) {
        double norm = 0.0;
        for (const num::ParamRef& r : refs) {
          for (double v : *r.values) norm += v * v;
        }
        throw std::runtime_error("train_epoch: non-finite loss at sample index " +
                                 std::to_string(di) + " (|params| = " +
                                 std::to_string(std::sqrt(norm)) + ")");
      }
      tape.backward(out.loss);
      grads[k] = collect_gradients(tape, bound);
      losses[k] = out.loss_value;
      hits[k] = num::argmax(tape.val(out.group_probs)) ==
                        static_cast<std::size_t>(sample.group_label)
                    ? 1.0
                    : 0.0;
    });

    std::vector<double> grad = num::tree_sum(std::move(grads));
    if (grad.size() != n_params) throw std::logic_error("train_epoch: gradient size drift");
    const double inv = 1.0 / static_cast<double>(n);
    for (double& g : grad) g *= inv;
    num::adam_step(refs, grad, opt_state);
    loss_sum += num::tree_sum_scalars(losses);
    correct += num::tree_sum_scalars(hits);
  }

  EpochStats stats;
  stats.train_loss = loss_sum / static_cast<double>(order.size());
  stats.train_accuracy = correct / static_cast<double>(order.size());
  return stats;
}

struct FitResult {
  model::GirnParams best;
  RunLog log;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  double best_val_accuracy = 0.0;
};

// Epoch loop with best-checkpoint tracking and early stopping on val loss.
inline FitResult fit(model::GirnParams params,
                     const std::vector<data::GroupSample>& train_set,
                     const std::vector<data::GroupSample>& val_set, const TrainConfig& cfg,
                     const std::string& phase, const LossWeights& weights = {},
                     RunLog* log_out = nullptr, const SampleObserver& observer = nullptr) {
  cfg.validate();
  const std::vector<num::ParamRef> refs = param_refs(params);
  num::OptimizerState opt_state = num::make_optimizer_state(num::total_size(refs), cfg.lr);

  FitResult result;
  result.best = params;
  result.best_val_loss = std::numeric_limits<double>::infinity();

  int since_best = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochStats stats = train_epoch(params, opt_state, train_set, cfg, phase, epoch, weights,
                                   observer);
    const EvalResult val = evaluate(params, val_set, weights, cfg.threads);
    stats.val_loss = val.loss;
    stats.val_accuracy = val.accuracy;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    result.log.push_back({phase, epoch, stats, wall});
    if (log_out) log_out->push_back(result.log.back());

    if (val.loss < result.best_val_loss) {
      result.best_val_loss = val.loss;
      result.best_val_accuracy = val.accuracy;
      result.best_epoch = epoch;
      result.best = params;
      since_best = 0;
    } else {
      ++since_best;
      if (since_best >= cfg.patience) break;
    }
  }
  return result;
}

inline LossWeights make_loss_weights(const model::ModelConfig& mcfg,
                                     const std::vector<data::GroupSample>& train_set,
                                     bool action_weights) {
  LossWeights w;
  if (action_weights && mcfg.individual_heads) {
    w.action = compute_class_weights(action_histogram(train_set, mcfg.action_classes));
  }
  return w;
}

// Trains a single-type GIRN (that type's g plus fresh attention and heads);
// the object type requires ball tracks on every sample.
inline FitResult pretrain_type(model::RelationType type, const model::ModelConfig& base,
                               const std::vector<data::GroupSample>& train_set,
                               const std::vector<data::GroupSample>& val_set,
                               const TrainConfig& cfg, RunLog* log_out = nullptr) {
  model::ModelConfig mcfg = base;
  mcfg.types = {false, false, false};
  mcfg.types[static_cast<int>(type)] = true;
  mcfg.validate();
  if (type == model::RelationType::object) {
    for (const data::GroupSample& s : train_set) {
      if (!s.object) throw pairing::MissingObjectTrack();
    }
  }
  const std::string phase = std::string("pretrain-") + relation_type_name(type);
  num::RngStream init_rng =
      num::RngStream(cfg.seed).derive(detail::phase_key(phase + "/init"));
  model::GirnParams params = init_girn_params(mcfg, init_rng);
  const LossWeights weights = make_loss_weights(mcfg, train_set, cfg.action_class_weights);
  return fit(std::move(params), train_set, val_set, cfg, phase, weights, log_out);
}

// Fresh attention and heads over the concatenated relations; g parameters
// start from the per-type pretrained modules and keep training jointly.
inline FitResult finetune_combined(const std::vector<model::GirnParams>& pretrained,
                                   const model::ModelConfig& base,
                                   const std::vector<data::GroupSample>& train_set,
                                   const std::vector<data::GroupSample>& val_set,
                                   const TrainConfig& cfg, RunLog* log_out = nullptr) {
  base.validate();
  num::RngStream init_rng =
      num::RngStream(cfg.seed).derive(detail::phase_key("finetune/init"));
  model::GirnParams params = init_girn_params(base, init_rng);
  for (model::RelationModuleParams& m : params.relations) {
    bool found = false;
    for (const model::GirnParams& p : pretrained) {
      for (const model::RelationModuleParams& src : p.relations) {
        if (src.type_tag == m.type_tag) {
          if (src.layers.size() != m.layers.size()) {
            throw std::runtime_error("finetune_combined: g width mismatch for type " +
                                     std::string(relation_type_name(m.type_tag)));
          }
          for (std::size_t k = 0; k < m.layers.size(); ++k) {
            if (src.layers[k].in != m.layers[k].in || src.layers[k].out != m.layers[k].out) {
              throw std::runtime_error("finetune_combined: g layer shape mismatch");
            }
          }
          m = src;
          found = true;
        }
      }
    }
    if (!found) {
      throw std::runtime_error(std::string("finetune_combined: no pretrained module for ") +
                               relation_type_name(m.type_tag));
    }
  }
  const LossWeights weights = make_loss_weights(base, train_set, cfg.action_class_weights);
  return fit(std::move(params), train_set, val_set, cfg, "finetune", weights, log_out);
}

}  // namespace girn::train
