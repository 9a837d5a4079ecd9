#pragma once
// The GIRN forward pass over the gradient tape: relation modules with
// per-type average pooling, relation concatenation, group and individual
// attention pooling, inference heads, and the combined loss.

#include <iostream>
#include <optional>
#include <vector>

#include "girn/model/config.hpp"
#include "girn/model/params.hpp"
#include "girn/numcore/mathfn.hpp"
#include "girn/numcore/tape.hpp"
#include "girn/pairing/pairing.hpp"
#include "girn/skeldata/types.hpp"

namespace girn::model {

struct BoundGirn {
  const ModelConfig* cfg = nullptr;
  std::array<std::vector<num::BoundDense>, 3> g;  // indexed by RelationType
  num::Var W_GK, W_GQ, W_IK, W_IQ;
  std::vector<num::BoundDense> f_group;
  std::vector<num::BoundDense> f_individual;
};

inline BoundGirn bind_girn(num::Tape& tape, const GirnParams& params, bool needs_grad) {
  BoundGirn b;
  b.cfg = &params.config;
  for (const RelationModuleParams& m : params.relations) {
    std::vector<num::BoundDense>& dst = b.g[static_cast<int>(m.type_tag)];
    for (const num::DenseLayer& l : m.layers) dst.push_back(num::bind_dense(tape, l, needs_grad));
  }
  if (params.attention) {
    const AttentionParams& a = *params.attention;
    b.W_GK = tape.leaf(a.W_GK, needs_grad);
    b.W_GQ = tape.leaf(a.W_GQ, needs_grad);
    b.W_IK = tape.leaf(a.W_IK, needs_grad);
    b.W_IQ = tape.leaf(a.W_IQ, needs_grad);
  }
  for (const num::DenseLayer& l : params.f_group.layers) {
    b.f_group.push_back(num::bind_dense(tape, l, needs_grad));
  }
  if (params.f_individual) {
    for (const num::DenseLayer& l : params.f_individual->layers) {
      b.f_individual.push_back(num::bind_dense(tape, l, needs_grad));
    }
  }
  return b;
}

// Mean over the per-pair g outputs; an empty pair set pools to the zero
// vector so downstream widths stay fixed.
inline num::Var relation_type_forward(num::Tape& tape,
                                      const std::vector<num::BoundDense>& g,
                                      const std::vector<num::Var>& pair_features,
                                      std::size_t out_dim) {
  if (pair_features.empty()) return tape.zeros(out_dim);
  std::vector<num::Var> outs;
  outs.reserve(pair_features.size());
  for (num::Var f : pair_features) {
    outs.push_back(num::mlp_forward(tape, g, f, 0.0, false, nullptr));  // no dropout at g
  }
  return outs.size() == 1 ? outs[0] : tape.mean(outs);
}

// Fixed-order concatenation of the active per-type blocks.
inline num::Var concat_relations(num::Tape& tape, const std::vector<num::Var>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("concat_relations: no active types");
  return blocks.size() == 1 ? blocks[0] : tape.concat(blocks);
}

struct AttentionPool {
  num::Var weights;
  num::Var pooled;
};

// a_p = W_GQ . tanh(W_GK R_p); softmax over present persons; weighted average.
inline AttentionPool group_attention_pool(num::Tape& tape, const std::vector<num::Var>& rs,
                                          num::Var w_gq, num::Var w_gk, std::size_t dim,
                                          double key_dropout = 0.0, bool training = false,
                                          num::RngStream* rng = nullptr) {
  if (rs.empty()) throw std::invalid_argument("group_attention_pool: no persons");
  std::vector<num::Var> scores;
  scores.reserve(rs.size());
  for (num::Var r : rs) {
    num::Var key = tape.tanh_op(tape.matvec(w_gk, r, dim));
    if (training && key_dropout > 0.0) key = tape.dropout(key, key_dropout, *rng);
    scores.push_back(tape.dot(w_gq, key));
  }
  AttentionPool out;
  out.weights = tape.softmax(tape.stack(scores));
  out.pooled = tape.weighted_sum(out.weights, rs);
  return out;
}

// key_p = tanh(W_IK R_p), shared across reference persons.
inline std::vector<num::Var> individual_keys(num::Tape& tape, const std::vector<num::Var>& rs,
                                             num::Var w_ik, std::size_t dim,
                                             double key_dropout = 0.0, bool training = false,
                                             num::RngStream* rng = nullptr) {
  std::vector<num::Var> keys;
  keys.reserve(rs.size());
  for (num::Var r : rs) {
    num::Var key = tape.tanh_op(tape.matvec(w_ik, r, dim));
    if (training && key_dropout > 0.0) key = tape.dropout(key, key_dropout, *rng);
    keys.push_back(key);
  }
  return keys;
}

// query_q = W_IQ key_q; a_{p,q} = query_q . key_p over p != q; softmax over
// the others; weighted average of their relation vectors. A single-person
// sample has no others: the pool is the zero vector.
inline num::Var individual_attention_pool(num::Tape& tape, const std::vector<num::Var>& rs,
                                          const std::vector<num::Var>& keys,
                                          std::size_t reference, num::Var w_iq,
                                          std::size_t dim) {
  if (rs.size() != keys.size()) {
    throw std::invalid_argument("individual_attention_pool: keys/persons mismatch");
  }
  if (rs.size() == 1) {
    std::clog << "girn: single-person sample, pooled other-relations set to zero\n";
    return tape.zeros(dim);
  }
  num::Var query = tape.matvec(w_iq, keys[reference], dim);
  std::vector<num::Var> scores;
  std::vector<num::Var> others;
  for (std::size_t p = 0; p < rs.size(); ++p) {
    if (p == reference) continue;
    scores.push_back(tape.dot(query, keys[p]));
    others.push_back(rs[p]);
  }
  num::Var weights = tape.softmax(tape.stack(scores));
  return tape.weighted_sum(weights, others);
}

// Mean over the others (the attention-off path of Eq-style pooling).
inline num::Var mean_of_others(num::Tape& tape, const std::vector<num::Var>& rs,
                               std::size_t reference, std::size_t dim) {
  if (rs.size() == 1) {
    std::clog << "girn: single-person sample, pooled other-relations set to zero\n";
    return tape.zeros(dim);
  }
  std::vector<num::Var> others;
  for (std::size_t p = 0; p < rs.size(); ++p) {
    if (p != reference) others.push_back(rs[p]);
  }
  return tape.mean(others);
}

struct ForwardOptions {
  bool training = false;
  num::RngStream* dropout_rng = nullptr;
  bool with_loss = false;
  const std::vector<double>* group_weights = nullptr;   // defaults to ones
  const std::vector<double>* action_weights = nullptr;  // defaults to ones
};

struct GirnOutput {
  num::Var group_logits;
  num::Var group_probs;
  std::vector<num::Var> person_probs;   // one per person when heads are on
  std::vector<double> group_attention;  // pooling weights over persons
  num::Var loss;
  double loss_value = 0.0;
  double group_ce = 0.0;            // unscaled group cross-entropy
  double individual_ce_sum = 0.0;   // unscaled sum over labeled persons
  int labeled_persons = 0;
};

inline GirnOutput girn_forward(num::Tape& tape, const data::GroupSample& sample,
                               const BoundGirn& bound, const ForwardOptions& opt = {}) {
  const ModelConfig& cfg = *bound.cfg;
  const std::size_t n_persons = sample.persons.size();
  if (n_persons == 0) throw std::invalid_argument("girn_forward: no persons in sample");
  if (sample.frames() != cfg.frames) {
    throw std::invalid_argument("girn_forward: sample has " +
                                std::to_string(sample.frames()) + " frames, config wants " +
                                std::to_string(cfg.frames));
  }
  if (opt.training && (cfg.dropout_f > 0.0 || cfg.dropout_attention > 0.0) &&
      opt.dropout_rng == nullptr) {
    throw std::invalid_argument("girn_forward: training mode needs a dropout rng");
  }

  const std::size_t rd = cfg.relation_dim();
  std::optional<pairing::CourtAssignment> assignment;
  if (cfg.type_active(RelationType::inter)) {
    assignment = pairing::assign_positions(sample);
  }

  // Per-person relation vectors.
  std::vector<num::Var> rs(n_persons);
  for (std::size_t p = 0; p < n_persons; ++p) {
    const data::PersonPose& person = sample.persons[p];
    std::vector<num::Var> blocks;

    if (cfg.type_active(RelationType::intra)) {
      const pairing::JointSubset subset =
          pairing::joint_subset(pairing::joint_subset_from_count(cfg.intra_joints));
      std::vector<num::Var> feats;
      for (const pairing::IntraPair& pr : pairing::enumerate_intra_pairs(subset)) {
        feats.push_back(tape.leaf(pairing::pair_features(
            pairing::subset_track(person, subset.members[pr.i], cfg.frames),
            pairing::subset_track(person, subset.members[pr.k], cfg.frames))));
      }
      blocks.push_back(relation_type_forward(
          tape, bound.g[static_cast<int>(RelationType::intra)], feats, rd));
    }

    if (cfg.type_active(RelationType::inter)) {
      const pairing::JointSubset subset =
          pairing::joint_subset(pairing::joint_subset_from_count(cfg.inter_joints));
      const std::vector<std::size_t> connected =
          pairing::connected_set(p, *assignment, cfg.connectivity);
      std::vector<num::Var> feats;
      for (const pairing::InterPair& pr : pairing::enumerate_inter_pairs(connected, subset)) {
        feats.push_back(tape.leaf(pairing::pair_features(
            pairing::subset_track(person, subset.members[pr.i], cfg.frames),
            pairing::subset_track(sample.persons[pr.other], subset.members[pr.k],
                                  cfg.frames))));
      }
      blocks.push_back(relation_type_forward(
          tape, bound.g[static_cast<int>(RelationType::inter)], feats, rd));
    }

    if (cfg.type_active(RelationType::object)) {
      const pairing::JointSubset subset =
          pairing::joint_subset(pairing::joint_subset_from_count(cfg.object_joints));
      std::vector<num::Var> feats;
      for (std::size_t i : pairing::enumerate_object_pairs(sample, subset)) {
        feats.push_back(tape.leaf(pairing::pair_features(
            pairing::subset_track(person, subset.members[i], cfg.frames), *sample.object)));
      }
      blocks.push_back(relation_type_forward(
          tape, bound.g[static_cast<int>(RelationType::object)], feats, rd));
    }

    rs[p] = concat_relations(tape, blocks);
  }

  GirnOutput out;
  const std::size_t dim = cfg.concat_dim();

  // Group branch.
  num::Var pooled;
  if (cfg.attention) {
    const AttentionPool pool =
        group_attention_pool(tape, rs, bound.W_GQ, bound.W_GK, dim, cfg.dropout_attention,
                             opt.training, opt.dropout_rng);
    pooled = pool.pooled;
    out.group_attention = tape.val(pool.weights);
  } else {
    pooled = rs.size() == 1 ? rs[0] : tape.mean(rs);
    out.group_attention.assign(n_persons, 1.0 / static_cast<double>(n_persons));
  }
  out.group_logits = num::mlp_forward(tape, bound.f_group, pooled, cfg.dropout_f,
                                      opt.training, opt.dropout_rng);
  out.group_probs = tape.softmax(out.group_logits);

  // Individual branch.
  if (cfg.individual_heads) {
    std::vector<num::Var> keys;
    if (cfg.attention) {
      keys = individual_keys(tape, rs, bound.W_IK, dim, cfg.dropout_attention, opt.training,
                             opt.dropout_rng);
    }
    out.person_probs.resize(n_persons);
    for (std::size_t q = 0; q < n_persons; ++q) {
      num::Var others = cfg.attention
                            ? individual_attention_pool(tape, rs, keys, q, bound.W_IQ, dim)
                            : mean_of_others(tape, rs, q, dim);
      num::Var logits = num::mlp_forward(tape, bound.f_individual,
                                         tape.concat({rs[q], others}), cfg.dropout_f,
                                         opt.training, opt.dropout_rng);
      out.person_probs[q] = tape.softmax(logits);
    }
  }

  // Combined loss per the paper's two-component objective: group CE scaled by
  // 1/N_G plus individual CE scaled by factor/(N_I * N) over labeled persons.
  if (opt.with_loss) {
    std::vector<double> ones_g, ones_i;
    const std::vector<double>* gw = opt.group_weights;
    const std::vector<double>* aw = opt.action_weights;
    if (!gw) {
      ones_g.assign(cfg.group_classes, 1.0);
      gw = &ones_g;
    }
    if (!aw) {
      ones_i.assign(cfg.action_classes, 1.0);
      aw = &ones_i;
    }
    if (static_cast<int>(gw->size()) != cfg.group_classes ||
        static_cast<int>(aw->size()) != cfg.action_classes) {
      throw std::invalid_argument("girn_forward: class weight size mismatch");
    }
    if (sample.group_label < 0 || sample.group_label >= cfg.group_classes) {
      throw std::invalid_argument("girn_forward: group label out of range");
    }

    std::vector<num::Var> terms;
    std::vector<double> coeffs;
    num::Var group_ce = tape.weighted_ce(out.group_probs,
                                         static_cast<std::size_t>(sample.group_label),
                                         (*gw)[sample.group_label]);
    out.group_ce = tape.val(group_ce)[0];
    terms.push_back(group_ce);
    coeffs.push_back(1.0 / static_cast<double>(cfg.group_classes));

    if (cfg.individual_heads) {
      std::vector<num::Var> person_terms;
      for (std::size_t q = 0; q < n_persons; ++q) {
        const std::optional<int>& label = sample.persons[q].action;
        if (!label) continue;
        if (*label < 0 || *label >= cfg.action_classes) {
          throw std::invalid_argument("girn_forward: action label out of range");
        }
        person_terms.push_back(tape.weighted_ce(out.person_probs[q],
                                                static_cast<std::size_t>(*label),
                                                (*aw)[*label]));
      }
      out.labeled_persons = static_cast<int>(person_terms.size());
      if (!person_terms.empty()) {
        const double coeff = cfg.individual_loss_factor /
                             (static_cast<double>(cfg.action_classes) *
                              static_cast<double>(person_terms.size()));
        for (num::Var t : person_terms) {
          out.individual_ce_sum += tape.val(t)[0];
          terms.push_back(t);
          coeffs.push_back(coeff);
        }
      }
    }
    out.loss = tape.linear_combination(terms, coeffs);
    out.loss_value = tape.val(out.loss)[0];
  }
  return out;
}

// Gradients of every bound block, flattened in param_refs order.
inline std::vector<double> collect_gradients(num::Tape& tape, const BoundGirn& bound) {
  std::vector<double> out;
  auto append = [&](num::Var v) {
    const std::vector<double>& g = tape.grad(v);
    out.insert(out.end(), g.begin(), g.end());
  };
  for (const std::vector<num::BoundDense>& layers : bound.g) {
    for (const num::BoundDense& l : layers) {
      append(l.w);
      append(l.b);
    }
  }
  if (bound.W_GK.valid()) {
    append(bound.W_GK);
    append(bound.W_GQ);
    append(bound.W_IK);
    append(bound.W_IQ);
  }
  for (const num::BoundDense& l : bound.f_group) {
    append(l.w);
    append(l.b);
  }
  for (const num::BoundDense& l : bound.f_individual) {
    append(l.w);
    append(l.b);
  }
  return out;
}

struct Prediction {
  int group_label = 0;
  std::vector<int> actions;             // empty when heads are off
  std::vector<double> attention_weights;
  std::vector<double> group_probs;
};

// Evaluation-mode prediction; argmax ties break toward the lowest index.
inline Prediction predict(const data::GroupSample& sample, const GirnParams& params) {
  num::Tape tape;
  const BoundGirn bound = bind_girn(tape, params, false);
  ForwardOptions opt;
  opt.training = false;
  opt.with_loss = false;
  const GirnOutput out = girn_forward(tape, sample, bound, opt);
  Prediction pred;
  pred.group_probs = tape.val(out.group_probs);
  pred.group_label = static_cast<int>(num::argmax(pred.group_probs));
  pred.attention_weights = out.group_attention;
  for (num::Var v : out.person_probs) {
    pred.actions.push_back(static_cast<int>(num::argmax(tape.val(v))));
  }
  return pred;
}

}  // namespace girn::model
