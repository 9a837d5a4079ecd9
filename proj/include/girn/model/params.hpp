#pragma once
// Trainable parameter containers and their ordered named-block enumeration.

#include <optional>
#include <string>
#include <vector>

#include "girn/model/config.hpp"
#include "girn/numcore/layers.hpp"
#include "girn/numcore/params.hpp"
#include "girn/numcore/rng.hpp"

namespace girn::model {

// One relation module g: four relu layers, one parameter set per type.
struct RelationModuleParams {
  RelationType type_tag = RelationType::intra;
  std::vector<num::DenseLayer> layers;
};

struct AttentionParams {
  std::size_t dim = 0;          // D, the concatenated relation width
  std::vector<double> W_GK;     // D x D
  std::vector<double> W_GQ;     // D
  std::vector<double> W_IK;     // D x D
  std::vector<double> W_IQ;     // D x D
};

// Hidden stack plus a plain affine output layer producing logits.
struct InferenceParams {
  std::vector<num::DenseLayer> layers;
};

struct GirnParams {
  ModelConfig config;
  std::vector<RelationModuleParams> relations;  // active types, enum order
  std::optional<AttentionParams> attention;
  InferenceParams f_group;
  std::optional<InferenceParams> f_individual;
};

inline RelationModuleParams init_relation_module(const ModelConfig& cfg, RelationType t,
                                                 num::RngStream& rng) {
  RelationModuleParams m;
  m.type_tag = t;
  std::size_t in = cfg.pair_input_width();
  for (std::size_t w : cfg.g_widths) {
    m.layers.push_back(num::make_dense(in, w, num::Activation::relu, cfg.init_std, rng));
    in = w;
  }
  return m;
}

inline InferenceParams init_inference_module(const ModelConfig& cfg, std::size_t in,
                                             int out_classes, num::RngStream& rng) {
  InferenceParams f;
  for (std::size_t w : cfg.f_widths) {
    f.layers.push_back(num::make_dense(in, w, num::Activation::relu, cfg.init_std, rng));
    in = w;
  }
  f.layers.push_back(num::make_dense(in, static_cast<std::size_t>(out_classes),
                                     num::Activation::identity, cfg.init_std, rng));
  return f;
}

inline AttentionParams init_attention(const ModelConfig& cfg, num::RngStream& rng) {
  AttentionParams a;
  a.dim = cfg.concat_dim();
  a.W_GK = num::init_truncated_normal({a.dim, a.dim}, 0.0, cfg.init_std, rng);
  a.W_GQ = num::init_truncated_normal({a.dim}, 0.0, cfg.init_std, rng);
  a.W_IK = num::init_truncated_normal({a.dim, a.dim}, 0.0, cfg.init_std, rng);
  a.W_IQ = num::init_truncated_normal({a.dim, a.dim}, 0.0, cfg.init_std, rng);
  return a;
}

inline GirnParams init_girn_params(const ModelConfig& cfg, num::RngStream& rng) {
  cfg.validate();
  GirnParams p;
  p.config = cfg;
  for (RelationType t : {RelationType::intra, RelationType::inter, RelationType::object}) {
    if (cfg.type_active(t)) p.relations.push_back(init_relation_module(cfg, t, rng));
  }
  if (cfg.attention) p.attention = init_attention(cfg, rng);
  p.f_group = init_inference_module(cfg, cfg.concat_dim(), cfg.group_classes, rng);
  if (cfg.individual_heads) {
    p.f_individual =
        init_inference_module(cfg, 2 * cfg.concat_dim(), cfg.action_classes, rng);
  }
  return p;
}

namespace detail {

inline void append_mlp_refs(std::vector<num::ParamRef>& out, const std::string& prefix,
                            std::vector<num::DenseLayer>& layers) {
  for (std::size_t k = 0; k < layers.size(); ++k) {
    num::DenseLayer& l = layers[k];
    const std::string base = prefix + ".l" + std::to_string(k);
    out.push_back({base + ".W", {l.out, l.in}, &l.weights});
    out.push_back({base + ".b", {l.out}, &l.bias});
  }
}

}  // namespace detail

// Stable block order: relation modules (enum order), attention, f_G, f_I.
inline std::vector<num::ParamRef> param_refs(GirnParams& p) {
  std::vector<num::ParamRef> out;
  for (RelationModuleParams& m : p.relations) {
    detail::append_mlp_refs(out, std::string("g_") + relation_type_name(m.type_tag),
                            m.layers);
  }
  if (p.attention) {
    AttentionParams& a = *p.attention;
    out.push_back({"att.W_GK", {a.dim, a.dim}, &a.W_GK});
    out.push_back({"att.W_GQ", {a.dim}, &a.W_GQ});
    out.push_back({"att.W_IK", {a.dim, a.dim}, &a.W_IK});
    out.push_back({"att.W_IQ", {a.dim, a.dim}, &a.W_IQ});
  }
  detail::append_mlp_refs(out, "f_G", p.f_group.layers);
  if (p.f_individual) detail::append_mlp_refs(out, "f_I", p.f_individual->layers);
  num::validate_refs(out);
  return out;
}

inline const RelationModuleParams& relation_module(const GirnParams& p, RelationType t) {
  for (const RelationModuleParams& m : p.relations) {
    if (m.type_tag == t) return m;
  }
  throw std::logic_error("relation module not active");
}

}  // namespace girn::model
