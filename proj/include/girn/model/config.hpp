#pragma once
// Model configuration: active relationship types, attention and individual
// head toggles, connectivity, joint subsets, and layer widths. Widths default
// to the full-scale values; tests and desk-scale runs override them.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "girn/pairing/pairing.hpp"
#include "girn/skeldata/types.hpp"

namespace girn::model {

enum class RelationType { intra = 0, inter = 1, object = 2 };

inline const char* relation_type_name(RelationType t) {
  switch (t) {
    case RelationType::intra: return "intra";
    case RelationType::inter: return "inter";
    case RelationType::object: return "object";
  }
  return "?";
}

inline RelationType relation_type_from_name(const std::string& s) {
  if (s == "intra") return RelationType::intra;
  if (s == "inter") return RelationType::inter;
  if (s == "object") return RelationType::object;
  throw std::invalid_argument("unknown relation type '" + s + "'");
}

struct ModelConfig {
  std::array<bool, 3> types = {true, true, true};  // indexed by RelationType
  bool attention = true;
  bool individual_heads = true;
  pairing::ConnectivityStrategy connectivity = pairing::ConnectivityStrategy::dense;
  int intra_joints = 7;
  int inter_joints = 4;
  int object_joints = 7;
  std::vector<std::size_t> g_widths = {1000, 1000, 1000, 500};
  std::vector<std::size_t> f_widths = {500, 250, 250};
  std::size_t frames = 21;
  int group_classes = data::kGroupClassCount;
  int action_classes = data::kActionClassCount;
  double dropout_f = 0.25;
  double dropout_attention = 0.25;
  double init_std = 0.045;
  double individual_loss_factor = 2.0;

  bool type_active(RelationType t) const { return types[static_cast<int>(t)]; }

  int active_type_count() const {
    int n = 0;
    for (bool b : types) n += b ? 1 : 0;
    return n;
  }

  std::size_t relation_dim() const { return g_widths.back(); }
  std::size_t concat_dim() const { return relation_dim() * active_type_count(); }
  std::size_t pair_input_width() const { return pairing::pair_feature_width(frames); }

  int joints_for(RelationType t) const {
    switch (t) {
      case RelationType::intra: return intra_joints;
      case RelationType::inter: return inter_joints;
      case RelationType::object: return object_joints;
    }
    return 0;
  }

  void validate() const {
    if (active_type_count() == 0) {
      throw std::invalid_argument("ModelConfig: at least one relation type required");
    }
    if (g_widths.empty() || f_widths.empty()) {
      throw std::invalid_argument("ModelConfig: empty layer widths");
    }
    if (frames < 2) throw std::invalid_argument("ModelConfig: frames must be >= 2");
    for (int j : {intra_joints, inter_joints, object_joints}) {
      pairing::joint_subset_from_count(j);
    }
    if (group_classes < 2 || action_classes < 2) {
      throw std::invalid_argument("ModelConfig: class counts must be >= 2");
    }
  }
};

}  // namespace girn::model
