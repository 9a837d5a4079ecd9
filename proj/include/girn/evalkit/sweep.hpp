#pragma once
// Noise-robustness sweep: per spec row, `repetitions` seeded evaluations of a
// checkpointed model over noise-injected copies of the raw clips, averaged.

#include <sstream>
#include <vector>

#include "girn/evalkit/metrics.hpp"
#include "girn/evalkit/noise.hpp"
#include "girn/model/forward.hpp"
#include "girn/numcore/reduce.hpp"
#include "girn/skeldata/preprocess.hpp"

namespace girn::evalkit {

struct SweepRow {
  NoiseSpec spec;
  std::vector<double> repetition_accuracy;
  double mean_accuracy = 0.0;
};

// Evaluates group accuracy on preprocessed samples.
inline double clean_accuracy(const model::GirnParams& params,
                             const std::vector<data::GroupSample>& preprocessed,
                             std::size_t threads = num::default_thread_count()) {
  std::vector<double> hits(preprocessed.size(), 0.0);
  num::parallel_for(preprocessed.size(), threads, [&](std::size_t i) {
    hits[i] = model::predict(preprocessed[i], params).group_label ==
                      preprocessed[i].group_label
                  ? 1.0
                  : 0.0;
  });
  return num::tree_sum_scalars(hits) / static_cast<double>(preprocessed.size());
}

// The sweep operates on raw (pixel-space) clips: noise lands on the annotated
// ball coordinates, then the standard preprocessing runs.
inline std::vector<SweepRow> noise_sweep(const model::GirnParams& params,
                                         const std::vector<data::GroupSample>& raw_clips,
                                         const std::vector<NoiseSpec>& specs,
                                         std::size_t threads = num::default_thread_count(),
                                         int max_gap = data::kDefaultMaxGap) {
  if (!params.config.type_active(model::RelationType::object)) {
    throw std::invalid_argument(
        "noise_sweep: the checkpointed model does not use the object relation type; "
        "ball-noise sweeps need an object-aware model");
  }
  if (raw_clips.empty()) throw std::invalid_argument("noise_sweep: empty dataset");
  for (const data::GroupSample& s : raw_clips) {
    if (!s.object) throw pairing::MissingObjectTrack();
  }

  std::vector<SweepRow> rows;
  for (std::size_t row = 0; row < specs.size(); ++row) {
    const NoiseSpec& spec = specs[row];
    SweepRow out;
    out.spec = spec;
    out.repetition_accuracy.assign(spec.repetitions, 0.0);
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      num::RngStream rep_rng = num::RngStream(spec.seed).derive(row).derive(rep);
      std::vector<double> hits(raw_clips.size(), 0.0);
      // each sample gets its own substream so parallel order cannot matter
      std::vector<num::RngStream> sample_rng;
      sample_rng.reserve(raw_clips.size());
      for (std::size_t i = 0; i < raw_clips.size(); ++i) {
        sample_rng.push_back(rep_rng.derive(i));
      }
      num::parallel_for(raw_clips.size(), threads, [&](std::size_t i) {
        data::GroupSample noisy = raw_clips[i];
        noisy.object = apply_noise(*noisy.object, spec, noisy.res_width, noisy.res_height,
                                   sample_rng[i]);
        if (spec.kind == NoiseSpec::Kind::dropout && spec.impute_dropped) {
          noisy.object = data::interpolate_gaps(*noisy.object, max_gap);
        }
        const data::GroupSample ready = data::preprocess_clip(noisy, max_gap);
        hits[i] = model::predict(ready, params).group_label == ready.group_label ? 1.0 : 0.0;
      });
      out.repetition_accuracy[rep] =
          num::tree_sum_scalars(hits) / static_cast<double>(raw_clips.size());
    }
    out.mean_accuracy = num::tree_sum_scalars(out.repetition_accuracy) /
                        static_cast<double>(spec.repetitions);
    rows.push_back(std::move(out));
  }
  return rows;
}

// Long-format CSV: kind,parameter,repetition,accuracy,mean_accuracy.
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "kind,parameter,repetition,accuracy,mean_accuracy\n";
  for (const SweepRow& row : rows) {
    for (std::size_t rep = 0; rep < row.repetition_accuracy.size(); ++rep) {
      out << row.spec.kind_name() << "," << row.spec.parameter() << "," << rep << ","
          << row.repetition_accuracy[rep] << "," << row.mean_accuracy << "\n";
    }
  }
  return out.str();
}

}  // namespace girn::evalkit
