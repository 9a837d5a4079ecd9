#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "girn/evalkit/metrics.hpp"
#include "girn/evalkit/noise.hpp"
#include "girn/evalkit/sweep.hpp"
#include "girn/skeldata/synth.hpp"
#include "helpers.hpp"

using namespace girn;
using namespace girn::evalkit;

TEST_CASE("accuracy") {
  REQUIRE(accuracy({1, 2, 3}, {1, 2, 3}) == 1.0);
  REQUIRE(accuracy({1, 2, 3}, {0, 0, 0}) == 0.0);
  REQUIRE(accuracy({1, 2, 3, 4}, {1, 2, 3, 0}) == 0.75);
  REQUIRE_THROWS(accuracy({}, {}));
  REQUIRE_THROWS(accuracy({1}, {1, 2}));
}

TEST_CASE("confusion matrix") {
  const std::vector<std::string> names{"a", "b", "c"};

  SECTION("perfect predictions give a diagonal matrix") {
    const ConfusionMatrix m = confusion({0, 1, 2, 1}, {0, 1, 2, 1}, names);
    REQUIRE(m.trace() == 4);
    REQUIRE(m.total() == 4);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (i != j) REQUIRE(m.counts[i][j] == 0);
      }
    }
  }

  SECTION("trace over total equals accuracy and row sums match class counts") {
    const std::vector<int> preds{0, 1, 1, 2, 0, 2, 2};
    const std::vector<int> labels{0, 1, 2, 2, 1, 2, 0};
    const ConfusionMatrix m = confusion(preds, labels, names);
    REQUIRE(m.accuracy() == Catch::Approx(accuracy(preds, labels)));
    std::vector<std::size_t> row_sums(3, 0);
    for (int l : labels) row_sums[l]++;
    for (std::size_t i = 0; i < 3; ++i) {
      std::size_t sum = 0;
      for (std::size_t j = 0; j < 3; ++j) sum += m.counts[i][j];
      REQUIRE(sum == row_sums[i]);
    }
    // row rates sum to one on non-empty rows
    for (const auto& row : m.row_rates()) {
      double s = 0.0;
      for (double r : row) s += r;
      REQUIRE((s == Catch::Approx(1.0) || s == 0.0));
    }
  }

  SECTION("invalid class indices are rejected") {
    REQUIRE_THROWS(confusion({3}, {0}, names));
    REQUIRE_THROWS(confusion({0}, {-1}, names));
  }

  SECTION("csv carries names on both axes") {
    const ConfusionMatrix m = confusion({0, 1}, {0, 1}, names);
    const std::string csv = m.to_csv();
    REQUIRE(csv.find("truth\\prediction,a,b,c") == 0);
    REQUIRE(csv.find("\na,1,0,0") != std::string::npos);
  }
}

TEST_CASE("displacement noise") {
  data::ObjectTrack track(5000);
  for (std::size_t t = 0; t < track.frames(); ++t) track.set(t, 640.0, 360.0);

  SECTION("std 0 is the exact identity") {
    num::RngStream rng(1);
    REQUIRE(displacement_noise(track, 0.0, 1280, 720, rng) == track);
  }

  SECTION("empirical std matches the target within 5%") {
    num::RngStream rng(2);
    const data::ObjectTrack noisy = displacement_noise(track, 60.0, 1280, 720, rng);
    double sq = 0.0, sum = 0.0;
    const std::size_t n = 2 * track.frames();
    for (std::size_t t = 0; t < track.frames(); ++t) {
      const double dx = noisy.x(t) - track.x(t);
      const double dy = noisy.y(t) - track.y(t);
      sq += dx * dx + dy * dy;
      sum += dx + dy;
    }
    const double mean = sum / n;
    const double std_emp = std::sqrt(sq / n - mean * mean);
    REQUIRE(std_emp == Catch::Approx(60.0).epsilon(0.05));
  }

  SECTION("1080p clips scale the std by 1.5") {
    num::RngStream rng(3);
    const data::ObjectTrack noisy = displacement_noise(track, 60.0, 1920, 1080, rng);
    double sq = 0.0, sum = 0.0;
    const std::size_t n = 2 * track.frames();
    for (std::size_t t = 0; t < track.frames(); ++t) {
      const double dx = noisy.x(t) - track.x(t);
      const double dy = noisy.y(t) - track.y(t);
      sq += dx * dx + dy * dy;
      sum += dx + dy;
    }
    const double mean = sum / n;
    const double std_emp = std::sqrt(sq / n - mean * mean);
    REQUIRE(std_emp == Catch::Approx(90.0).epsilon(0.05));
  }

  SECTION("invalid frames stay untouched") {
    data::ObjectTrack gappy = track;
    gappy.invalidate(7);
    num::RngStream rng(4);
    const data::ObjectTrack noisy = displacement_noise(gappy, 60.0, 1280, 720, rng);
    REQUIRE_FALSE(noisy.is_valid(7));
    REQUIRE(noisy.x(7) == 0.0);
  }
}

TEST_CASE("coordinate dropout") {
  data::ObjectTrack track(10000);
  for (std::size_t t = 0; t < track.frames(); ++t) track.set(t, 100.0 + t, 50.0);

  SECTION("chance 0 is the identity") {
    num::RngStream rng(5);
    REQUIRE(coordinate_dropout(track, 0.0, rng) == track);
  }

  SECTION("chance 1 zeroes every frame and clears validity") {
    num::RngStream rng(6);
    const data::ObjectTrack dropped = coordinate_dropout(track, 1.0, rng);
    for (std::size_t t = 0; t < dropped.frames(); ++t) {
      REQUIRE_FALSE(dropped.is_valid(t));
      REQUIRE(dropped.x(t) == 0.0);
      REQUIRE(dropped.y(t) == 0.0);
    }
  }

  SECTION("the zeroed fraction concentrates around the chance") {
    num::RngStream rng(7);
    const data::ObjectTrack dropped = coordinate_dropout(track, 0.25, rng);
    std::size_t zeroed = 0;
    for (std::size_t t = 0; t < dropped.frames(); ++t) {
      if (!dropped.is_valid(t)) ++zeroed;
    }
    const double frac = static_cast<double>(zeroed) / dropped.frames();
    REQUIRE(std::abs(frac - 0.25) <= 0.02);
  }

  SECTION("out-of-range chance is rejected") {
    num::RngStream rng(8);
    REQUIRE_THROWS(coordinate_dropout(track, 1.5, rng));
  }
}

TEST_CASE("noise sweep") {
  data::SynthConfig scfg;
  scfg.train = 8;
  scfg.val = 8;
  scfg.test = 24;
  scfg.seed = 71;
  const std::vector<data::GroupSample> raw = data::synth_generate(scfg).test;
  const std::vector<data::GroupSample> clean = data::preprocess_all(raw);

  model::ModelConfig mcfg = girn::testing::tiny_config(21);
  mcfg.types = {true, false, true};  // intra + object, no inter (faster)
  num::RngStream rng(9);
  const model::GirnParams params = init_girn_params(mcfg, rng);
  const double clean_acc = clean_accuracy(params, clean, 1);

  SECTION("the zero-noise row reproduces the clean accuracy exactly") {
    NoiseSpec zero;
    zero.kind = NoiseSpec::Kind::displacement;
    zero.std_px = 0.0;
    zero.repetitions = 2;
    const std::vector<SweepRow> rows = noise_sweep(params, raw, {zero}, 1);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].repetition_accuracy.size() == 2);
    for (double acc : rows[0].repetition_accuracy) REQUIRE(acc == clean_acc);
    REQUIRE(rows[0].mean_accuracy == clean_acc);
  }

  SECTION("sweeps are reproducible and never mutate the dataset") {
    const std::vector<data::GroupSample> raw_copy = raw;
    NoiseSpec spec;
    spec.kind = NoiseSpec::Kind::dropout;
    spec.chance = 0.3;
    spec.repetitions = 3;
    spec.seed = 99;
    const std::vector<SweepRow> a = noise_sweep(params, raw, {spec}, 1);
    const std::vector<SweepRow> b = noise_sweep(params, raw, {spec}, 1);
    REQUIRE(a[0].repetition_accuracy == b[0].repetition_accuracy);
    REQUIRE(raw == raw_copy);
    REQUIRE(clean_accuracy(params, data::preprocess_all(raw), 1) == clean_acc);
  }

  SECTION("csv is long-format with the mean on every repetition line") {
    NoiseSpec spec;
    spec.kind = NoiseSpec::Kind::displacement;
    spec.std_px = 20.0;
    spec.repetitions = 2;
    const std::vector<SweepRow> rows = noise_sweep(params, raw, {spec}, 1);
    const std::string csv = sweep_to_csv(rows);
    REQUIRE(csv.find("kind,parameter,repetition,accuracy,mean_accuracy\n") == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 reps
    REQUIRE(csv.find("displacement,20,0,") != std::string::npos);
  }

  SECTION("a model without the object type is rejected with a clear message") {
    model::ModelConfig no_obj = mcfg;
    no_obj.types = {true, false, false};
    num::RngStream r2(10);
    const model::GirnParams p2 = init_girn_params(no_obj, r2);
    REQUIRE_THROWS_WITH(noise_sweep(p2, raw, {NoiseSpec{}}, 1),
                        Catch::Matchers::ContainsSubstring("object"));
  }

  SECTION("dropout with imputation refills short gaps before preprocessing") {
    NoiseSpec spec;
    spec.kind = NoiseSpec::Kind::dropout;
    spec.chance = 0.15;
    spec.repetitions = 1;
    spec.impute_dropped = true;
    REQUIRE_NOTHROW(noise_sweep(params, raw, {spec}, 1));
  }
}
