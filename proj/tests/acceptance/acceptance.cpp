// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Criterion 7 needs the mini-MIAS images; point TEXTUREDGE_MIAS_DIR at the
// directory holding mdbNNN.pgm and Info.txt. Without it the real-data check
// reports SKIP and only the synthetic stand-in runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "../test_support.hpp"
#include "texturedge/error.hpp"
#include "texturedge/pipeline.hpp"

using namespace texturedge;
namespace fs = std::filesystem;

namespace {

constexpr double kReportedFTolerance = 5e-4;
constexpr double kOracleTolerance = 1e-12;
constexpr double kAzTolerance = 1e-9;
constexpr double kMinVarianceReduction = 0.30;
constexpr double kMaxEdgeShiftPx = 1.0;
constexpr double kMinDice = 0.5;

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::Fail, std::move(d)}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1 ---------------------------------------------------------------------------
Outcome reported_f_measures() {
  struct Row {
    double p, r, f;
  };
  const Row rows[] = {{0.9978, 0.9933, 0.9956}, {0.9983, 0.9781, 0.9881}, {0.9997, 0.9375, 0.9676}};
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, std::abs(f_measure(row.p, row.r) - row.f));
  const auto d = fmt("max |F - reported| = %.3g (tol %.0e)", worst, kReportedFTolerance);
  return worst <= kReportedFTolerance ? pass(d) : fail(d);
}

// 2 ---------------------------------------------------------------------------
Outcome contrast_oracle() {
  std::mt19937 rng(2002);
  double worst = 0.0;
  int windows = 0;
  for (int k = 0; k < 200; ++k) {
    const auto q = fixtures::random_quantized(20, 20, 8, rng());
    const Rect r{std::uniform_int_distribution<int>(0, 13)(rng), std::uniform_int_distribution<int>(0, 13)(rng), 7, 7};
    for (const auto off : standard_offsets(1)) {
      worst = std::max(worst, std::abs(contrast(glcm_window(q, r, off)) - fixtures::oracle_window_contrast(q, r, off)));
    }
    ++windows;
  }
  const auto d = fmt("%d windows x 4 offsets, max deviation %.3g (tol %.0e)", windows, worst, kOracleTolerance);
  return worst <= kOracleTolerance ? pass(d) : fail(d);
}

// 3 ---------------------------------------------------------------------------
Outcome kernel_differential() {
  constexpr int kWindows[] = {3, 7, 9};
  constexpr int kLevels[] = {2, 8, 16};
  constexpr Descriptor kKinds[] = {Descriptor::Contrast, Descriptor::Entropy, Descriptor::Asm, Descriptor::Idm};
  std::mt19937 rng(3003);
  int maps = 0;
  int mismatches = 0;
  for (int k = 0; k < 50; ++k) {
    const int size = std::uniform_int_distribution<int>(16, 128)(rng);
    const int side = kWindows[k % 3];
    const int levels = kLevels[(k / 3) % 3];
    const auto q = fixtures::random_quantized(size, size, levels, rng());
    for (const auto off : standard_offsets(1)) {
      for (auto kind : kKinds) {
        const TextureParams p{kind, side, off};
        if (texture_map_sliding(q, p) != texture_map_naive(q, p)) ++mismatches;
        ++maps;
      }
    }
  }
  const auto d = fmt("%d maps over 50 images, %d differ (exact)", maps, mismatches);
  return mismatches == 0 ? pass(d) : fail(d);
}

// 4 ---------------------------------------------------------------------------
Outcome rotation() {
  constexpr int kSide = 7;
  constexpr int kHalf = kSide / 2;
  int compared = 0;
  int mismatches = 0;
  for (std::uint32_t k = 0; k < 20; ++k) {
    const auto q = fixtures::random_quantized(64, 64, 8, 4000 + k);
    QuantizedImage rot{64, 64, 8, std::vector<std::uint8_t>(q.values.size())};
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) rot.values[static_cast<std::size_t>(x) * 64 + (63 - y)] = q.at(x, y);
    }
    const auto m90 = texture_map_sliding(q, {Descriptor::Contrast, kSide, standard_offsets(1)[2]});
    const auto m0 = texture_map_sliding(rot, {Descriptor::Contrast, kSide, standard_offsets(1)[0]});
    for (int y = kHalf; y < 64 - kHalf; ++y) {
      for (int x = kHalf; x < 64 - kHalf; ++x) {
        ++compared;
        if (m0.at(63 - y, x) != m90.at(x, y)) ++mismatches;
      }
    }
  }
  const auto d = fmt("%d interior pixels over 20 images, %d differ (exact)", compared, mismatches);
  return mismatches == 0 ? pass(d) : fail(d);
}

// 5 ---------------------------------------------------------------------------
double variance(const GrayImage& img) {
  double mean = 0.0;
  for (auto v : img.data) mean += v;
  mean /= static_cast<double>(img.size());
  double var = 0.0;
  for (auto v : img.data) var += (v - mean) * (v - mean);
  return var / static_cast<double>(img.size());
}

double half_max_crossing(const GrayImage& img, int y) {
  for (int x = 1; x < img.width; ++x) {
    const double a = img.at(x - 1, y);
    const double b = img.at(x, y);
    if (a < 127.5 && b >= 127.5) return (x - 1) + (127.5 - a) / (b - a);
  }
  return -1e9;
}

Outcome srad_properties() {
  bool ok = true;
  const GrayImage flat(48, 48, 100);
  const bool identity = srad(flat, SradParams{}) == flat;
  ok &= identity;

  std::mt19937 rng(5005);
  std::normal_distribution<double> speckle(1.0, 0.2);
  GrayImage patch(64, 64);
  for (auto& v : patch.data) v = static_cast<std::uint8_t>(std::clamp(std::lround(128.0 * speckle(rng)), 0L, 255L));
  const double before = variance(patch);
  const double after = variance(srad(patch, SradParams{}));
  const double reduction = 1.0 - after / before;
  ok &= reduction >= kMinVarianceReduction;

  GrayImage edge(32, 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 16; x < 32; ++x) edge.at(x, y) = 255;
  }
  SradParams p;
  p.iterations = 50;
  const auto smoothed = srad(edge, p);
  double shift = 0.0;
  for (int y = 0; y < 16; ++y) shift = std::max(shift, std::abs(half_max_crossing(smoothed, y) - half_max_crossing(edge, y)));
  ok &= shift <= kMaxEdgeShiftPx;

  const auto d = fmt("constant identity %s; variance %.1f -> %.1f (-%.1f%%, need >= %.0f%%); edge shift %.3g px (max %.0f)",
                     identity ? "yes" : "NO", before, after, 100.0 * reduction, 100.0 * kMinVarianceReduction, shift,
                     kMaxEdgeShiftPx);
  return ok ? pass(d) : fail(d);
}

// 6 ---------------------------------------------------------------------------
Outcome metric_identities() {
  std::mt19937_64 rng(6006);
  int dice_mismatch = 0;
  for (int k = 0; k < 100; ++k) {
    const ConfusionCounts c{rng() % 100000 + 1, rng() % 100000, rng() % 100000, rng() % 1000000};
    const auto r = metrics(c);
    if (r.dice != r.f_measure) ++dice_mismatch;
  }
  double worst = 0.0;
  std::mt19937 rng32(6007);
  for (int k = 0; k < 100; ++k) {
    const int w = std::uniform_int_distribution<int>(2, 24)(rng32);
    const int h = std::uniform_int_distribution<int>(1, 24)(rng32);
    const int distinct = std::uniform_int_distribution<int>(1, 10)(rng32);
    TextureMap scores(w, h);
    BinaryMask truth(w, h);
    std::vector<bool> labels;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores.data[i] = std::uniform_int_distribution<int>(0, distinct)(rng32) * 0.1;
      truth.data[i] = i == 0 ? 1 : (i == 1 ? 0 : std::bernoulli_distribution(0.3)(rng32));
      labels.push_back(truth.data[i] != 0);
    }
    worst = std::max(worst, std::abs(roc_az(scores, truth).az - fixtures::oracle_concordance(scores.data, labels)));
  }
  const auto d = fmt("dice != f on %d/100 tallies; max |Az - concordance| = %.3g over 100 tied fixtures (tol %.0e)",
                     dice_mismatch, worst, kAzTolerance);
  return dice_mismatch == 0 && worst <= kAzTolerance ? pass(d) : fail(d);
}

// 7 ---------------------------------------------------------------------------
struct EndToEnd {
  bool identical = false;
  std::vector<std::pair<std::string, double>> dice;
};

EndToEnd run_twice(const fs::path& dataset, const fs::path& scratch) {
  const std::vector<std::string> ids = {"mdb004", "mdb005", "mdb019"};
  ExperimentOptions a;
  a.dataset_dir = dataset;
  a.out_dir = scratch / "run_a";
  a.write_roc = true;
  auto b = a;
  b.out_dir = scratch / "run_b";
  fs::remove_all(a.out_dir);
  fs::remove_all(b.out_dir);
  const auto first = run_experiment(ids, PipelineConfig{}, a);
  run_experiment(ids, PipelineConfig{}, b);
  EndToEnd e;
  e.identical = fixtures::snapshot_tree(a.out_dir) == fixtures::snapshot_tree(b.out_dir);
  for (const auto& row : first.rows) e.dice.emplace_back(row.record.ref_id, row.report.dice);
  return e;
}

Outcome judge(const EndToEnd& e, const std::string& label) {
  bool ok = e.identical && e.dice.size() == 3;
  std::string d = label + ": outputs " + (e.identical ? "byte-identical" : "DIFFER") + "; dice";
  for (const auto& [id, dice] : e.dice) {
    ok &= dice >= kMinDice;
    d += fmt(" %s=%.4f", id.c_str(), dice);
  }
  d += fmt(" (need >= %.1f)", kMinDice);
  return ok ? pass(d) : fail(d);
}

Outcome end_to_end_real() {
  const char* env = std::getenv("TEXTUREDGE_MIAS_DIR");
  if (!env || !*env) return {Status::Skip, "mini-MIAS not available (set TEXTUREDGE_MIAS_DIR); real-data gate not verified"};
  const auto scratch = fs::temp_directory_path() / "texturedge_acceptance_mias";
  try {
    return judge(run_twice(env, scratch), std::string("mini-MIAS at ") + env);
  } catch (const Error& e) {
    return fail(std::string("mini-MIAS run failed: ") + e.what());
  }
}

Outcome end_to_end_synthetic() {
  const auto scratch = fs::temp_directory_path() / "texturedge_acceptance_synthetic";
  fs::remove_all(scratch);
  fixtures::write_synthetic_dataset(scratch / "data");
  try {
    const auto out = judge(run_twice(scratch / "data", scratch), "synthetic stand-in");
    fs::remove_all(scratch);
    return out;
  } catch (const Error& e) {
    return fail(std::string("synthetic run failed: ") + e.what());
  }
}

// 8 ---------------------------------------------------------------------------
Outcome pgm_round_trip() {
  std::mt19937 rng(8008);
  int bad = 0;
  for (int k = 0; k < 100; ++k) {
    const int w = std::uniform_int_distribution<int>(1, 96)(rng);
    const int h = std::uniform_int_distribution<int>(1, 96)(rng);
    const auto img = fixtures::random_gray(w, h, rng());
    if (!(decode_pgm(encode_pgm(img)) == img)) ++bad;
  }
  const auto d = fmt("%d/100 random images failed to round-trip", bad);
  return bad == 0 ? pass(d) : fail(d);
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1", "f-measure reproduces reported values", reported_f_measures},
      {"2", "glcm contrast equals brute-force double sum", contrast_oracle},
      {"3", "sliding kernel equals naive kernel", kernel_differential},
      {"4", "contrast maps are rotation equivariant", rotation},
      {"5", "srad identity, smoothing and edge preservation", srad_properties},
      {"6", "dice/f identity and Az concordance", metric_identities},
      {"7", "end-to-end on mdb004/mdb005/mdb019", end_to_end_real},
      {"7s", "end-to-end on synthetic stand-ins", end_to_end_synthetic},
      {"8", "pgm decode(encode(x)) == x", pgm_round_trip},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
    if (o.status == Status::Fail) ++failures;
    std::printf("[%s] %-3s %s: %s (%.2fs)\n", tag, c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d criterion failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
