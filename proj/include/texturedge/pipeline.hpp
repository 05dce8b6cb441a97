#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "texturedge/enhance.hpp"
#include "texturedge/evalmetrics.hpp"
#include "texturedge/imgio.hpp"
#include "texturedge/segment.hpp"
#include "texturedge/texture.hpp"

namespace texturedge {

struct GlcmConfig {
  int levels = 8;
  int window_side = 7;
  int distance = 1;
  bool symmetric = false;

  friend bool operator==(const GlcmConfig&, const GlcmConfig&) = default;
};

enum class ThresholdMethod { Otsu, Fixed, Percentile };

struct SegmentConfig {
  ThresholdMethod threshold_method = ThresholdMethod::Otsu;
  double threshold_value = 0.0;  // t for Fixed, p in [0,100] for Percentile
  int close_radius = 3;
  bool fill_holes = true;

  friend bool operator==(const SegmentConfig&, const SegmentConfig&) = default;
};

struct RoiConfig {
  double margin_factor = 1.5;

  friend bool operator==(const RoiConfig&, const RoiConfig&) = default;
};

struct EvalConfig {
  bool use_circle_proxy = true;
  bool full_image = false;  // evaluate on the whole raster instead of the ROI crop

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

struct PipelineConfig {
  SradParams srad;
  ClaheParams clahe;
  GlcmConfig glcm;
  SegmentConfig segment;
  RoiConfig roi;
  EvalConfig eval;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// "otsu", "fixed(<t>)" or "percentile(<p>)".
std::string format_threshold_method(const SegmentConfig& s);
void parse_threshold_method(const std::string& text, SegmentConfig& s);

/// Canonical JSON form (2-space indent, fixed key order, trailing newline).
std::string serialize_config(const PipelineConfig& config);

/// Parses a full or partial JSON document; missing fields keep their values
/// from `base`. Unknown keys are rejected.
PipelineConfig parse_config(const std::string& json_text, const PipelineConfig& base = {});

PipelineConfig load_config(const std::filesystem::path& path);

void validate_config(const PipelineConfig& config);

// ---------------------------------------------------------------------------

struct PipelineResult {
  std::string ref_id;
  GrayImage enhanced;
  Roi roi;
  std::array<TextureMap, 4> direction_maps;
  TextureMap sum_map;
  double threshold = 0.0;
  BinaryMask mask;  // ROI coordinates
  std::vector<Contour> contours;
  std::optional<EvalReport> report;
  std::optional<RocCurve> roc;
};

/// Runs enhancement on the whole image, then ROI extraction, the four
/// directional contrast maps and their sum, segmentation and (when
/// `evaluate`) scoring against the circular annotation. Requires geometry in
/// `record`; NORM records fail with NoGroundTruth.
PipelineResult run_pipeline(const GrayImage& image, const MiasRecord& record, const PipelineConfig& config,
                            bool evaluate = true);

/// Writes every artifact of `result` under `<out_dir>/<ref_id>/`.
void write_pipeline_artifacts(const PipelineResult& result, const std::filesystem::path& out_dir,
                              bool write_roc = false);

std::string report_json(const PipelineResult& result, const MiasRecord& record);

struct ExperimentRow {
  MiasRecord record;
  EvalReport report;
  double az = 0.0;
};

struct TissueAggregate {
  Tissue tissue = Tissue::Fatty;
  int count = 0;
  double dice = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double f_measure = 0.0;
  double az = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;  // sorted by ref_id
  std::vector<TissueAggregate> aggregates;  // per tissue present, order D, F, G
};

struct ExperimentOptions {
  std::filesystem::path dataset_dir;
  std::optional<std::filesystem::path> index_path;  // default: first info file found in dataset_dir
  std::filesystem::path out_dir;
  bool write_roc = false;
};

/// Runs the pipeline on each id (images processed in parallel) and writes
/// `experiment.csv`, `experiment.jsonl` and `aggregate.csv` to out_dir.
ExperimentResult run_experiment(const std::vector<std::string>& ids, const PipelineConfig& config,
                                const ExperimentOptions& options);

std::filesystem::path find_mias_index(const std::filesystem::path& dataset_dir);

std::string experiment_csv(const ExperimentResult& result);
std::string experiment_jsonl(const ExperimentResult& result);
std::string aggregate_csv(const ExperimentResult& result);

// ---------------------------------------------------------------------------

struct BenchRow {
  int size = 0;
  int window_side = 0;
  int levels = 0;
  double naive_ms = 0.0;
  double sliding_ms = 0.0;
  bool equal = false;
};

/// Median-of-`repeats` wall clock of the naive and sliding contrast kernels
/// (all four offsets) on a seeded random image per configuration.
std::vector<BenchRow> run_bench(const std::vector<int>& sizes, const std::vector<int>& window_sides,
                                const std::vector<int>& levels, int repeats = 5);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace texturedge
