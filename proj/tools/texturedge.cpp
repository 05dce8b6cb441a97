// texturedge: command-line front end for the enhancement, texture,
// segmentation and evaluation stages, plus batch experiments and the kernel
// benchmark.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal invariant violation.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "texturedge/error.hpp"
#include "texturedge/pipeline.hpp"

namespace fs = std::filesystem;
using namespace texturedge;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

// Optional overrides; only fields the user actually passed are applied.
struct Overrides {
  std::optional<int> srad_iterations;
  std::optional<double> srad_time_step;
  std::optional<double> srad_rho;
  std::optional<double> clip_limit;
  std::optional<int> tiles;
  std::optional<int> levels;
  std::optional<int> window;
  std::optional<int> distance;
  bool symmetric = false;
  std::optional<std::string> threshold;
  std::optional<int> close_radius;
  bool no_fill_holes = false;
  std::optional<double> margin;
  bool full_image = false;

  void register_on(CLI::App& app) {
    app.add_option("--srad-iterations", srad_iterations, "SRAD iteration count");
    app.add_option("--srad-time-step", srad_time_step, "SRAD time step, (0, 0.25]");
    app.add_option("--srad-rho", srad_rho, "SRAD q0 decay rate");
    app.add_option("--clip-limit", clip_limit, "CLAHE clip limit");
    app.add_option("--tiles", tiles, "CLAHE tiles per axis");
    app.add_option("--levels", levels, "GLCM gray levels");
    app.add_option("--window", window, "GLCM window side (odd)");
    app.add_option("--distance", distance, "GLCM displacement distance");
    app.add_flag("--symmetric", symmetric, "Symmetric GLCM");
    app.add_option("--threshold", threshold, "otsu | fixed(t) | percentile(p)");
    app.add_option("--close-radius", close_radius, "Closing disk radius");
    app.add_flag("--no-fill-holes", no_fill_holes, "Skip hole filling");
    app.add_option("--margin", margin, "ROI margin factor (>= 1)");
    app.add_flag("--full-image", full_image, "Evaluate on the whole image instead of the ROI");
  }

  void apply(PipelineConfig& c) const {
    if (srad_iterations) c.srad.iterations = *srad_iterations;
    if (srad_time_step) c.srad.time_step = *srad_time_step;
    if (srad_rho) c.srad.q0_decay_rho = *srad_rho;
    if (clip_limit) c.clahe.clip_limit = *clip_limit;
    if (tiles) c.clahe.tiles_x = c.clahe.tiles_y = *tiles;
    if (levels) c.glcm.levels = *levels;
    if (window) c.glcm.window_side = *window;
    if (distance) c.glcm.distance = *distance;
    if (symmetric) c.glcm.symmetric = true;
    if (threshold) parse_threshold_method(*threshold, c.segment);
    if (close_radius) c.segment.close_radius = *close_radius;
    if (no_fill_holes) c.segment.fill_holes = false;
    if (margin) c.roi.margin_factor = *margin;
    if (full_image) c.eval.full_image = true;
    validate_config(c);
  }
};

Point parse_point(const std::string& text) {
  int x = 0;
  int y = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> x >> comma >> y) || comma != ',') {
    throw Error(ErrorCode::InvalidConfig, "expected x,y but got '" + text + "'");
  }
  return {x, y};
}

MiasRecord resolve_record(const std::string& record_line, const std::string& index, const std::string& id) {
  if (!record_line.empty()) {
    const auto recs = parse_mias_index(record_line);
    if (recs.size() != 1) throw Error(ErrorCode::InvalidConfig, "--record must hold exactly one record");
    return recs.front();
  }
  if (index.empty() || id.empty()) throw Error(ErrorCode::InvalidConfig, "give --record, or --index with --id");
  for (const auto& r : load_mias_index(index)) {
    if (r.ref_id == id) return r;
  }
  throw Error(ErrorCode::MissingRecord, "no annotation for " + id);
}

fs::path dataset_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TEXTUREDGE_MIAS_DIR")) return env;
  throw Error(ErrorCode::InvalidConfig, "no dataset: pass --dataset or set TEXTUREDGE_MIAS_DIR");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "bad integer list '" + text + "'");
    }
  }
  return values;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return kExitUsage;
    case ErrorCode::InvariantViolation: return kExitInvariant;
    default: return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Texture-based mass segmentation for mammogram ROIs"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  bool print_defaults = false;
  Overrides overrides;
  app.add_option("--config", config_path, "JSON pipeline config")->check(CLI::ExistingFile);
  app.add_flag("--print-defaults", print_defaults, "Print the default config as JSON and exit");
  overrides.register_on(app);

  // enhance
  auto* enhance_cmd = app.add_subcommand("enhance", "SRAD followed by CLAHE on a whole image");
  std::string enhance_in;
  std::string enhance_out;
  bool skip_srad = false;
  bool skip_clahe = false;
  enhance_cmd->add_option("-i,--input", enhance_in, "Input PGM")->required();
  enhance_cmd->add_option("-o,--output", enhance_out, "Output PGM")->required();
  enhance_cmd->add_flag("--skip-srad", skip_srad);
  enhance_cmd->add_flag("--skip-clahe", skip_clahe);

  // texture
  auto* texture_cmd = app.add_subcommand("texture", "Directional GLCM descriptor maps and their sum");
  std::string texture_in;
  std::string texture_out;
  std::string descriptor_name_opt = "contrast";
  std::string kernel = "sliding";
  texture_cmd->add_option("-i,--input", texture_in, "ROI PGM")->required();
  texture_cmd->add_option("-o,--out-dir", texture_out, "Output directory")->required();
  texture_cmd->add_option("--descriptor", descriptor_name_opt, "contrast | entropy | asm | idm");
  texture_cmd->add_option("--kernel", kernel, "sliding | naive")->check(CLI::IsMember({"sliding", "naive"}));

  // segment
  auto* segment_cmd = app.add_subcommand("segment", "Threshold, refine and trace a texture map");
  std::string segment_in;
  std::string segment_out;
  std::string segment_center;
  std::string segment_roi;
  segment_cmd->add_option("-i,--input", segment_in, "Texture map (.f64)")->required();
  segment_cmd->add_option("-o,--out-dir", segment_out, "Output directory")->required();
  segment_cmd->add_option("--center", segment_center, "Mass center x,y in map coordinates")->required();
  segment_cmd->add_option("--roi", segment_roi, "ROI PGM for overlay.pgm");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score a mask against ground truth");
  std::string eval_pred;
  std::string eval_truth;
  std::string eval_circle;
  std::string eval_scores;
  std::string eval_roc_out;
  eval_cmd->add_option("--pred", eval_pred, "Predicted mask PGM")->required();
  auto* truth_opt = eval_cmd->add_option("--truth", eval_truth, "Ground-truth mask PGM");
  eval_cmd->add_option("--circle", eval_circle, "Ground-truth circle cx,cy,r")->excludes(truth_opt);
  eval_cmd->add_option("--scores", eval_scores, "Texture map (.f64) for the ROC curve");
  eval_cmd->add_option("--roc-out", eval_roc_out, "Write ROC points as CSV");

  // pipeline
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Full flow on one image");
  std::string pipe_in;
  std::string pipe_out;
  std::string pipe_record;
  std::string pipe_index;
  std::string pipe_id;
  bool pipe_no_eval = false;
  bool pipe_roc = false;
  pipeline_cmd->add_option("-i,--input", pipe_in, "Mammogram PGM")->required();
  pipeline_cmd->add_option("-o,--out-dir", pipe_out, "Output directory")->required();
  pipeline_cmd->add_option("--record", pipe_record, "Annotation line, e.g. \"mdb005 F CIRC B 477 133 30\"");
  pipeline_cmd->add_option("--index", pipe_index, "mini-MIAS info file");
  pipeline_cmd->add_option("--id", pipe_id, "Reference id to look up in --index");
  pipeline_cmd->add_flag("--no-eval", pipe_no_eval, "Skip scoring");
  pipeline_cmd->add_flag("--roc", pipe_roc, "Also write roc.csv");

  // experiment
  auto* experiment_cmd = app.add_subcommand("experiment", "Batch run over mini-MIAS ids");
  std::string exp_dataset;
  std::string exp_index;
  std::string exp_out;
  std::vector<std::string> exp_ids;
  bool exp_roc = false;
  experiment_cmd->add_option("ids", exp_ids, "Reference ids, e.g. mdb004 mdb005 mdb019");
  experiment_cmd->add_option("--dataset", exp_dataset, "Dataset directory (default: $TEXTUREDGE_MIAS_DIR)");
  experiment_cmd->add_option("--index", exp_index, "Info file (default: Info.txt in the dataset)");
  experiment_cmd->add_option("-o,--out-dir", exp_out, "Output directory")->required();
  experiment_cmd->add_flag("--roc", exp_roc, "Also write roc.csv per image");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time naive vs sliding texture kernels");
  std::string bench_sizes = "64,128";
  std::string bench_windows = "3,7,9";
  std::string bench_levels = "8";
  int bench_repeats = 5;
  std::string bench_out;
  bench_cmd->add_option("--sizes", bench_sizes, "Square image sides");
  bench_cmd->add_option("--windows", bench_windows, "Window sides");
  bench_cmd->add_option("--levels", bench_levels, "Gray level counts");
  bench_cmd->add_option("--repeats", bench_repeats, "Timing repeats (median reported)");
  bench_cmd->add_option("-o,--output", bench_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    PipelineConfig config = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    overrides.apply(config);

    if (print_defaults) {
      std::cout << serialize_config(PipelineConfig{});
      return 0;
    }

    if (*enhance_cmd) {
      auto img = read_pgm(enhance_in);
      if (!skip_srad) img = srad(img, config.srad);
      if (!skip_clahe) img = clahe(img, config.clahe);
      write_pgm(enhance_out, img);
    } else if (*texture_cmd) {
      const auto kind = parse_descriptor(descriptor_name_opt);
      const auto q = quantize(read_pgm(texture_in), config.glcm.levels);
      const auto offsets = standard_offsets(config.glcm.distance);
      std::array<TextureMap, 4> maps;
      for (std::size_t d = 0; d < 4; ++d) {
        const TextureParams p{kind, config.glcm.window_side, offsets[d], config.glcm.symmetric};
        maps[d] = kernel == "naive" ? texture_map_naive(q, p) : texture_map_sliding(q, p);
      }
      const auto sum = directional_sum(maps);
      fs::create_directories(texture_out);
      const std::string stem(descriptor_name(kind));
      for (std::size_t d = 0; d < 4; ++d) {
        write_texture_pgm(fs::path(texture_out) / (stem + "_" + std::to_string(kStandardAngles[d]) + ".pgm"), maps[d]);
      }
      write_texture_pgm(fs::path(texture_out) / (stem + "_sum.pgm"), sum);
      write_texture_f64(fs::path(texture_out) / (stem + "_sum.f64"), sum);
    } else if (*segment_cmd) {
      const auto map = read_texture_f64(segment_in);
      double t = 0.0;
      switch (config.segment.threshold_method) {
        case ThresholdMethod::Otsu: t = otsu_threshold(map); break;
        case ThresholdMethod::Fixed: t = config.segment.threshold_value; break;
        case ThresholdMethod::Percentile: t = percentile_threshold(map, config.segment.threshold_value); break;
      }
      const auto mask = refine_mask(binarize(map, t), parse_point(segment_center), config.segment.close_radius,
                                    config.segment.fill_holes);
      fs::create_directories(segment_out);
      write_pgm(fs::path(segment_out) / "mask.pgm", mask_to_gray(mask));
      write_text_file(fs::path(segment_out) / "contours.txt", format_contours(trace_contour(mask)));
      if (!segment_roi.empty()) {
        write_pgm(fs::path(segment_out) / "overlay.pgm", overlay_boundary(read_pgm(segment_roi), mask));
      }
      std::printf("threshold %.17g\n", t);
    } else if (*eval_cmd) {
      const auto pred = gray_to_mask(read_pgm(eval_pred));
      BinaryMask truth;
      if (!eval_truth.empty()) {
        truth = gray_to_mask(read_pgm(eval_truth));
      } else if (!eval_circle.empty()) {
        const auto v = parse_int_list(eval_circle);
        if (v.size() != 3) throw Error(ErrorCode::InvalidConfig, "--circle expects cx,cy,r");
        truth = circle_mask(pred.width, pred.height, v[0], v[1], v[2]);
      } else {
        throw Error(ErrorCode::InvalidConfig, "give --truth or --circle");
      }
      const auto e = metrics(confusion(pred, truth));
      std::printf("{\"tp\": %llu, \"fp\": %llu, \"fn\": %llu, \"tn\": %llu, \"dice\": %.17g, \"precision\": %.17g, "
                  "\"recall\": %.17g, \"specificity\": %.17g, \"f_measure\": %.17g",
                  static_cast<unsigned long long>(e.counts.tp), static_cast<unsigned long long>(e.counts.fp),
                  static_cast<unsigned long long>(e.counts.fn), static_cast<unsigned long long>(e.counts.tn), e.dice,
                  e.precision, e.recall, e.specificity, e.f_measure);
      if (!eval_scores.empty()) {
        const auto roc = roc_az(read_texture_f64(eval_scores), truth);
        std::printf(", \"az\": %.17g", roc.az);
        if (!eval_roc_out.empty()) write_text_file(eval_roc_out, format_roc_csv(roc));
      }
      std::printf("}\n");
    } else if (*pipeline_cmd) {
      const auto record = resolve_record(pipe_record, pipe_index, pipe_id);
      const auto result = run_pipeline(read_pgm(pipe_in), record, config, !pipe_no_eval);
      write_pipeline_artifacts(result, pipe_out, pipe_roc);
      const auto report = report_json(result, record);
      write_text_file(fs::path(pipe_out) / result.ref_id / "report.json", report);
      std::cout << report;
    } else if (*experiment_cmd) {
      ExperimentOptions opts;
      opts.dataset_dir = exp_ids.empty() && exp_dataset.empty() ? fs::path(".") : dataset_root(exp_dataset);
      if (!exp_index.empty()) opts.index_path = exp_index;
      opts.out_dir = exp_out;
      opts.write_roc = exp_roc;
      const auto result = run_experiment(exp_ids, config, opts);
      std::cout << experiment_csv(result) << aggregate_csv(result);
    } else if (*bench_cmd) {
      const auto rows = run_bench(parse_int_list(bench_sizes), parse_int_list(bench_windows),
                                  parse_int_list(bench_levels), bench_repeats);
      const auto csv = bench_csv(rows);
      if (bench_out.empty()) {
        std::cout << csv;
      } else {
        write_text_file(bench_out, csv);
      }
      for (const auto& r : rows) {
        if (!r.equal) {
          std::cerr << "texturedge: sliding kernel disagrees with the naive kernel\n";
          return kExitInvariant;
        }
      }
    } else {
      std::cout << app.help();
      return kExitUsage;
    }
  } catch (const Error& e) {
    std::cerr << "texturedge: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "texturedge: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
