#include "texturedge/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <map>

#include "json.hpp"
#include "texturedge/error.hpp"

namespace texturedge {

using json = nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Re-throws module errors with the failing stage prepended, keeping the code.
template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  }
}

double pick_threshold(const TextureMap& map, const SegmentConfig& s) {
  switch (s.threshold_method) {
    case ThresholdMethod::Otsu: return otsu_threshold(map);
    case ThresholdMethod::Fixed: return s.threshold_value;
    case ThresholdMethod::Percentile: return percentile_threshold(map, s.threshold_value);
  }
  return otsu_threshold(map);
}

template <class T>
Raster<T> paste(const Raster<T>& patch, const Rect& box, int width, int height) {
  Raster<T> out(width, height);
  for (int y = 0; y < box.height; ++y) {
    for (int x = 0; x < box.width; ++x) out.at(box.x + x, box.y + y) = patch.at(x, y);
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const GrayImage& image, const MiasRecord& record, const PipelineConfig& config,
                            bool evaluate) {
  validate_config(config);
  if (!record.has_geometry()) {
    throw Error(ErrorCode::NoGroundTruth, record.ref_id + " (" + std::string(abnormality_code(record.abnormality)) +
                                              ") carries no center/radius annotation");
  }
  PipelineResult r;
  r.ref_id = record.ref_id;

  r.enhanced = stage("enhance", [&] { return clahe(srad(image, config.srad), config.clahe); });

  const Point center = mias_to_image(*record.center_x, *record.center_y, image.height);
  const RoiSpec spec{center.x, center.y, *record.radius, config.roi.margin_factor};
  r.roi = stage("roi", [&] { return extract_roi(r.enhanced, spec); });

  auto maps = stage("texture", [&] {
    const auto q = quantize(r.roi.image, config.glcm.levels);
    return directional_maps(q, Descriptor::Contrast, config.glcm.window_side, config.glcm.distance,
                            config.glcm.symmetric);
  });
  r.direction_maps = std::move(maps.per_direction);
  r.sum_map = std::move(maps.sum);

  const Point local{center.x - r.roi.box.x, center.y - r.roi.box.y};
  stage("segment", [&] {
    r.threshold = pick_threshold(r.sum_map, config.segment);
    r.mask = refine_mask(binarize(r.sum_map, r.threshold), local, config.segment.close_radius,
                         config.segment.fill_holes);
    r.contours = trace_contour(r.mask);
    return 0;
  });

  if (evaluate && config.eval.use_circle_proxy) {
    stage("eval", [&] {
      if (config.eval.full_image) {
        const auto truth = circle_mask(image.width, image.height, center.x, center.y, *record.radius);
        const auto pred = paste(r.mask, r.roi.box, image.width, image.height);
        r.report = metrics(confusion(pred, truth));
        r.roc = roc_az(paste(r.sum_map, r.roi.box, image.width, image.height), truth);
      } else {
        const auto truth = circle_mask(r.roi.box.width, r.roi.box.height, local.x, local.y, *record.radius);
        r.report = metrics(confusion(r.mask, truth));
        r.roc = roc_az(r.sum_map, truth);
      }
      return 0;
    });
  }
  return r;
}

std::string report_json(const PipelineResult& r, const MiasRecord& record) {
  json j;
  j["ref_id"] = r.ref_id;
  j["tissue"] = std::string(1, tissue_code(record.tissue));
  j["abnormality"] = std::string(abnormality_code(record.abnormality));
  j["roi"] = json{{"x", r.roi.box.x}, {"y", r.roi.box.y}, {"width", r.roi.box.width}, {"height", r.roi.box.height}};
  j["threshold"] = r.threshold;
  j["contours"] = r.contours.size();
  if (r.report) {
    const auto& e = *r.report;
    j["counts"] = json{{"tp", e.counts.tp}, {"fp", e.counts.fp}, {"fn", e.counts.fn}, {"tn", e.counts.tn}};
    j["dice"] = e.dice;
    j["precision"] = e.precision;
    j["recall"] = e.recall;
    j["specificity"] = e.specificity;
    j["f_measure"] = e.f_measure;
    j["undefined"] = json{{"dice", e.undefined.dice},
                          {"precision", e.undefined.precision},
                          {"recall", e.undefined.recall},
                          {"specificity", e.undefined.specificity},
                          {"f_measure", e.undefined.f_measure}};
  }
  if (r.roc) j["az"] = r.roc->az;
  return j.dump(2) + "\n";
}

void write_pipeline_artifacts(const PipelineResult& r, const std::filesystem::path& out_dir, bool write_roc) {
  const auto dir = out_dir / r.ref_id;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  write_pgm(dir / "enhanced.pgm", r.enhanced);
  write_pgm(dir / "roi.pgm", r.roi.image);
  for (std::size_t d = 0; d < r.direction_maps.size(); ++d) {
    write_texture_pgm(dir / ("contrast_" + std::to_string(kStandardAngles[d]) + ".pgm"), r.direction_maps[d]);
  }
  write_texture_pgm(dir / "contrast_sum.pgm", r.sum_map);
  write_texture_f64(dir / "contrast_sum.f64", r.sum_map);
  write_pgm(dir / "mask.pgm", mask_to_gray(r.mask));
  write_text_file(dir / "contours.txt", format_contours(r.contours));
  write_pgm(dir / "overlay.pgm", overlay_boundary(r.roi.image, r.mask));
  // report.json needs the record; callers that have it write it themselves.
  if (write_roc && r.roc) write_text_file(dir / "roc.csv", format_roc_csv(*r.roc));
}

// ---------------------------------------------------------------------------

std::filesystem::path find_mias_index(const std::filesystem::path& dataset_dir) {
  for (const char* name : {"Info.txt", "info.txt", "INFO.TXT", "mias_info.txt"}) {
    const auto p = dataset_dir / name;
    if (std::filesystem::is_regular_file(p)) return p;
  }
  throw Error(ErrorCode::MissingRecord, "no mini-MIAS info file (Info.txt) in " + dataset_dir.string());
}

ExperimentResult run_experiment(const std::vector<std::string>& ids, const PipelineConfig& config,
                                const ExperimentOptions& options) {
  validate_config(config);
  if (!config.eval.use_circle_proxy) {
    throw Error(ErrorCode::InvalidConfig, "experiment scoring needs eval.use_circle_proxy = true");
  }
  std::vector<std::string> sorted_ids = ids;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  sorted_ids.erase(std::unique(sorted_ids.begin(), sorted_ids.end()), sorted_ids.end());

  std::vector<MiasRecord> records;
  if (!sorted_ids.empty()) {
    const auto index = options.index_path ? *options.index_path : find_mias_index(options.dataset_dir);
    records = load_mias_index(index);
  }

  // Resolve everything up front so a bad id fails before any work starts.
  std::vector<MiasRecord> jobs;
  for (const auto& id : sorted_ids) {
    const auto it = std::find_if(records.begin(), records.end(), [&](const MiasRecord& r) { return r.ref_id == id; });
    if (it == records.end()) throw Error(ErrorCode::MissingRecord, "no annotation for " + id);
    if (!std::filesystem::is_regular_file(options.dataset_dir / (id + ".pgm"))) {
      throw Error(ErrorCode::MissingImage, (options.dataset_dir / (id + ".pgm")).string());
    }
    jobs.push_back(*it);  // first annotation of an id wins
  }

  std::filesystem::create_directories(options.out_dir);
  ExperimentResult result;
  result.rows.resize(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    try {
      const auto& rec = jobs[k];
      const auto image = read_pgm(options.dataset_dir / (rec.ref_id + ".pgm"));
      const auto r = run_pipeline(image, rec, config, true);
      write_pipeline_artifacts(r, options.out_dir, options.write_roc);
      write_text_file(options.out_dir / rec.ref_id / "report.json", report_json(r, rec));
      result.rows[k] = {rec, *r.report, r.roc->az};
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (Tissue t : {Tissue::Dense, Tissue::Fatty, Tissue::Glandular}) {
    TissueAggregate agg;
    agg.tissue = t;
    for (const auto& row : result.rows) {
      if (row.record.tissue != t) continue;
      ++agg.count;
      agg.dice += row.report.dice;
      agg.precision += row.report.precision;
      agg.recall += row.report.recall;
      agg.specificity += row.report.specificity;
      agg.f_measure += row.report.f_measure;
      agg.az += row.az;
    }
    if (agg.count == 0) continue;
    const double n = agg.count;
    agg.dice /= n;
    agg.precision /= n;
    agg.recall /= n;
    agg.specificity /= n;
    agg.f_measure /= n;
    agg.az /= n;
    result.aggregates.push_back(agg);
  }

  write_text_file(options.out_dir / "experiment.csv", experiment_csv(result));
  write_text_file(options.out_dir / "experiment.jsonl", experiment_jsonl(result));
  write_text_file(options.out_dir / "aggregate.csv", aggregate_csv(result));
  return result;
}

std::string experiment_csv(const ExperimentResult& result) {
  std::string text = "ref_id,tissue,tp,fp,fn,tn,dice,precision,recall,specificity,f_measure,az\n";
  for (const auto& row : result.rows) {
    const auto& e = row.report;
    text += row.record.ref_id + "," + tissue_code(row.record.tissue) + "," + std::to_string(e.counts.tp) + "," +
            std::to_string(e.counts.fp) + "," + std::to_string(e.counts.fn) + "," + std::to_string(e.counts.tn) +
            "," + shortest(e.dice) + "," + shortest(e.precision) + "," + shortest(e.recall) + "," +
            shortest(e.specificity) + "," + shortest(e.f_measure) + "," + shortest(row.az) + "\n";
  }
  return text;
}

std::string experiment_jsonl(const ExperimentResult& result) {
  std::string text;
  for (const auto& row : result.rows) {
    const auto& e = row.report;
    json j;
    j["ref_id"] = row.record.ref_id;
    j["tissue"] = std::string(1, tissue_code(row.record.tissue));
    j["tp"] = e.counts.tp;
    j["fp"] = e.counts.fp;
    j["fn"] = e.counts.fn;
    j["tn"] = e.counts.tn;
    j["dice"] = e.dice;
    j["precision"] = e.precision;
    j["recall"] = e.recall;
    j["specificity"] = e.specificity;
    j["f_measure"] = e.f_measure;
    j["az"] = row.az;
    text += j.dump() + "\n";
  }
  return text;
}

std::string aggregate_csv(const ExperimentResult& result) {
  std::string text = "tissue,count,dice,precision,recall,specificity,f_measure,az\n";
  for (const auto& a : result.aggregates) {
    text += std::string(1, tissue_code(a.tissue)) + "," + std::to_string(a.count) + "," + shortest(a.dice) + "," +
            shortest(a.precision) + "," + shortest(a.recall) + "," + shortest(a.specificity) + "," +
            shortest(a.f_measure) + "," + shortest(a.az) + "\n";
  }
  return text;
}

}  // namespace texturedge
