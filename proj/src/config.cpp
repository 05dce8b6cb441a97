#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "texturedge/error.hpp"
#include "texturedge/pipeline.hpp"

namespace texturedge {

using json = nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

template <class T>
void read_field(const json& obj, const char* key, T& out, const std::string& section) {
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad(section + "." + key + " has the wrong type");
  }
}

// Applies each key of `obj` through `apply`, rejecting unknown keys.
template <class Apply>
void for_fields(const json& obj, const std::string& section, std::initializer_list<const char*> known,
                Apply&& apply) {
  if (!obj.is_object()) bad(section + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) bad("unknown key " + section + "." + key);
    apply(key);
  }
}

}  // namespace

std::string format_threshold_method(const SegmentConfig& s) {
  switch (s.threshold_method) {
    case ThresholdMethod::Otsu: return "otsu";
    case ThresholdMethod::Fixed: return "fixed(" + shortest(s.threshold_value) + ")";
    case ThresholdMethod::Percentile: return "percentile(" + shortest(s.threshold_value) + ")";
  }
  return "otsu";
}

void parse_threshold_method(const std::string& text, SegmentConfig& s) {
  if (text == "otsu") {
    s.threshold_method = ThresholdMethod::Otsu;
    s.threshold_value = 0.0;
    return;
  }
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') bad("threshold_method '" + text + "'");
  const auto name = text.substr(0, open);
  const auto arg = text.substr(open + 1, text.size() - open - 2);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (ec != std::errc{} || ptr != arg.data() + arg.size()) bad("threshold argument '" + arg + "'");
  if (name == "fixed") {
    s.threshold_method = ThresholdMethod::Fixed;
  } else if (name == "percentile") {
    s.threshold_method = ThresholdMethod::Percentile;
  } else {
    bad("threshold_method '" + text + "'");
  }
  s.threshold_value = value;
}

std::string serialize_config(const PipelineConfig& c) {
  json j;
  json region = nullptr;
  if (c.srad.homogeneous_region) {
    const auto& r = *c.srad.homogeneous_region;
    region = json{{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
  }
  j["srad"] = json{{"iterations", c.srad.iterations},
                   {"time_step", c.srad.time_step},
                   {"q0_decay_rho", c.srad.q0_decay_rho},
                   {"homogeneous_region", region}};
  j["clahe"] = json{{"clip_limit", c.clahe.clip_limit},
                    {"tiles_x", c.clahe.tiles_x},
                    {"tiles_y", c.clahe.tiles_y},
                    {"bins", c.clahe.bins}};
  j["glcm"] = json{{"levels", c.glcm.levels},
                   {"window_side", c.glcm.window_side},
                   {"distance", c.glcm.distance},
                   {"symmetric", c.glcm.symmetric}};
  j["segment"] = json{{"threshold_method", format_threshold_method(c.segment)},
                      {"close_radius", c.segment.close_radius},
                      {"fill_holes", c.segment.fill_holes}};
  j["roi"] = json{{"margin_factor", c.roi.margin_factor}};
  j["eval"] = json{{"use_circle_proxy", c.eval.use_circle_proxy}, {"full_image", c.eval.full_image}};
  return j.dump(2) + "\n";
}

PipelineConfig parse_config(const std::string& json_text, const PipelineConfig& base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c = base;
  for_fields(j, "config", {"srad", "clahe", "glcm", "segment", "roi", "eval"}, [&](const std::string& section) {
    const json& s = j.at(section);
    if (section == "srad") {
      for_fields(s, section, {"iterations", "time_step", "q0_decay_rho", "homogeneous_region"}, [&](const std::string& k) {
        if (k == "iterations") read_field(s, "iterations", c.srad.iterations, section);
        if (k == "time_step") read_field(s, "time_step", c.srad.time_step, section);
        if (k == "q0_decay_rho") read_field(s, "q0_decay_rho", c.srad.q0_decay_rho, section);
        if (k == "homogeneous_region") {
          const json& r = s.at(k);
          if (r.is_null()) {
            c.srad.homogeneous_region.reset();
          } else {
            Rect rect;
            for_fields(r, "srad.homogeneous_region", {"x", "y", "width", "height"}, [](const std::string&) {});
            read_field(r, "x", rect.x, "srad.homogeneous_region");
            read_field(r, "y", rect.y, "srad.homogeneous_region");
            read_field(r, "width", rect.width, "srad.homogeneous_region");
            read_field(r, "height", rect.height, "srad.homogeneous_region");
            c.srad.homogeneous_region = rect;
          }
        }
      });
    } else if (section == "clahe") {
      for_fields(s, section, {"clip_limit", "tiles_x", "tiles_y", "bins"}, [&](const std::string& k) {
        if (k == "clip_limit") read_field(s, "clip_limit", c.clahe.clip_limit, section);
        if (k == "tiles_x") read_field(s, "tiles_x", c.clahe.tiles_x, section);
        if (k == "tiles_y") read_field(s, "tiles_y", c.clahe.tiles_y, section);
        if (k == "bins") read_field(s, "bins", c.clahe.bins, section);
      });
    } else if (section == "glcm") {
      for_fields(s, section, {"levels", "window_side", "distance", "symmetric"}, [&](const std::string& k) {
        if (k == "levels") read_field(s, "levels", c.glcm.levels, section);
        if (k == "window_side") read_field(s, "window_side", c.glcm.window_side, section);
        if (k == "distance") read_field(s, "distance", c.glcm.distance, section);
        if (k == "symmetric") read_field(s, "symmetric", c.glcm.symmetric, section);
      });
    } else if (section == "segment") {
      for_fields(s, section, {"threshold_method", "close_radius", "fill_holes"}, [&](const std::string& k) {
        if (k == "threshold_method") {
          std::string text;
          read_field(s, "threshold_method", text, section);
          parse_threshold_method(text, c.segment);
        }
        if (k == "close_radius") read_field(s, "close_radius", c.segment.close_radius, section);
        if (k == "fill_holes") read_field(s, "fill_holes", c.segment.fill_holes, section);
      });
    } else if (section == "roi") {
      for_fields(s, section, {"margin_factor"}, [&](const std::string& k) {
        if (k == "margin_factor") read_field(s, "margin_factor", c.roi.margin_factor, section);
      });
    } else if (section == "eval") {
      for_fields(s, section, {"use_circle_proxy", "full_image"}, [&](const std::string& k) {
        if (k == "use_circle_proxy") read_field(s, "use_circle_proxy", c.eval.use_circle_proxy, section);
        if (k == "full_image") read_field(s, "full_image", c.eval.full_image, section);
      });
    }
  });
  validate_config(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const PipelineConfig& c) {
  if (!(c.srad.time_step > 0.0 && c.srad.time_step <= 0.25)) {
    throw Error(ErrorCode::InvalidTimeStep, "srad.time_step must lie in (0, 0.25]");
  }
  if (c.srad.iterations < 0) bad("srad.iterations must be >= 0");
  if (!(c.srad.q0_decay_rho >= 0.0)) bad("srad.q0_decay_rho must be >= 0");
  if (!(c.clahe.clip_limit > 0.0)) bad("clahe.clip_limit must be > 0");
  if (c.clahe.tiles_x < 1 || c.clahe.tiles_y < 1) bad("clahe tiles must be >= 1");
  if (c.clahe.bins < 2 || c.clahe.bins > 256) bad("clahe.bins must lie in [2, 256]");
  if (c.glcm.levels < 2 || c.glcm.levels > 256) {
    throw Error(ErrorCode::LevelsOutOfRange, "glcm.levels must lie in [2, 256]");
  }
  if (c.glcm.window_side < 3 || c.glcm.window_side % 2 == 0) bad("glcm.window_side must be odd and >= 3");
  if (c.glcm.distance < 1) bad("glcm.distance must be >= 1");
  if (c.segment.close_radius < 0) bad("segment.close_radius must be >= 0");
  if (c.segment.threshold_method == ThresholdMethod::Percentile &&
      !(c.segment.threshold_value >= 0.0 && c.segment.threshold_value <= 100.0)) {
    bad("percentile must lie in [0, 100]");
  }
  if (!(c.roi.margin_factor >= 1.0)) bad("roi.margin_factor must be >= 1");
}

}  // namespace texturedge
