#include "angio/io.hpp"

#define PNG_SKIP_SETJMP_CHECK
#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>

#include "angio/random.hpp"

namespace angio::io {
namespace fs = std::filesystem;

GrayImage read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw InputError("cannot read PNG '" + path.string() + "': " + image.message);
  const png_uint_32 banned = PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_LINEAR |
                             PNG_FORMAT_FLAG_COLORMAP;
  if ((image.format & banned) != 0) {
    png_image_free(&image);
    throw InputError("'" + path.string() + "' is not an 8-bit grayscale PNG");
  }
  if (image.width == 0 || image.height == 0 || image.width > 1u << 15 || image.height > 1u << 15) {
    png_image_free(&image);
    throw InputError("unsupported PNG size in '" + path.string() + "'");
  }
  image.format = PNG_FORMAT_GRAY;
  GrayImage img(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, img.data().data(), 0, nullptr))
    throw InputError("cannot decode PNG '" + path.string() + "': " + image.message);
  return img;
}

void write_png(const fs::path& path, const GrayImage& img) {
  if (img.empty()) throw InputError("cannot write an empty image");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.data().data(), 0, nullptr))
    throw InputError("cannot write PNG '" + path.string() + "': " + image.message);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw InputError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

std::string format9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round9(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format9(v));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string text_digest(const std::string& text) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << fnv1a(text);
  return ss.str();
}

std::string file_digest(const fs::path& path) { return text_digest(read_text(path)); }

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw InputError("schema error at " + where + ": " + what);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(where, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_error(where, "expected an integer");
  return j.get<int>();
}

std::string string_field(const json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing key '") + key + "'");
  return *it;
}

BoundingBox parse_bbox(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) schema_error(where, "bbox must be [x1,y1,x2,y2]");
  BoundingBox b{number(j[0], where), number(j[1], where), number(j[2], where), number(j[3], where)};
  if (!b.valid()) schema_error(where, "bbox must satisfy 0 <= x1 < x2 and 0 <= y1 < y2");
  return b;
}

Point parse_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema_error(where, "point must be [x,y]");
  return {number(j[0], where), number(j[1], where)};
}

json point_json(const Point& p) { return json::array({round9(p.x), round9(p.y)}); }

json bbox_json(const BoundingBox& b) {
  return json::array({round9(b.x_min), round9(b.y_min), round9(b.x_max), round9(b.y_max)});
}

json opt_number(const std::optional<double>& v) {
  return v ? json(round9(*v)) : json(nullptr);
}

}  // namespace

LesionAnnotation parse_annotation(const json& j) {
  LesionAnnotation a;
  a.bbox = parse_bbox(field(j, "bbox", "lesion"), "lesion.bbox");
  if (const auto it = j.find("mld_point"); it != j.end() && !it->is_null())
    a.mld_point = parse_point(*it, "lesion.mld_point");
  if (const auto it = j.find("mld_px"); it != j.end() && !it->is_null())
    a.mld_px = number(*it, "lesion.mld_px");
  try {
    validate_annotation(a);
  } catch (const InputError& e) {
    schema_error("lesion", e.what());
  }
  return a;
}

json to_json(const LesionAnnotation& a) {
  return {{"bbox", bbox_json(a.bbox)},
          {"mld_point", a.mld_point ? point_json(*a.mld_point) : json(nullptr)},
          {"mld_px", opt_number(a.mld_px)}};
}

DatasetManifest parse_manifest(const json& j) {
  DatasetManifest m;
  const json& images = field(j, "images", "manifest");
  if (!images.is_array()) schema_error("manifest.images", "expected an array");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "manifest.images[" + std::to_string(i) + "]";
    const json& im = images[i];
    ManifestImage mi;
    mi.id = string_field(field(im, "id", where), where + ".id");
    mi.path = string_field(field(im, "path", where), where + ".path");
    mi.width = integer(field(im, "width", where), where + ".width");
    mi.height = integer(field(im, "height", where), where + ".height");
    const json& lesions = field(im, "lesions", where);
    if (!lesions.is_array()) schema_error(where + ".lesions", "expected an array");
    for (const auto& l : lesions) mi.lesions.push_back(parse_annotation(l));
    m.images.push_back(std::move(mi));
  }
  validate_manifest(m);
  return m;
}

json to_json(const DatasetManifest& m) {
  json images = json::array();
  for (const auto& im : m.images) {
    json lesions = json::array();
    for (const auto& l : im.lesions) lesions.push_back(to_json(l));
    images.push_back({{"id", im.id},
                      {"path", im.path},
                      {"width", im.width},
                      {"height", im.height},
                      {"lesions", lesions}});
  }
  return {{"images", images}};
}

std::vector<Detection> parse_detections(const json& j) {
  std::vector<Detection> out;
  const json& dets = field(j, "detections", "detections");
  if (!dets.is_array()) schema_error("detections", "expected an array");
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const std::string where = "detections[" + std::to_string(i) + "]";
    Detection d;
    d.image_id = string_field(field(dets[i], "image_id", where), where + ".image_id");
    d.bbox = parse_bbox(field(dets[i], "bbox", where), where + ".bbox");
    d.confidence = number(field(dets[i], "confidence", where), where + ".confidence");
    if (d.confidence < 0.0 || d.confidence > 1.0) schema_error(where, "confidence must be in [0,1]");
    if (const auto it = dets[i].find("mld_px"); it != dets[i].end() && !it->is_null()) {
      d.mld_px = number(*it, where + ".mld_px");
      if (!(*d.mld_px > 0.0)) schema_error(where, "mld_px must be positive");
    }
    out.push_back(std::move(d));
  }
  return out;
}

json to_json(const std::vector<Detection>& dets) {
  json arr = json::array();
  for (const auto& d : dets) {
    json o = {{"image_id", d.image_id}, {"bbox", bbox_json(d.bbox)}, {"confidence", round9(d.confidence)}};
    if (d.mld_px) o["mld_px"] = round9(*d.mld_px);
    arr.push_back(o);
  }
  return {{"detections", arr}};
}

CropContext parse_crop_context(const json& j) {
  const Point off = parse_point(field(j, "offset", "crop"), "crop.offset");
  const Point sc = parse_point(field(j, "scale", "crop"), "crop.scale");
  if (!(sc.x > 0.0) || !(sc.y > 0.0)) schema_error("crop.scale", "scale factors must be positive");
  return {off.x, off.y, sc.x, sc.y};
}

json to_json(const CropContext& c) {
  return {{"offset", json::array({round9(c.offset_x), round9(c.offset_y)})},
          {"scale", json::array({round9(c.scale_x), round9(c.scale_y)})}};
}

json to_json(const SeverityReport& r) {
  return {{"mld_px", round9(r.mld_px)},
          {"mad_px", round9(r.mad_px)},
          {"ds_percent", round9(r.ds_percent)},
          {"mld_point", point_json(r.mld_point)},
          {"peak_indices", r.peak_indices},
          {"fallback", r.fallback}};
}

std::string profile_csv(const RadiusProfile& p) {
  std::ostringstream ss;
  ss << "index,x,y,radius\n";
  for (std::size_t i = 0; i < p.radii.size(); ++i)
    ss << i << ',' << p.path.points[i].x << ',' << p.path.points[i].y << ','
       << format9(p.radii[i]) << '\n';
  return ss.str();
}

namespace {

// Reads `key` from `obj` into `target` when present, tracking consumed keys.
template <typename T>
void take(const json& obj, const char* key, T& target, std::set<std::string>& seen,
          const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  seen.insert(key);
  const std::string at = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) schema_error(at, "expected a boolean");
    target = it->get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) schema_error(at, "expected an integer");
    target = it->get<T>();
  } else {
    target = number(*it, at);
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& seen, const std::string& where) {
  for (const auto& [k, v] : obj.items())
    if (!seen.count(k)) schema_error(where, "unknown key '" + k + "'");
}

const json* section(const json& j, const char* key, std::set<std::string>& seen) {
  const auto it = j.find(key);
  if (it == j.end()) return nullptr;
  if (!it->is_object()) schema_error(std::string("config.") + key, "expected an object");
  seen.insert(key);
  return &*it;
}

}  // namespace

AugmentConfig parse_augment_config(const json& j) {
  if (!j.is_object()) schema_error("config", "expected an object");
  AugmentConfig c;
  std::set<std::string> top;
  if (const json* s = section(j, "static", top)) {
    std::set<std::string> seen;
    auto& t = c.static_tier;
    take(*s, "clahe_clip", t.clahe_clip, seen, "config.static");
    take(*s, "clahe_tiles", t.clahe_tiles, seen, "config.static");
    take(*s, "noise_lo", t.noise_lo, seen, "config.static");
    take(*s, "noise_hi", t.noise_hi, seen, "config.static");
    take(*s, "median_kernel", t.median_kernel, seen, "config.static");
    take(*s, "motion_length", t.motion_length, seen, "config.static");
    take(*s, "defocus_radius", t.defocus_radius, seen, "config.static");
    take(*s, "shuffle_windows", t.shuffle_windows, seen, "config.static");
    take(*s, "shuffle_min_side", t.shuffle_min_side, seen, "config.static");
    take(*s, "shuffle_max_side", t.shuffle_max_side, seen, "config.static");
    reject_unknown(*s, seen, "config.static");
  }
  if (const json* d = section(j, "dynamic", top)) {
    std::set<std::string> seen;
    auto& t = c.dynamic_tier;
    const std::string w = "config.dynamic";
    take(*d, "p_scale", t.p_scale, seen, w);
    take(*d, "scale_lo", t.scale_lo, seen, w);
    take(*d, "scale_hi", t.scale_hi, seen, w);
    take(*d, "p_erase", t.p_erase, seen, w);
    take(*d, "erase_area_lo", t.erase_area_lo, seen, w);
    take(*d, "erase_area_hi", t.erase_area_hi, seen, w);
    take(*d, "erase_aspect_lo", t.erase_aspect_lo, seen, w);
    take(*d, "erase_aspect_hi", t.erase_aspect_hi, seen, w);
    take(*d, "p_translate", t.p_translate, seen, w);
    take(*d, "translate_frac", t.translate_frac, seen, w);
    take(*d, "p_jiggle", t.p_jiggle, seen, w);
    take(*d, "brightness_lo", t.brightness_lo, seen, w);
    take(*d, "brightness_hi", t.brightness_hi, seen, w);
    take(*d, "contrast_lo", t.contrast_lo, seen, w);
    take(*d, "contrast_hi", t.contrast_hi, seen, w);
    take(*d, "p_flip", t.p_flip, seen, w);
    take(*d, "min_area_frac", t.min_area_frac, seen, w);
    reject_unknown(*d, seen, w);
  }
  if (const json* m = section(j, "composite", top)) {
    std::set<std::string> seen;
    auto& t = c.composite_tier;
    const std::string w = "config.composite";
    take(*m, "mosaic", t.mosaic, seen, w);
    take(*m, "jitter", t.jitter, seen, w);
    take(*m, "target_width", t.target_width, seen, w);
    take(*m, "target_height", t.target_height, seen, w);
    take(*m, "min_side", t.min_side, seen, w);
    take(*m, "min_area_frac", t.min_area_frac, seen, w);
    reject_unknown(*m, seen, w);
  }
  take(j, "master_seed", c.master_seed, top, "config");
  reject_unknown(j, top, "config");
  c.validate();
  return c;
}

json to_json(const AugmentConfig& c) {
  const auto& s = c.static_tier;
  const auto& d = c.dynamic_tier;
  const auto& m = c.composite_tier;
  return {{"static",
           {{"clahe_clip", s.clahe_clip},
            {"clahe_tiles", s.clahe_tiles},
            {"noise_lo", s.noise_lo},
            {"noise_hi", s.noise_hi},
            {"median_kernel", s.median_kernel},
            {"motion_length", s.motion_length},
            {"defocus_radius", s.defocus_radius},
            {"shuffle_windows", s.shuffle_windows},
            {"shuffle_min_side", s.shuffle_min_side},
            {"shuffle_max_side", s.shuffle_max_side}}},
          {"dynamic",
           {{"p_scale", d.p_scale},
            {"scale_lo", d.scale_lo},
            {"scale_hi", d.scale_hi},
            {"p_erase", d.p_erase},
            {"erase_area_lo", d.erase_area_lo},
            {"erase_area_hi", d.erase_area_hi},
            {"erase_aspect_lo", d.erase_aspect_lo},
            {"erase_aspect_hi", d.erase_aspect_hi},
            {"p_translate", d.p_translate},
            {"translate_frac", d.translate_frac},
            {"p_jiggle", d.p_jiggle},
            {"brightness_lo", d.brightness_lo},
            {"brightness_hi", d.brightness_hi},
            {"contrast_lo", d.contrast_lo},
            {"contrast_hi", d.contrast_hi},
            {"p_flip", d.p_flip},
            {"min_area_frac", d.min_area_frac}}},
          {"composite",
           {{"mosaic", m.mosaic},
            {"jitter", m.jitter},
            {"target_width", m.target_width},
            {"target_height", m.target_height},
            {"min_side", m.min_side},
            {"min_area_frac", m.min_area_frac}}},
          {"master_seed", c.master_seed}};
}

json to_json(const Provenance& p) {
  return {{"source_id", p.source_id}, {"sources", p.sources}, {"tiers", p.tiers},
          {"transforms", p.transforms}, {"seed", p.seed},     {"epoch", p.epoch}};
}

json to_json(const EvalSummary& s) {
  json j = {{"level", s.level == EvalLevel::image ? "image" : "lesion"},
            {"precision", opt_number(s.precision)},
            {"recall", opt_number(s.recall)},
            {"map50", opt_number(s.map50)},
            {"map50_95", opt_number(s.map5095)},
            {"images_with_detections", s.precision_images},
            {"images_with_lesions", s.gt_images}};
  if (s.map50 && s.map5095) j["fitness"] = round9(fitness(*s.map50, *s.map5095));
  else j["fitness"] = nullptr;
  if (s.level == EvalLevel::image) {
    j["precision_sd"] = s.precision ? json(round9(s.precision_sd)) : json(nullptr);
    j["recall_sd"] = s.recall ? json(round9(s.recall_sd)) : json(nullptr);
    j["map50_sd"] = s.map50 ? json(round9(s.map50_sd)) : json(nullptr);
    j["map50_95_sd"] = s.map5095 ? json(round9(s.map5095_sd)) : json(nullptr);
  }
  return j;
}

json to_json(const MldEvalResult& r) {
  return {{"mld_precision", round9(r.mld_precision)},
          {"mld_recall", round9(r.mld_recall)},
          {"mld_f1", round9(r.mld_f1)},
          {"ctp_count", r.ctp_count},
          {"mode", r.mode == CtpMode::as_tp ? "ctp_as_tp" : "ctp_as_fp"}};
}

json to_json(const AgreementReport& r) {
  const auto metric = [](const MetricWithCi& m) {
    return json{{"value", round9(m.value)}, {"ci", json::array({round9(m.ci.lo), round9(m.ci.hi)})}};
  };
  return {{"mad", round9(r.mad)},
          {"abs_diff_sd", round9(r.abs_diff_sd)},
          {"mean_diff", round9(r.mean_diff)},
          {"sd", round9(r.sd)},
          {"loa_low", round9(r.loa_low)},
          {"loa_high", round9(r.loa_high)},
          {"n", r.points.size()},
          {"confusion",
           {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
          {"precision", metric(r.prec)},
          {"recall", metric(r.rec)},
          {"f1", metric(r.f1)},
          {"balanced_accuracy", metric(r.bal_acc)}};
}

std::vector<MldPair> parse_pairs_csv(const std::string& text) {
  std::vector<MldPair> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  const auto parse_num = [](const std::string& s, double& v) {
    std::size_t pos = 0;
    try {
      v = std::stod(s, &pos);
    } catch (...) {
      return false;
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size() && std::isfinite(v);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const bool first_row = std::exchange(header_allowed, false);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw InputError("pairs CSV line " + std::to_string(lineno) + ": expected two columns");
    double a = 0.0, b = 0.0;
    const bool ok = parse_num(line.substr(0, comma), a) && parse_num(line.substr(comma + 1), b);
    if (!ok) {
      if (first_row) continue;  // header
      throw InputError("pairs CSV line " + std::to_string(lineno) + ": non-numeric value");
    }
    out.push_back({a, b});
  }
  return out;
}

}  // namespace angio::io
