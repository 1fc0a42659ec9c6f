#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "angio/augment.hpp"
#include "angio/detect_eval.hpp"
#include "angio/geometry.hpp"
#include "angio/severity.hpp"
#include "angio/stats.hpp"

namespace angio::io {

using nlohmann::json;

// PNG (8-bit grayscale only). Failures throw InputError.
GrayImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const GrayImage& img);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
json read_json(const std::filesystem::path& path);

/// Rounds to 9 significant digits so serialised output is stable.
double round9(double v);
/// "%.9g" text of v.
std::string format9(double v);
/// Sorted keys, 2-space indent, trailing newline.
std::string dump(const json& j);

/// 64-bit FNV-1a of a file's bytes as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);
std::string text_digest(const std::string& text);

// Schemas. Parse errors throw InputError with the offending field.
//
// Manifest: {"images":[{"id","path","width","height",
//            "lesions":[{"bbox":[x1,y1,x2,y2],"mld_point":[x,y]|null,"mld_px":v|null}]}]}
// Detections: {"detections":[{"image_id","bbox":[x1,y1,x2,y2],"confidence","mld_px"?}]}
DatasetManifest parse_manifest(const json& j);
json to_json(const DatasetManifest& m);
json to_json(const LesionAnnotation& a);
LesionAnnotation parse_annotation(const json& j);
std::vector<Detection> parse_detections(const json& j);
json to_json(const std::vector<Detection>& dets);

/// {"offset":[x,y],"scale":[sx,sy]}
CropContext parse_crop_context(const json& j);
json to_json(const CropContext& c);

json to_json(const SeverityReport& r);
/// index,x,y,radius rows with a header line.
std::string profile_csv(const RadiusProfile& p);

/// Partial config objects override the defaults; unknown keys are errors.
AugmentConfig parse_augment_config(const json& j);
json to_json(const AugmentConfig& c);
json to_json(const Provenance& p);

json to_json(const EvalSummary& s);
json to_json(const MldEvalResult& r);
json to_json(const AgreementReport& r);

/// Two numeric columns (pred, gt); an optional non-numeric header line is
/// skipped. Throws InputError on any malformed row.
std::vector<MldPair> parse_pairs_csv(const std::string& text);

}  // namespace angio::io
