// Command lines exercised by the CLI regression checks.
#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "angio/cli.hpp"
#include "angio/io.hpp"

namespace cli_cases {

namespace fs = std::filesystem;

struct Case {
  std::string name;
  std::vector<std::string> args;  // without the program name
  int expected_exit = 0;
};

inline int run(const std::vector<std::string>& args, std::string* err_text = nullptr) {
  std::vector<std::string> full{"angio"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = angio::cli::run(full, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

// The five commands on the valid fixture set; every output goes to `out`.
inline std::vector<Case> valid_cases(const fs::path& fx, const fs::path& out) {
  const fs::path c = fx / "cli";
  auto s = [](const fs::path& p) { return p.string(); };
  return {
      {"severity-dumbbell",
       {"severity", s(c / "dumbbell.png"), "--out", s(out / "dumbbell.json"), "--profile", s(out / "dumbbell.csv")}},
      {"severity-crop", {"severity", s(c / "bar.png"), "--crop", s(c / "crop.json"), "--out", s(out / "bar.json")}},
      {"eval-detect-overlap",
       {"eval-detect", "--gt", s(c / "manifest.json"), "--pred", s(c / "detections.json"), "--mode", "overlap", "--out",
        s(out / "overlap.json")}},
      {"eval-detect-mld",
       {"eval-detect", "--gt", s(c / "manifest.json"), "--pred", s(c / "detections.json"), "--mode", "mld", "--ctp-as-tp",
        "--out", s(out / "mld.json")}},
      {"eval-seg", {"eval-seg", "--gt", s(c / "seg" / "gt"), "--pred", s(c / "seg" / "pred"), "--out", s(out / "seg.csv"), "--jobs", "2"}},
      {"augment",
       {"augment", "--manifest", s(c / "manifest.json"), "--config", s(c / "augment.json"), "--tiers",
        "static,dynamic,composite", "--seed", "11", "--epoch", "2", "--out", s(out / "aug"), "--jobs", "3"}},
      {"agree",
       {"agree", "--pairs", s(c / "pairs.csv"), "--iterations", "300", "--seed", "5", "--out", s(out / "agree.json"),
        "--points", s(out / "ba.csv")}},
  };
}

// Malformed inputs that must be rejected with exit code 2.
inline std::vector<Case> invalid_cases(const fs::path& fx, const fs::path& out) {
  const fs::path c = fx / "cli";
  const fs::path b = fx / "invalid";
  auto s = [](const fs::path& p) { return p.string(); };
  const std::string o = s(out / "reject.json");
  std::vector<Case> cases = {
      {"severity-empty-mask", {"severity", s(c / "empty.png"), "--out", o}, 2},
      {"severity-rgb", {"severity", s(b / "rgb.png"), "--out", o}, 2},
      {"severity-missing-file", {"severity", s(b / "nope.png"), "--out", o}, 2},
      {"severity-bad-crop", {"severity", s(c / "bar.png"), "--crop", s(b / "crop_bad_scale.json"), "--out", o}, 2},
      {"eval-detect-string-conf",
       {"eval-detect", "--gt", s(c / "manifest.json"), "--pred", s(b / "detections_string_conf.json"), "--out", o}, 2},
      {"eval-detect-unknown-image",
       {"eval-detect", "--gt", s(c / "manifest.json"), "--pred", s(b / "detections_unknown_image.json"), "--out", o}, 2},
      {"eval-detect-not-json", {"eval-detect", "--gt", s(b / "not_json.json"), "--pred", s(c / "detections.json"), "--out", o}, 2},
      {"eval-detect-bad-mode",
       {"eval-detect", "--gt", s(c / "manifest.json"), "--pred", s(c / "detections.json"), "--mode", "area", "--out", o}, 2},
      {"eval-seg-unpaired",
       {"eval-seg", "--gt", s(b / "seg_unpaired" / "gt"), "--pred", s(b / "seg_unpaired" / "pred"), "--out", o}, 2},
      {"eval-seg-size",
       {"eval-seg", "--gt", s(b / "seg_size" / "gt"), "--pred", s(b / "seg_size" / "pred"), "--out", o}, 2},
      {"augment-composite-only",
       {"augment", "--manifest", s(c / "manifest.json"), "--tiers", "static,composite", "--out", s(out / "aug_bad")}, 2},
      {"augment-bad-probability",
       {"augment", "--manifest", s(c / "manifest.json"), "--config", s(b / "augment_bad_probability.json"), "--out",
        s(out / "aug_bad")}, 2},
      {"augment-unknown-key",
       {"augment", "--manifest", s(c / "manifest.json"), "--config", s(b / "augment_unknown_key.json"), "--out",
        s(out / "aug_bad")}, 2},
      {"agree-bad-row", {"agree", "--pairs", s(b / "pairs_bad_row.csv"), "--out", o}, 2},
      {"agree-three-columns", {"agree", "--pairs", s(b / "pairs_three_columns.csv"), "--out", o}, 2},
      {"unknown-command", {"frobnicate"}, 2},
      {"unknown-flag", {"severity", s(c / "bar.png"), "--out", o, "--bogus"}, 2},
  };
  for (const char* m : {"manifest_reversed_bbox.json", "manifest_missing_id.json", "manifest_mld_outside.json"})
    cases.push_back({std::string("eval-detect-") + m,
                     {"eval-detect", "--gt", s(b / m), "--pred", s(c / "detections.json"), "--out", o},
                     2});
  return cases;
}

// Relative path -> bytes of every regular file under `dir`.
inline std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.emplace_back(fs::relative(e.path(), dir).generic_string(), angio::io::read_text(e.path()));
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace cli_cases
