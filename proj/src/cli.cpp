#include "angio/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "angio/io.hpp"
#include "angio/parallel.hpp"
#include "angio/seg_eval.hpp"

namespace angio::cli {
namespace fs = std::filesystem;
using io::json;

namespace {

unsigned default_jobs() {
  if (const char* env = std::getenv("ANGIO_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

/// Inputs/outputs of one command, written as a run report on request.
class RunLog {
 public:
  explicit RunLog(std::string command)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  void input(const fs::path& p) { inputs_.push_back(p); }
  void output(const fs::path& p) { outputs_.push_back(p); }
  void config(const std::string& text) { config_digest_ = io::text_digest(text); }

  void write(const fs::path& path) const {
    const auto entries = [](const std::vector<fs::path>& files) {
      json arr = json::array();
      for (const auto& f : files) {
        json e = {{"path", f.generic_string()}};
        e["digest"] = fs::is_regular_file(f) ? json(io::file_digest(f)) : json(nullptr);
        arr.push_back(e);
      }
      return arr;
    };
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json j = {{"command", command_},
              {"inputs", entries(inputs_)},
              {"outputs", entries(outputs_)},
              {"config_digest", config_digest_.empty() ? json(nullptr) : json(config_digest_)},
              {"wall_time_s", wall}};
    io::write_text(path, io::dump(j));
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
  std::string config_digest_;
};

// ---------------------------------------------------------------------------
// severity

struct SeverityArgs {
  std::string mask;
  std::string crop;
  std::string out;
  std::string profile;
};

int cmd_severity(const SeverityArgs& a, RunLog& log) {
  log.input(a.mask);
  const BinaryMask mask = threshold_mask(io::read_png(a.mask), 128);
  CropContext ctx;
  if (!a.crop.empty()) {
    log.input(a.crop);
    ctx = io::parse_crop_context(io::read_json(a.crop));
  }
  const RadiusProfile profile = radius_profile(mask);
  SeverityReport rep = severity_from_profile(profile);
  rep.mld_point = uncrop_point(rep.mld_point, ctx);
  io::write_text(a.out, io::dump(io::to_json(rep)));
  log.output(a.out);
  if (!a.profile.empty()) {
    io::write_text(a.profile, io::profile_csv(profile));
    log.output(a.profile);
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// eval-detect

struct EvalDetectArgs {
  std::string gt;
  std::string pred;
  std::string mode = "overlap";
  bool ctp = false;
  bool ctp_as_tp = false;
  double alpha = 0.05;
  std::string out;
};

json mld_or_nulls(const std::optional<MldEvalResult>& r, CtpMode mode) {
  if (r) return io::to_json(*r);
  return {{"mld_precision", nullptr},
          {"mld_recall", nullptr},
          {"mld_f1", nullptr},
          {"ctp_count", nullptr},
          {"mode", mode == CtpMode::as_tp ? "ctp_as_tp" : "ctp_as_fp"}};
}

int cmd_eval_detect(const EvalDetectArgs& a, RunLog& log) {
  log.input(a.gt);
  log.input(a.pred);
  const DatasetManifest manifest = io::parse_manifest(io::read_json(a.gt));
  const std::vector<Detection> dets = io::parse_detections(io::read_json(a.pred));
  int code = kOk;
  json out;

  if (a.mode == "overlap") {
    if (a.ctp || a.ctp_as_tp) throw InputError("--ctp and --ctp-as-tp require --mode mld");
    out["mode"] = "overlap";
    try {
      const MapSuite suite = map_suite(dets, manifest);
      out["image_level"] = io::to_json(suite.image_level);
      out["lesion_level"] = io::to_json(suite.lesion_level);
      if (!suite.lesion_level.precision) code = kUndefinedMetric;
    } catch (const UndefinedMetric& e) {
      out["image_level"] = nullptr;
      out["lesion_level"] = nullptr;
      out["error"] = e.what();
      code = kUndefinedMetric;
    }
  } else if (a.mode == "mld") {
    out["mode"] = "mld";
    // Group detections per image so FP indices can be resolved to detections.
    std::map<std::string, std::vector<Detection>> per_image;
    for (const auto& d : dets) {
      if (!manifest.find(d.image_id))
        throw InputError("detection references unknown image '" + d.image_id + "'");
      per_image[d.image_id].push_back(d);
    }
    MatchOutcome total;
    std::vector<const Detection*> fps;
    for (const auto& im : manifest.images) {
      const auto& idets = per_image[im.id];
      const MatchOutcome mo = mld_match(idets, im.lesions);
      for (std::size_t f : mo.fp_detections) fps.push_back(&idets[f]);
      total += mo;
    }
    out["tp"] = total.tp;
    out["fp"] = total.fp;
    out["fn"] = total.fn;

    std::optional<MldEvalResult> as_fp;
    try {
      as_fp = mld_metrics(total);
    } catch (const UndefinedMetric& e) {
      out["error"] = e.what();
      code = kUndefinedMetric;
    }

    std::optional<MldEvalResult> as_tp;
    if (a.ctp || a.ctp_as_tp) {
      std::vector<double> gt_mlds;
      for (const auto& im : manifest.images)
        for (const auto& l : im.lesions)
          if (l.mld_px) gt_mlds.push_back(*l.mld_px);
      if (gt_mlds.empty()) throw InputError("CTP analysis needs ground-truth mld_px values");
      std::vector<double> fp_mlds;
      for (const auto* d : fps) {
        if (!d->mld_px)
          throw InputError("CTP analysis needs mld_px on every false-positive detection (image '" +
                           d->image_id + "')");
        fp_mlds.push_back(*d->mld_px);
      }
      const std::vector<double> p_values = ctp_p_values(fp_mlds, gt_mlds);
      std::size_t ctp_count = 0;
      json flags = json::array();
      for (std::size_t i = 0; i < fp_mlds.size(); ++i) {
        const bool is_ctp = p_values[i] > a.alpha;
        ctp_count += is_ctp ? 1 : 0;
        const BoundingBox& b = fps[i]->bbox;
        flags.push_back({{"image_id", fps[i]->image_id},
                         {"bbox", {io::round9(b.x_min), io::round9(b.y_min), io::round9(b.x_max), io::round9(b.y_max)}},
                         {"mld_px", io::round9(fp_mlds[i])},
                         {"p_value", io::round9(p_values[i])},
                         {"ctp", is_ctp}});
      }
      out["ctp_analysis"] = {{"alpha", a.alpha}, {"candidates", flags}, {"ctp_count", ctp_count}};
      if (as_fp) as_fp->ctp_count = ctp_count;
      try {
        as_tp = reclassify_ctp(total.tp, total.fp, total.fn, ctp_count);
        as_tp->ctp_count = ctp_count;
      } catch (const UndefinedMetric& e) {
        out["error"] = e.what();
        code = kUndefinedMetric;
      }
      out["ctp_as_tp"] = mld_or_nulls(as_tp, CtpMode::as_tp);
    }
    out["ctp_as_fp"] = mld_or_nulls(as_fp, CtpMode::as_fp);
    out["metrics"] = a.ctp_as_tp ? out["ctp_as_tp"] : out["ctp_as_fp"];
  } else {
    throw InputError("unknown mode '" + a.mode + "' (expected overlap or mld)");
  }

  io::write_text(a.out, io::dump(out));
  log.output(a.out);
  return code;
}

// ---------------------------------------------------------------------------
// eval-seg

struct EvalSegArgs {
  std::string gt_dir;
  std::string pred_dir;
  std::string out;
  unsigned jobs = 1;
};

std::vector<std::string> png_names(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: '" + dir.string() + "'");
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

int cmd_eval_seg(const EvalSegArgs& a, RunLog& log) {
  const auto gt_names = png_names(a.gt_dir);
  const auto pred_names = png_names(a.pred_dir);
  for (const auto& n : gt_names)
    if (!std::binary_search(pred_names.begin(), pred_names.end(), n))
      throw InputError("unpaired file '" + n + "' (missing from " + a.pred_dir + ")");
  for (const auto& n : pred_names)
    if (!std::binary_search(gt_names.begin(), gt_names.end(), n))
      throw InputError("unpaired file '" + n + "' (missing from " + a.gt_dir + ")");
  if (gt_names.empty()) throw InputError("no PNG pairs found");

  struct Row {
    PixelMetrics pm;
    double cldice = 0.0;
    std::optional<double> mhd;
  };
  std::vector<Row> rows(gt_names.size());
  parallel_for(gt_names.size(), a.jobs, [&](std::size_t i) {
    const BinaryMask gt = threshold_mask(io::read_png(fs::path(a.gt_dir) / gt_names[i]));
    const BinaryMask pred = threshold_mask(io::read_png(fs::path(a.pred_dir) / gt_names[i]));
    if (gt.width() != pred.width() || gt.height() != pred.height())
      throw InputError("size mismatch for '" + gt_names[i] + "'");
    rows[i].pm = pixel_metrics(pred, gt);
    rows[i].cldice = cl_dice(pred, gt);
    if (count_foreground(pred) > 0 && count_foreground(gt) > 0) rows[i].mhd = mhd(pred, gt);
  });
  for (const auto& n : gt_names) {
    log.input(fs::path(a.gt_dir) / n);
    log.input(fs::path(a.pred_dir) / n);
  }

  std::ostringstream csv;
  csv << "name,acc,prec,rec,dice,iou,cldice,mhd\n";
  std::vector<std::vector<double>> cols(7);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double vals[6] = {r.pm.acc, r.pm.prec, r.pm.rec, r.pm.dice, r.pm.iou, r.cldice};
    csv << gt_names[i];
    for (int c = 0; c < 6; ++c) {
      csv << ',' << io::format9(vals[c]);
      cols[c].push_back(vals[c]);
    }
    csv << ',';
    if (r.mhd) {
      csv << io::format9(*r.mhd);
      cols[6].push_back(*r.mhd);
    }
    csv << '\n';
  }
  for (const char* label : {"mean", "sd"}) {
    csv << label;
    for (const auto& c : cols) {
      csv << ',';
      if (!c.empty()) csv << io::format9(std::string(label) == "mean" ? mean(c) : stddev(c, 0));
    }
    csv << '\n';
  }
  io::write_text(a.out, csv.str());
  log.output(a.out);
  return kOk;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentArgs {
  std::string manifest;
  std::string config;
  std::string tiers = "static";
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::uint64_t epoch = 0;
  bool final_epochs = false;
  unsigned jobs = 1;
};

std::string file_stem_for(const std::string& id) {
  std::string s = id;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

int cmd_augment(const AugmentArgs& a, RunLog& log) {
  const TierSet tiers = TierSet::parse(a.tiers);
  log.input(a.manifest);
  const DatasetManifest manifest = io::parse_manifest(io::read_json(a.manifest));
  AugmentConfig cfg;
  if (!a.config.empty()) {
    log.input(a.config);
    cfg = io::parse_augment_config(io::read_json(a.config));
  }
  if (a.seed) cfg.master_seed = *a.seed;
  log.config(io::dump(io::to_json(cfg)) + a.tiers);

  const fs::path base = fs::path(a.manifest).parent_path();
  std::vector<SourceImage> sources(manifest.images.size());
  parallel_for(sources.size(), a.jobs, [&](std::size_t i) {
    const auto& im = manifest.images[i];
    GrayImage img = io::read_png(base / im.path);
    if (img.width() != im.width || img.height() != im.height)
      throw InputError("image '" + im.id + "' size differs from its manifest entry");
    sources[i] = {im.id, std::move(img), im.lesions};
  });

  const auto stream = build_training_stream(sources, cfg, tiers, {a.epoch, a.final_epochs, a.jobs});

  const fs::path out_dir(a.out_dir);
  fs::create_directories(out_dir / "images");
  std::vector<std::string> rel_paths(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i)
    rel_paths[i] = "images/" + file_stem_for(stream[i].id) + ".png";
  {
    std::vector<std::string> sorted = rel_paths;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InputError("augmented sample ids collide after filename sanitising");
  }
  parallel_for(stream.size(), a.jobs,
               [&](std::size_t i) { io::write_png(out_dir / rel_paths[i], stream[i].image); });

  json images = json::array();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& s = stream[i];
    json lesions = json::array();
    for (const auto& l : s.annotations) lesions.push_back(io::to_json(l));
    images.push_back({{"id", s.id},
                      {"path", rel_paths[i]},
                      {"width", s.image.width()},
                      {"height", s.image.height()},
                      {"lesions", lesions},
                      {"provenance", io::to_json(s.provenance)}});
    log.output(out_dir / rel_paths[i]);
  }
  const fs::path manifest_out = out_dir / "manifest.json";
  io::write_text(manifest_out, io::dump({{"images", images}}));
  log.output(manifest_out);
  return kOk;
}

// ---------------------------------------------------------------------------
// agree

struct AgreeArgs {
  std::string pairs;
  double gt_thresh = 4.0;
  double pred_thresh = 6.0;
  std::size_t iterations = 1000;
  double level = 0.95;
  std::uint64_t seed = 0;
  std::string out;
  std::string points;
  unsigned jobs = 1;
};

int cmd_agree(const AgreeArgs& a, RunLog& log) {
  log.input(a.pairs);
  const auto pairs = io::parse_pairs_csv(io::read_text(a.pairs));
  if (pairs.size() < 2) throw InputError("pairs CSV needs at least two rows");
  std::vector<double> pred, gt;
  for (const auto& p : pairs) {
    pred.push_back(p.pred);
    gt.push_back(p.gt);
  }
  AgreementOptions opts;
  opts.gt_thresh = a.gt_thresh;
  opts.pred_thresh = a.pred_thresh;
  opts.bootstrap = {a.iterations, a.level, a.seed, a.jobs};

  const BlandAltmanResult ba = bland_altman(pred, gt);
  int code = kOk;
  json out;
  try {
    out = io::to_json(severity_agreement(pred, gt, opts));
  } catch (const UndefinedMetric& e) {
    // Agreement statistics are still defined; emit them with null metrics.
    std::vector<double> abs_diffs;
    for (const auto& p : pairs) abs_diffs.push_back(std::fabs(p.pred - p.gt));
    const Confusion c = threshold_confusion(pairs, a.gt_thresh, a.pred_thresh);
    out = {{"mad", io::round9(ba.mad)},
           {"abs_diff_sd", io::round9(stddev(abs_diffs, 1))},
           {"mean_diff", io::round9(ba.mean_diff)},
           {"sd", io::round9(ba.sd)},
           {"loa_low", io::round9(ba.loa_low)},
           {"loa_high", io::round9(ba.loa_high)},
           {"n", pairs.size()},
           {"confusion", {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}},
           {"precision", nullptr},
           {"recall", nullptr},
           {"f1", nullptr},
           {"balanced_accuracy", nullptr},
           {"error", e.what()}};
    code = kUndefinedMetric;
  }
  out["thresholds"] = {{"gt", a.gt_thresh}, {"pred", a.pred_thresh}};
  out["bootstrap"] = {{"iterations", a.iterations}, {"level", a.level}, {"seed", a.seed}};
  io::write_text(a.out, io::dump(out));
  log.output(a.out);

  if (!a.points.empty()) {
    std::ostringstream csv;
    csv << "mean,diff\n";
    for (const auto& p : ba.points) csv << io::format9(p.mean) << ',' << io::format9(p.diff) << '\n';
    io::write_text(a.points, csv.str());
    log.output(a.points);
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lesion severity estimation, augmentation, and evaluation toolkit", "angio"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string run_report;
  app.add_option("--run-report", run_report, "Write a JSON run report (inputs, outputs, digests, wall time)");

  SeverityArgs sev;
  auto* c_sev = app.add_subcommand("severity", "MLD / MAD / DS of a segmented lesion mask");
  c_sev->add_option("mask", sev.mask, "8-bit grayscale mask PNG (foreground >= 128)")->required();
  c_sev->add_option("--crop", sev.crop, "Crop context JSON mapping the mask back to image space");
  c_sev->add_option("-o,--out", sev.out, "Severity report JSON")->required();
  c_sev->add_option("--profile", sev.profile, "Per-centerline-point radius CSV");

  EvalDetectArgs det;
  auto* c_det = app.add_subcommand("eval-detect", "Detection metrics (overlap or MLD containment)");
  c_det->add_option("--gt", det.gt, "Ground-truth manifest JSON")->required();
  c_det->add_option("--pred", det.pred, "Detections JSON")->required();
  c_det->add_option("--mode", det.mode, "overlap or mld")->check(CLI::IsMember({"overlap", "mld"}));
  c_det->add_flag("--ctp", det.ctp, "Run candidate-true-positive analysis (mld mode)");
  c_det->add_flag("--ctp-as-tp", det.ctp_as_tp, "Report CTPs as true positives (implies --ctp)");
  c_det->add_option("--alpha", det.alpha, "Mann-Whitney significance level");
  c_det->add_option("-o,--out", det.out, "Metrics JSON")->required();

  EvalSegArgs seg;
  seg.jobs = default_jobs();
  auto* c_seg = app.add_subcommand("eval-seg", "Segmentation metrics over paired PNG directories");
  c_seg->add_option("--gt", seg.gt_dir, "Ground-truth mask directory")->required();
  c_seg->add_option("--pred", seg.pred_dir, "Predicted mask directory")->required();
  c_seg->add_option("-o,--out", seg.out, "Per-pair CSV with mean and sd rows")->required();
  c_seg->add_option("-j,--jobs", seg.jobs, "Worker threads (default $ANGIO_JOBS or 1)");

  AugmentArgs aug;
  aug.jobs = default_jobs();
  std::uint64_t aug_seed = 0;
  auto* c_aug = app.add_subcommand("augment", "Pyramidal augmentation of a manifest");
  c_aug->add_option("--manifest", aug.manifest, "Input manifest JSON")->required();
  c_aug->add_option("--config", aug.config, "Augmentation config JSON");
  c_aug->add_option("--tiers", aug.tiers, "Comma-separated tiers: static,dynamic,composite");
  auto* seed_opt = c_aug->add_option("--seed", aug_seed, "Master seed (overrides the config)");
  c_aug->add_option("--epoch", aug.epoch, "Epoch index for the dynamic and composite draws");
  c_aug->add_flag("--final-epochs", aug.final_epochs, "Disable the composite tier");
  c_aug->add_option("-o,--out", aug.out_dir, "Output directory")->required();
  c_aug->add_option("-j,--jobs", aug.jobs, "Worker threads (default $ANGIO_JOBS or 1)");

  AgreeArgs agr;
  agr.jobs = default_jobs();
  auto* c_agr = app.add_subcommand("agree", "Severity agreement and Bland-Altman statistics");
  c_agr->add_option("--pairs", agr.pairs, "CSV of pred_mld,gt_mld rows")->required();
  c_agr->add_option("--gt-thresh", agr.gt_thresh, "Ground-truth positive threshold (px)");
  c_agr->add_option("--pred-thresh", agr.pred_thresh, "Prediction positive threshold (px)");
  c_agr->add_option("--iterations", agr.iterations, "Bootstrap iterations");
  c_agr->add_option("--level", agr.level, "Confidence level");
  c_agr->add_option("--seed", agr.seed, "Bootstrap seed");
  c_agr->add_option("-o,--out", agr.out, "Agreement report JSON")->required();
  c_agr->add_option("--points", agr.points, "Bland-Altman points CSV");
  c_agr->add_option("-j,--jobs", agr.jobs, "Worker threads (default $ANGIO_JOBS or 1)");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  RunLog log(chosen->get_name());
  int code = kOk;
  try {
    if (chosen == c_sev) {
      code = cmd_severity(sev, log);
    } else if (chosen == c_det) {
      if (det.ctp_as_tp) det.ctp = true;
      code = cmd_eval_detect(det, log);
    } else if (chosen == c_seg) {
      code = cmd_eval_seg(seg, log);
    } else if (chosen == c_aug) {
      if (seed_opt->count() > 0) aug.seed = aug_seed;
      code = cmd_augment(aug, log);
    } else {
      code = cmd_agree(agr, log);
    }
  } catch (const UndefinedMetric& e) {
    err << "error: " << e.what() << "\n";
    code = kUndefinedMetric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (code == kUndefinedMetric) err << "warning: some metrics are undefined (null in output)\n";
  if (!run_report.empty()) log.write(run_report);
  return code;
}

}  // namespace angio::cli
