#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "angio/cli.hpp"
#include "angio/detect_eval.hpp"
#include "angio/morphology.hpp"
#include "angio/seg_eval.hpp"
#include "angio/severity.hpp"
#include "angio/stats.hpp"

namespace py = pybind11;
using namespace angio;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

BinaryMask to_mask(const U8Array& a) {
  if (a.ndim() != 2) throw py::value_error("mask must be a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  BinaryMask m(w, h);
  const auto* src = a.data();
  for (std::size_t i = 0; i < m.data().size(); ++i) m.data()[i] = src[i] != 0;
  return m;
}

template <typename T>
py::array_t<T> to_array(const Grid<T>& g) {
  py::array_t<T> out({g.height(), g.width()});
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

py::dict severity_dict(const SeverityReport& r) {
  py::dict d;
  d["mld_px"] = r.mld_px;
  d["mad_px"] = r.mad_px;
  d["ds_percent"] = r.ds_percent;
  d["mld_point"] = py::make_tuple(r.mld_point.x, r.mld_point.y);
  d["peak_indices"] = r.peak_indices;
  d["fallback"] = r.fallback;
  return d;
}

py::dict mld_dict(const MldEvalResult& r) {
  py::dict d;
  d["mld_precision"] = r.mld_precision;
  d["mld_recall"] = r.mld_recall;
  d["mld_f1"] = r.mld_f1;
  d["ctp_count"] = r.ctp_count;
  return d;
}

}  // namespace

PYBIND11_MODULE(_angio, m) {
  m.doc() = "Lesion severity estimation and evaluation core";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<UndefinedMetric>(m, "UndefinedMetric", PyExc_ArithmeticError);

  m.def("distance_transform", [](const U8Array& mask) { return to_array(distance_transform(to_mask(mask))); },
        py::arg("mask"), "Exact Euclidean distance to the nearest background pixel (image border counts as background).");
  m.def("skeletonize",
        [](const U8Array& mask) {
          const BinaryMask s = skeletonize(to_mask(mask));
          return to_array<std::uint8_t>(s);
        },
        py::arg("mask"));

  m.def("radius_profile",
        [](const U8Array& mask) {
          const RadiusProfile p = radius_profile(to_mask(mask));
          std::vector<std::pair<int, int>> pts;
          for (const auto& c : p.path.points) pts.emplace_back(c.x, c.y);
          return py::make_tuple(p.radii, pts);
        },
        py::arg("mask"), "Radii along the longest centerline path, and the path as (x, y) pairs.");
  m.def("detect_peaks", &detect_peaks, py::arg("profile"), py::arg("min_prominence") = 0.5,
        py::arg("min_separation") = 3);
  m.def("estimate_severity",
        [](const U8Array& mask, double min_prominence, std::size_t min_separation, double trim) {
          SeverityOptions o;
          o.peaks = {min_prominence, min_separation};
          o.fallback_trim = trim;
          return severity_dict(estimate_severity(to_mask(mask), o));
        },
        py::arg("mask"), py::arg("min_prominence") = 0.5, py::arg("min_separation") = 3,
        py::arg("fallback_trim") = 0.05);

  m.def("mann_whitney_u",
        [](const std::vector<double>& x, const std::vector<double>& y, bool strict) {
          MannWhitneyOptions o;
          o.strict = strict;
          const MannWhitneyResult r = mann_whitney_u(x, y, o);
          return py::make_tuple(r.u, r.p_value);
        },
        py::arg("x"), py::arg("y"), py::arg("strict") = false, "Returns (U, two-sided p).");

  m.def("mld_metrics", [](std::size_t tp, std::size_t fp, std::size_t fn) { return mld_dict(mld_metrics(tp, fp, fn)); },
        py::arg("tp"), py::arg("fp"), py::arg("fn"));
  m.def("reclassify_ctp",
        [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t moved) {
          return mld_dict(reclassify_ctp(tp, fp, fn, moved));
        },
        py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("moved"));
  m.def("fitness", &fitness, py::arg("map50"), py::arg("map50_95"));

  m.def("pixel_metrics",
        [](const U8Array& pred, const U8Array& gt) {
          const PixelMetrics p = pixel_metrics(to_mask(pred), to_mask(gt));
          py::dict d;
          d["acc"] = p.acc;
          d["prec"] = p.prec;
          d["rec"] = p.rec;
          d["dice"] = p.dice;
          d["iou"] = p.iou;
          return d;
        },
        py::arg("pred"), py::arg("gt"));
  m.def("cl_dice", [](const U8Array& pred, const U8Array& gt) { return cl_dice(to_mask(pred), to_mask(gt)); },
        py::arg("pred"), py::arg("gt"));
  m.def("mhd", [](const U8Array& pred, const U8Array& gt) { return mhd(to_mask(pred), to_mask(gt)); }, py::arg("pred"),
        py::arg("gt"));

  m.def("bland_altman",
        [](const std::vector<double>& pred, const std::vector<double>& gt) {
          const BlandAltmanResult r = bland_altman(pred, gt);
          py::dict d;
          d["mean_diff"] = r.mean_diff;
          d["sd"] = r.sd;
          d["loa_low"] = r.loa_low;
          d["loa_high"] = r.loa_high;
          d["mad"] = r.mad;
          return d;
        },
        py::arg("pred"), py::arg("gt"));

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "angio");
          std::ostringstream out, err;
          int code = 0;
          {
            py::gil_scoped_release release;
            code = cli::run(args, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
