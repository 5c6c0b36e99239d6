#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tracelab/acceptance.hpp"
#include "tracelab/error.hpp"
#include "tracelab/gallery.hpp"
#include "tracelab/limits.hpp"
#include "tracelab/model_io.hpp"
#include "tracelab/profiles.hpp"

namespace py = pybind11;
using namespace tracelab;

namespace {

SweepOptions sweep(const std::string& thresholds) {
    SweepOptions so;
    if (!thresholds.empty()) so.thresholds = parse_thresholds(thresholds);
    return so;
}

}  // namespace

PYBIND11_MODULE(_trace_lab, m) {
    m.doc() = "log-domain step functions, scale profiles and trace verdicts";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<OperatorModel>(m, "OperatorModel")
        .def_readonly("label", &OperatorModel::label)
        .def_property_readonly("pieces", [](const OperatorModel& o) { return o.mu.pieces(); })
        .def_property_readonly("horizon_log",
                               [](const OperatorModel& o) -> std::optional<double> {
                                   if (!o.horizon_log) return std::nullopt;
                                   return o.horizon_log->to_double();
                               })
        .def_property_readonly("has_spectrum", [](const OperatorModel& o) { return o.spectrum.has_value(); })
        .def("mu", [](const OperatorModel& o, double v) { return o.mu.eval(DD(v)).to_double(); }, py::arg("v"),
             "mu at t = e^v")
        .def("integral", [](const OperatorModel& o, double v) { return o.mu.integral(DD(v)).to_double(); },
             py::arg("v"), "integral of mu over [0, e^v]")
        .def("to_json", [](const OperatorModel& o) { return to_json(o).dump(); });

    py::class_<Profile>(m, "Profile")
        .def_property_readonly("coord", [](const Profile& p) { return p.coord_label(); })
        .def_property_readonly("provenance", &Profile::provenance)
        .def_property_readonly("lo", [](const Profile& p) { return p.lo().to_double(); })
        .def_property_readonly("hi", [](const Profile& p) { return p.hi().to_double(); })
        .def("__call__", [](const Profile& p, double x) { return p.at(DD(x)).to_double(); }, py::arg("x"))
        .def("logmag", [](const Profile& p, double x) { return p.at(DD(x)).logmag().to_double(); }, py::arg("x"))
        .def("values",
             [](const Profile& p, const std::vector<double>& xs) {
                 std::vector<double> out;
                 out.reserve(xs.size());
                 for (double x : xs) out.push_back(p.at(DD(x)).to_double());
                 return out;
             })
        .def("reframe", [](const Profile& p, const std::string& c) { return p.reframe(parse_coord(c)); },
             py::arg("coord"));

    m.def("gallery_names", [] {
        std::vector<std::string> names;
        for (const auto& e : gallery_entries()) names.push_back(e.name);
        return names;
    });
    m.def("operator", &resolve_operator, py::arg("source"), "gallery name or operator file");
    m.def("make_t0", &make_t0, py::arg("k_max") = kT0DefaultDepth);
    m.def("x_function", &make_x_function, py::arg("k_max") = kT0DefaultDepth);

    m.def("dixmier_profile", &dixmier_profile);
    m.def("truncated_profile", &truncated_profile);
    m.def("remainder_mu", &remainder_mu);
    m.def("remainder_d", &remainder_d);
    m.def("zeta_profile", &zeta_profile);
    m.def("beta_profile", &beta_profile);
    m.def("periodic_mean",
          [](const Profile& p, double period, double threshold) {
              PeriodicMean r = periodic_mean(p, period, threshold);
              return py::make_tuple(r.value, r.error);
          },
          py::arg("profile"), py::arg("period") = 1.0, py::arg("threshold") = 1e-6);

    m.def("_verdict",
          [](const OperatorModel& o, const std::string& cls, const std::string& thresholds) {
              if (cls == "dixmier") return to_json(dixmier_verdict(o, sweep(thresholds))).dump();
              if (cls == "dp") return to_json(dp_verdict(o, sweep(thresholds))).dump();
              throw ConfigError("unknown class '" + cls + "' (dixmier or dp)");
          });

    m.def("lidskii_sums",
          [](std::uint64_t seed, std::int64_t n, const std::string& law, const std::vector<double>& vs) {
              LidskiiTable tab(random_spectrum(seed, n, parse_law(law)));
              py::list rows;
              for (double v : vs) {
                  LidskiiSums s = tab.at(DD(v));
                  py::dict d;
                  d["v"] = v;
                  d["circle"] = py::make_tuple(s.circle_re.to_double(), s.circle_im.to_double());
                  d["rect"] = py::make_tuple(s.rect_re.to_double(), s.rect_im.to_double());
                  d["re_only"] = s.re_only.to_double();
                  d["im_only"] = s.im_only.to_double();
                  d["d_t"] = s.d_t;
                  d["d_im"] = s.d_im;
                  rows.append(d);
              }
              return rows;
          },
          py::arg("seed"), py::arg("n"), py::arg("law"), py::arg("v"));

    m.def("run_criterion",
          [](int id, const std::string& thresholds) {
              AcceptOptions o;
              if (!thresholds.empty()) o.thresholds = parse_thresholds(thresholds);
              CriterionResult r = run_criterion(id, o);
              py::dict d;
              d["id"] = r.id;
              d["title"] = r.title;
              d["pass"] = r.pass;
              d["measured"] = r.measured;
              d["seconds"] = r.seconds;
              return d;
          },
          py::arg("id"), py::arg("thresholds") = "");
}
