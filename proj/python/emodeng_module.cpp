// Python bindings.  Structured results cross as JSON text; the package
// wrapper decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "emodeng/candidate_store.hpp"
#include "emodeng/config.hpp"
#include "emodeng/error.hpp"
#include "emodeng/lexicon.hpp"
#include "emodeng/pipeline.hpp"
#include "emodeng/typography.hpp"

namespace py = pybind11;
using namespace emodeng;

namespace {

std::string transcribe_json(const Pipeline& p, const std::string& text, const std::string& doc) {
  TranscriptionResult r;
  {
    py::gil_scoped_release release;
    r = p.transcribe(text, doc);
  }
  nlohmann::json j;
  j["doc"] = doc;
  j["output"] = r.output;
  j["annotations"] = nlohmann::json::array();
  for (const auto& a : r.annotations) j["annotations"].push_back(to_json(a, doc));
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : r.candidates) j["candidates"].push_back(to_json(c));
  j["report"] = r.report.to_json();
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_emodeng, m) {
  m.attr("__version__") = EMODENG_VERSION;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<StoreError>(m, "StoreError", base.ptr());

  py::class_<Pipeline>(m, "Pipeline")
      .def_static(
          "from_config", [](const std::filesystem::path& path) { return Pipeline(load_config(path)); },
          py::arg("path"))
      .def_static(
          "from_data_dir",
          [](const std::filesystem::path& dir) { return Pipeline(default_config(dir)); }, py::arg("data_dir"))
      .def(
          "normalize",
          [](const Pipeline& p, const std::string& text) {
            py::gil_scoped_release release;
            return p.transcribe(text).output;
          },
          py::arg("text"))
      .def("transcribe_json", &transcribe_json, py::arg("text"), py::arg("doc") = "")
      .def("data_versions", &Pipeline::data_versions);

  m.def(
      "normalize_chars", [](const std::string& text) { return normalize_chars(text).text; }, py::arg("text"));
  m.def(
      "canonical_entry", [](const std::string& line) { return serialize_entry(parse_entry_line(line)); },
      py::arg("line"));
}
