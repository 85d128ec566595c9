// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "doctowers/alto.hpp"
#include "doctowers/error.hpp"
#include "doctowers/geometry_file.hpp"
#include "doctowers/idml.hpp"
#include "doctowers/metrics.hpp"
#include "doctowers/scene.hpp"

namespace py = pybind11;
using namespace doctowers;

namespace {

Quad quad_from(const std::vector<double>& xy) {
  if (xy.size() != 8) throw Error(ErrorKind::InvalidArgument, "a quad needs 8 coordinates");
  return Quad::from_coords(std::span<const double, 8>(xy.data(), 8));
}

py::tuple bbox_tuple(const Aabb& b) { return py::make_tuple(b.xmin, b.ymin, b.xmax, b.ymax); }

py::list pages_of(const DocumentGeometry& doc) {
  py::list pages;
  for (const PageRecord& p : doc.pages) {
    py::list entities;
    for (const EntityRecord& e : p.entities) {
      const auto c = e.quad.coords();
      py::dict d;
      d["code"] = e.cls.code();
      d["class"] = class_name(e.cls, doc.classes);
      d["quad"] = std::vector<double>(c.begin(), c.end());
      d["label"] = e.label ? py::cast(*e.label) : py::none();
      entities.append(d);
    }
    py::dict d;
    d["index"] = p.index;
    d["number"] = p.number;
    d["bounds"] = bbox_tuple(quad_bbox(p.bounds));
    d["entities"] = entities;
    pages.append(d);
  }
  return pages;
}

py::dict stats_dict(const DocumentGeometry& doc) {
  const StatsReport r = document_stats(doc);
  py::list pages;
  for (std::size_t i = 0; i < r.per_page.size(); ++i) {
    const PageMetrics& m = r.per_page[i];
    py::dict d;
    d["index"] = i;
    d["number"] = doc.pages[i].number;
    d["cardinality"] = m.cardinality_total;
    d["cardinality_by_class"] = m.cardinality_by_class;
    d["fill"] = m.fill_total_pct;
    d["fill_by_class"] = m.fill_by_class_pct;
    d["fill_sum"] = m.fill_sum_pct;
    d["out_of_frame"] = m.out_of_frame_count;
    pages.append(d);
  }
  auto extreme = [](const PageExtreme& e) {
    py::dict d;
    d["page"] = e.page_index;
    d["number"] = e.number;
    d["value"] = e.value;
    return d;
  };
  py::dict out;
  out["pages"] = pages;
  out["class_totals"] = r.class_totals;
  out["max_cardinality"] = extreme(r.extremes.max_cardinality);
  out["max_fill"] = extreme(r.extremes.max_fill);
  out["min_fill"] = extreme(r.extremes.min_fill);
  out["out_of_frame_total"] = r.out_of_frame_total;
  return out;
}

SceneConfig scene_config(double floor_height, const std::optional<std::string>& ribbon, bool global,
                         const std::optional<std::string>& pdf_base_url) {
  SceneConfig cfg;
  cfg.floor_height = floor_height;
  if (ribbon && *ribbon != "none") {
    const auto metric = parse_ribbon_metric(*ribbon);
    if (!metric) throw Error(ErrorKind::InvalidArgument, "ribbon must be none, cardinality or fill");
    cfg.ribbon = RibbonSpec{*metric, global ? RibbonScope::Global : RibbonScope::PerTower};
  }
  cfg.pdf_base_url = pdf_base_url;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Document Towers core: layout ingestion, page metrics and tower scenes";

  // Kept alive for the interpreter's lifetime.
  static PyObject* error_type = py::exception<Error>(m, "Error", PyExc_ValueError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<DocumentGeometry>(m, "Document")
      .def_readonly("source_name", &DocumentGeometry::source_name)
      .def_property_readonly("source_format", [](const DocumentGeometry& d) { return std::string(to_string(d.source_format)); })
      .def_property_readonly("unit", [](const DocumentGeometry& d) { return std::string(to_string(d.unit)); })
      .def_readonly("dpi", &DocumentGeometry::dpi)
      .def_property_readonly("page_count", [](const DocumentGeometry& d) { return d.pages.size(); })
      .def_property_readonly("entity_count", &DocumentGeometry::entity_count)
      .def_property_readonly("pages", &pages_of)
      .def("__eq__", [](const DocumentGeometry& a, const DocumentGeometry& b) { return a == b; })
      .def("__repr__", [](const DocumentGeometry& d) {
        return "<Document " + d.source_name + ": " + std::to_string(d.pages.size()) + " pages, " +
               std::to_string(d.entity_count()) + " entities>";
      });

  m.def("quad_area", [](const std::vector<double>& xy) { return quad_area(quad_from(xy)); }, py::arg("coords"),
        "Shoelace area of a quad given as [x1, y1, ..., x4, y4].");
  m.def("quad_bbox", [](const std::vector<double>& xy) { return bbox_tuple(quad_bbox(quad_from(xy))); },
        py::arg("coords"));
  m.def(
      "union_area",
      [](const std::vector<std::array<double, 4>>& boxes) {
        std::vector<Aabb> b;
        for (const auto& x : boxes) b.push_back({x[0], x[1], x[2], x[3]});
        return union_area_aabb(b);
      },
      py::arg("boxes"), "Area of the union of (xmin, ymin, xmax, ymax) boxes.");
  m.def(
      "to_points",
      [](double v, const std::string& unit, std::optional<double> dpi) {
        const auto u = alto::parse_alto_unit(unit);
        if (!u) throw Error(ErrorKind::UnknownMeasurementUnit, unit);
        const auto c = alto::to_points(v, *u, dpi);
        return py::make_tuple(c.value, std::string(to_string(c.unit)));
      },
      py::arg("value"), py::arg("unit"), py::arg("dpi") = py::none());

  m.def(
      "ingest_alto",
      [](const std::vector<std::pair<std::string, std::string>>& files, std::optional<double> dpi,
         const std::string& source_name) {
        std::vector<std::pair<std::string, alto::AltoPage>> pages;
        alto::AltoIngestOptions opts;
        opts.dpi = dpi;
        for (const auto& [name, xml] : files) pages.emplace_back(name, alto::parse_alto_page(xml, opts));
        return alto::assemble_document(std::move(pages), {source_name, dpi});
      },
      py::arg("pages"), py::arg("dpi") = py::none(), py::arg("source_name") = "",
      "Builds one document from (name, xml) pairs, one ALTO file per page.");
  m.def(
      "ingest_idml",
      [](const py::bytes& package, const std::string& source_name, bool masters, bool hidden) {
        idml::IdmlResult r =
            idml::parse_idml(std::string_view(package), {masters, hidden}, source_name);
        return py::make_tuple(std::move(r.doc), r.warnings);
      },
      py::arg("package"), py::arg("source_name") = "", py::arg("include_master_spreads") = false,
      py::arg("include_hidden_layers") = false, "Returns (document, warnings).");

  m.def("write_geometry", &write_geometry, py::arg("doc"));
  m.def("read_geometry", [](const std::string& text) { return read_geometry(text); }, py::arg("text"));
  m.def("merge", [](const std::vector<DocumentGeometry>& docs) { return merge_documents(docs); }, py::arg("docs"));
  m.def(
      "split",
      [](const DocumentGeometry& doc, const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
        std::vector<PageRange> r;
        for (const auto& [b, e] : ranges) r.push_back({b, e});
        return split_document(doc, r);
      },
      py::arg("doc"), py::arg("ranges"), "Half-open [begin, end) page ranges.");

  m.def("stats", &stats_dict, py::arg("doc"));

  m.def(
      "tower_scene",
      [](const DocumentGeometry& doc, double floor_height, std::optional<std::string> ribbon,
         std::optional<std::string> pdf_base_url) {
        return emit_scene(build_tower(doc, scene_config(floor_height, ribbon, false, pdf_base_url)));
      },
      py::arg("doc"), py::arg("floor_height") = 40.0, py::arg("ribbon") = py::none(),
      py::arg("pdf_base_url") = py::none(), "Scene file text for one tower.");
  m.def(
      "city_scene",
      [](const std::vector<DocumentGeometry>& docs, double floor_height, std::optional<std::string> ribbon) {
        const SceneConfig cfg = scene_config(floor_height, ribbon, true, std::nullopt);
        std::vector<TowerScene> towers;
        for (const auto& d : docs) towers.push_back(build_tower(d, cfg));
        return emit_scene(layout_city(std::move(towers), cfg));
      },
      py::arg("docs"), py::arg("floor_height") = 40.0, py::arg("ribbon") = py::none(),
      "Scene file text for a city of towers, ordered by source name.");
  m.def(
      "scene_kind",
      [](const std::string& text) {
        return std::holds_alternative<TowerScene>(parse_scene(text)) ? "tower" : "city";
      },
      py::arg("text"), "Validates a scene file and returns its kind.");
}
