// SPDX-License-Identifier: Apache-2.0
#include "doctowers/alto.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "doctowers/error.hpp"
#include "xml_dom.hpp"

namespace doctowers::alto {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

std::string describe(const std::string& path, const xml::Node& node) {
  return path + " (line " + std::to_string(node.line) + ")";
}

double numeric_attr(const xml::Node& node, std::string_view name, const std::string& path) {
  const auto raw = node.attr(name);
  if (!raw) {
    throw Error(ErrorKind::NonNumericCoordinate,
                describe(path, node) + ": missing attribute " + std::string(name));
  }
  const std::string_view s = trim(*raw);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::NonNumericCoordinate, describe(path, node) + ": " + std::string(name) +
                                                     "=\"" + std::string(*raw) + "\"");
  }
  return v;
}

struct PageParser {
  const AltoIngestOptions& opts;
  AltoUnit unit;
  std::map<std::string, std::string, std::less<>> tag_labels;
  Unit out_unit = Unit::Pt;
  std::vector<EntityRecord> entities;

  double convert(double v) {
    const Converted c = to_points(v, unit, opts.dpi);
    out_unit = c.unit;
    return c.value;
  }

  std::optional<std::string> label_for(const xml::Node& node) const {
    if (!opts.emit_labels) return std::nullopt;
    if (const auto refs = node.attr("TAGREFS")) {
      std::istringstream in{std::string(*refs)};
      std::string id;
      while (in >> id) {
        if (auto it = tag_labels.find(id); it != tag_labels.end()) {
          if (auto label = normalize_label(it->second)) return label;
        }
      }
    }
    if (const auto type = node.attr("TYPE")) {
      return normalize_label(std::string(*type));
    }
    return std::nullopt;
  }

  void emit(const xml::Node& node, EntityClass cls, const std::string& path) {
    const double x = convert(numeric_attr(node, "HPOS", path));
    const double y = convert(numeric_attr(node, "VPOS", path));
    const double w = convert(numeric_attr(node, "WIDTH", path));
    const double h = convert(numeric_attr(node, "HEIGHT", path));
    entities.push_back(EntityRecord{cls, Quad::rect(x, y, w, h), label_for(node), 0});
  }

  void walk(const xml::Node& parent, const std::string& parent_path) {
    std::map<std::string, int> seen;
    for (const xml::Node& node : parent.children) {
      const std::string path =
          parent_path + "/" + node.name + "[" + std::to_string(++seen[node.name]) + "]";
      if (node.name == "TextBlock") {
        emit(node, EntityClass::text_frame(), path);
      } else if (node.name == "Illustration") {
        emit(node, EntityClass::raster_image(), path);
      } else if (node.name == "GraphicalElement") {
        emit(node, EntityClass::vector_graphic(), path);
      } else if (node.name == "ComposedBlock") {
        if (opts.recurse_composed_blocks) {
          walk(node, path);
        } else {
          emit(node, EntityClass::text_frame(), path);
        }
      } else {
        walk(node, path);
      }
    }
  }
};

AltoUnit read_unit(const xml::Node& root) {
  const xml::Node* desc = root.child("Description");
  const xml::Node* mu = desc ? desc->child("MeasurementUnit") : nullptr;
  if (!mu) return AltoUnit::Pixel;  // ALTO default
  const auto unit = parse_alto_unit(trim(mu->text));
  if (!unit) {
    throw Error(ErrorKind::UnknownMeasurementUnit,
                describe("/alto/Description/MeasurementUnit", *mu) + ": \"" + mu->text + "\"");
  }
  return *unit;
}

}  // namespace

std::optional<AltoUnit> parse_alto_unit(std::string_view s) noexcept {
  if (s == "pixel") return AltoUnit::Pixel;
  if (s == "mm10") return AltoUnit::Mm10;
  if (s == "inch1200") return AltoUnit::Inch1200;
  return std::nullopt;
}

Converted to_points(double v, AltoUnit unit, std::optional<double> dpi) {
  switch (unit) {
    case AltoUnit::Inch1200: return {v * 72.0 / 1200.0, Unit::Pt};
    case AltoUnit::Mm10: return {v * 72.0 / 254.0, Unit::Pt};
    case AltoUnit::Pixel:
      if (dpi) {
        if (!(*dpi > 0.0)) throw Error(ErrorKind::InvalidArgument, "dpi must be positive");
        return {v * 72.0 / *dpi, Unit::Pt};
      }
      return {v, Unit::Px};
  }
  return {v, Unit::Px};
}

AltoPage parse_alto_page(std::string_view xml_bytes, const AltoIngestOptions& opts) {
  if (opts.dpi && !(*opts.dpi > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "dpi must be positive");
  }
  const xml::Node root = xml::parse(xml_bytes);
  if (root.name != "alto") {
    throw Error(ErrorKind::MissingPageElement, "root element is <" + root.name + ">, not <alto>");
  }
  const xml::Node* layout = root.child("Layout");
  const xml::Node* page_node = layout ? layout->child("Page") : nullptr;
  if (!page_node) {
    throw Error(ErrorKind::MissingPageElement, "/alto/Layout/Page not found");
  }

  PageParser parser{opts, read_unit(root), {}, Unit::Pt, {}};
  parser.out_unit = to_points(0.0, parser.unit, opts.dpi).unit;
  if (const xml::Node* tags = root.child("Tags")) {
    for (const xml::Node& tag : tags->children) {
      const auto id = tag.attr("ID");
      const auto label = tag.attr("LABEL");
      if (id && label) parser.tag_labels.emplace(std::string(*id), std::string(*label));
    }
  }

  const std::string page_path = "/alto/Layout/Page[1]";
  const double width = parser.convert(numeric_attr(*page_node, "WIDTH", page_path));
  const double height = parser.convert(numeric_attr(*page_node, "HEIGHT", page_path));
  if (!(width > 0.0 && height > 0.0)) {
    throw Error(ErrorKind::InvalidGeometry,
                describe(page_path, *page_node) + ": page WIDTH and HEIGHT must be positive");
  }
  parser.walk(*page_node, page_path);

  AltoPage out;
  out.unit = parser.out_unit;
  out.page.bounds = Quad::rect(0.0, 0.0, width, height);
  out.page.entities = std::move(parser.entities);
  if (const auto nr = page_node->attr("PHYSICAL_IMG_NR")) {
    out.page.number = std::string(trim(*nr));
  }
  return out;
}

namespace {

void scale_page(PageRecord& page, double factor) {
  auto scale = [factor](Quad& q) {
    for (Point2& p : q.corners) {
      p.x *= factor;
      p.y *= factor;
    }
  };
  scale(page.bounds);
  for (auto& e : page.entities) scale(e.quad);
}

}  // namespace

DocumentGeometry assemble_document(std::vector<std::pair<std::string, AltoPage>> pages,
                                   const AssembleMeta& meta) {
  if (pages.empty()) throw Error(ErrorKind::InvalidArgument, "no pages to assemble");
  if (meta.dpi && !(*meta.dpi > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "dpi must be positive");
  }
  bool any_px = false;
  bool any_pt = false;
  for (const auto& [name, p] : pages) (p.unit == Unit::Px ? any_px : any_pt) = true;

  DocumentGeometry doc;
  doc.source_name = meta.source_name.empty() ? pages.front().first : meta.source_name;
  doc.source_format = SourceFormat::Alto;
  doc.unit = Unit::Pt;
  if (any_px && meta.dpi) {
    for (auto& [name, p] : pages) {
      if (p.unit == Unit::Px) {
        scale_page(p.page, 72.0 / *meta.dpi);
        p.unit = Unit::Pt;
      }
    }
  } else if (any_px && any_pt) {
    throw Error(ErrorKind::MixedUnits,
                "pixel pages without a resolution cannot be combined with point pages");
  } else if (any_px) {
    doc.unit = Unit::Px;
    doc.dpi = meta.dpi;
  }

  doc.pages.reserve(pages.size());
  for (std::size_t i = 0; i < pages.size(); ++i) {
    PageRecord page = std::move(pages[i].second.page);
    if (page.number.empty()) page.number = std::to_string(i + 1);
    doc.pages.push_back(std::move(page));
  }
  reindex_pages(doc);
  return doc;
}

}  // namespace doctowers::alto
