// SPDX-License-Identifier: Apache-2.0
#include "doctowers/idml.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "doctowers/error.hpp"
#include "doctowers/zip.hpp"
#include "xml_dom.hpp"

namespace doctowers::idml {

Affine2 Affine2::rotate(double radians) noexcept {
  const double cs = std::cos(radians);
  const double sn = std::sin(radians);
  return {cs, sn, -sn, cs, 0, 0};
}

bool Affine2::is_finite() const noexcept {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d) &&
         std::isfinite(tx) && std::isfinite(ty);
}

Affine2 compose(const Affine2& p, const Affine2& q) noexcept {
  return {p.a * q.a + p.c * q.b,         p.b * q.a + p.d * q.b,
          p.a * q.c + p.c * q.d,         p.b * q.c + p.d * q.d,
          p.a * q.tx + p.c * q.ty + p.tx, p.b * q.tx + p.d * q.ty + p.ty};
}

Point2 apply(const Affine2& t, Point2 p) noexcept {
  return {t.a * p.x + t.c * p.y + t.tx, t.b * p.x + t.d * p.y + t.ty};
}

Quad apply(const Affine2& t, const Quad& q) noexcept {
  Quad out;
  for (std::size_t i = 0; i < 4; ++i) out.corners[i] = apply(t, q.corners[i]);
  return out;
}

std::optional<Affine2> inverse(const Affine2& t) noexcept {
  const double det = t.determinant();
  if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
  const double ia = t.d / det;
  const double ib = -t.b / det;
  const double ic = -t.c / det;
  const double id = t.a / det;
  return Affine2{ia, ib, ic, id, -(ia * t.tx + ic * t.ty), -(ib * t.tx + id * t.ty)};
}

namespace {

std::vector<double> parse_numbers(std::string_view s) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i == s.size()) break;
    double v = 0.0;
    const auto res = std::from_chars(s.data() + i, s.data() + s.size(), v);
    if (res.ec != std::errc{} || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidArgument, "not a number list: \"" + std::string(s) + "\"");
    }
    out.push_back(v);
    i = static_cast<std::size_t>(res.ptr - s.data());
  }
  return out;
}

}  // namespace

Affine2 parse_item_transform(std::string_view s) {
  const auto v = parse_numbers(s);
  if (v.size() != 6) {
    throw Error(ErrorKind::InvalidArgument, "ItemTransform needs 6 numbers: \"" + std::string(s) + "\"");
  }
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

PageAssignment assign_to_page(const Quad& item, std::span<const SpreadPage> pages) {
  if (pages.empty()) throw Error(ErrorKind::NoPagesInSpread, "spread has no pages");
  const Aabb box = quad_bbox(item);

  auto center_distance = [&](const SpreadPage& p) {
    const Point2 a = box.center();
    const Point2 b = p.bounds_in_spread.center();
    return std::hypot(a.x - b.x, a.y - b.y);
  };
  auto touches = [&](const SpreadPage& p) {
    const Aabb& r = p.bounds_in_spread;
    return box.xmin <= r.xmax && box.xmax >= r.xmin && box.ymin <= r.ymax && box.ymax >= r.ymin;
  };

  std::size_t best = 0;
  double best_area = -1.0;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const double area = overlap_area(box, pages[i].bounds_in_spread);
    if (area > best_area) {
      best_area = area;
      best = i;
    }
  }
  if (best_area <= 0.0) {
    // Hairlines have zero overlap area everywhere; prefer pages they touch.
    const bool any_touch = std::any_of(pages.begin(), pages.end(), touches);
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pages.size(); ++i) {
      if (any_touch && !touches(pages[i])) continue;
      const double dist = center_distance(pages[i]);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
  }

  const SpreadPage& page = pages[best];
  const auto inv = inverse(page.transform);
  if (!inv) throw Error(ErrorKind::InvalidGeometry, "page transform is singular");
  const Affine2 to_local = compose(Affine2::translate(-page.origin.x, -page.origin.y), *inv);
  return {page.page_index, apply(to_local, item)};
}

namespace {

const std::set<std::string, std::less<>> kUnsupportedItems = {
    "Button",  "MultiStateObject", "CheckBox",       "ComboBox", "ListBox", "RadioButton",
    "TextBox", "SignatureField",   "HtmlItem",       "EPSText",  "FormField",
    "MediaItem", "Sound",          "Movie"};

const std::set<std::string, std::less<>> kVectorContent = {"PDF", "EPS", "WMF", "PICT",
                                                           "ImportedPage"};

struct LayerInfo {
  std::string name;
  bool visible = true;
};

struct ParsedPage {
  SpreadPage spread_page;
  PageRecord record;
  std::string applied_master;
  std::size_t position_in_spread = 0;
};

struct ParsedSpread {
  std::vector<ParsedPage> pages;
  std::vector<EntityRecord> entities;  // page_index refers to ParsedPage position
};

class PackageReader {
 public:
  PackageReader(const zip::Archive& archive, const IdmlIngestOptions& opts, IdmlResult& result)
      : archive_(archive), opts_(opts), result_(result) {}

  void read_designmap(const xml::Node& root) {
    const auto version = root.attr("DOMVersion");
    double major = 0.0;
    if (version) {
      const auto v = *version;
      std::from_chars(v.data(), v.data() + v.size(), major);
    }
    if (!version || major < 6.0 || major >= 21.0) {
      warn("UnsupportedIdmlVersion: DOMVersion \"" + std::string(version.value_or("")) +
           "\" outside the tested 6.x-20.x range; continuing");
    }
    for (const xml::Node& child : root.children) {
      if (child.name == "Layer") {
        LayerInfo info;
        info.name = std::string(child.attr("Name").value_or(""));
        info.visible = child.attr("Visible").value_or("true") != "false";
        layers_[std::string(child.attr("Self").value_or(""))] = info;
      } else if (child.name == "Spread" || child.name == "MasterSpread") {
        const auto src = child.attr("src");
        if (!src) continue;
        (child.name == "Spread" ? spread_parts_ : master_parts_).emplace_back(*src);
      }
    }
  }

  const std::vector<std::string>& spread_parts() const { return spread_parts_; }
  const std::vector<std::string>& master_parts() const { return master_parts_; }

  /// Parses one spread part; `master` selects the MasterSpread root element.
  ParsedSpread parse_spread(const std::string& part, bool master) {
    const auto bytes = archive_.read(part);
    if (!bytes) throw Error(ErrorKind::MalformedSpread, part + ": part missing from package");
    xml::Node root;
    try {
      root = xml::parse(*bytes);
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedSpread, part + ": " + e.what());
    }
    const char* element = master ? "MasterSpread" : "Spread";
    const xml::Node* spread = root.name == element && !root.child(element) ? &root : root.child(element);
    if (!spread) throw Error(ErrorKind::MalformedSpread, part + ": no <" + element + "> element");

    current_part_ = part;
    ParsedSpread out;
    try {
      for (const xml::Node* page_node : spread->children_named("Page")) {
        out.pages.push_back(parse_page(*page_node, out.pages.size()));
      }
      std::vector<SpreadPage> spread_pages;
      for (const auto& p : out.pages) spread_pages.push_back(p.spread_page);

      std::vector<Item> items;
      collect_items(*spread, Affine2::identity(), std::nullopt, items);
      if (!items.empty() && spread_pages.empty()) {
        throw Error(ErrorKind::NoPagesInSpread, "items present but spread has no pages");
      }
      for (Item& item : items) {
        const PageAssignment a = assign_to_page(item.quad, spread_pages);
        out.entities.push_back(EntityRecord{item.cls, a.quad, std::move(item.label), a.page_index});
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::MalformedSpread || e.kind() == ErrorKind::NoPagesInSpread) throw;
      throw Error(ErrorKind::MalformedSpread, part + ": " + e.what());
    }
    return out;
  }

  void warn(std::string message) { result_.warnings.push_back(std::move(message)); }

 private:
  struct Item {
    EntityClass cls;
    Quad quad;
    std::optional<std::string> label;
  };

  Affine2 transform_of(const xml::Node& node) const {
    const auto raw = node.attr("ItemTransform");
    return raw ? parse_item_transform(*raw) : Affine2::identity();
  }

  ParsedPage parse_page(const xml::Node& node, std::size_t position) {
    const auto gb = node.attr("GeometricBounds");
    if (!gb) throw Error(ErrorKind::MalformedSpread, current_part_ + ": Page without GeometricBounds");
    const auto v = parse_numbers(*gb);
    if (v.size() != 4) {
      throw Error(ErrorKind::MalformedSpread, current_part_ + ": GeometricBounds needs 4 numbers");
    }
    // "y1 x1 y2 x2"
    const Aabb inner{std::min(v[1], v[3]), std::min(v[0], v[2]), std::max(v[1], v[3]),
                     std::max(v[0], v[2])};
    if (!(inner.area() > 0.0)) {
      throw Error(ErrorKind::MalformedSpread, current_part_ + ": page has zero area");
    }
    const Affine2 t = transform_of(node);
    if (!inverse(t)) throw Error(ErrorKind::MalformedSpread, current_part_ + ": singular page transform");

    ParsedPage page;
    page.position_in_spread = position;
    page.spread_page = SpreadPage{position, quad_bbox(apply(t, Quad::from_box(inner))), t,
                                  Point2{inner.xmin, inner.ymin}};
    page.record.number = std::string(node.attr("Name").value_or(""));
    page.record.bounds = Quad::rect(0.0, 0.0, inner.width(), inner.height());
    page.applied_master = std::string(node.attr("AppliedMaster").value_or(""));
    return page;
  }

  void collect_items(const xml::Node& parent, const Affine2& parent_transform,
                     std::optional<std::string> inherited_layer, std::vector<Item>& out) {
    for (const xml::Node& node : parent.children) {
      const bool frame = node.name == "Rectangle" || node.name == "Oval" || node.name == "Polygon";
      const bool leaf = frame || node.name == "TextFrame" || node.name == "GraphicLine";
      const bool group = node.name == "Group";
      if (!leaf && !group) {
        if (kUnsupportedItems.contains(node.name)) {
          ++result_.items_walked;
          ++result_.items_skipped;
          warn(current_part_ + ": skipped unsupported page item <" + node.name + "> (line " +
               std::to_string(node.line) + ")");
        }
        continue;
      }

      std::optional<std::string> layer_id = inherited_layer;
      if (const auto l = node.attr("ItemLayer")) layer_id = std::string(*l);
      const LayerInfo* layer = nullptr;
      if (layer_id) {
        if (auto it = layers_.find(*layer_id); it != layers_.end()) layer = &it->second;
      }
      const Affine2 transform = compose(parent_transform, transform_of(node));

      if (group) {
        collect_items(node, transform, layer_id, out);
        continue;
      }

      ++result_.items_walked;
      if (layer && !layer->visible && !opts_.include_hidden_layers) {
        ++result_.items_skipped;
        continue;
      }
      const auto inner = inner_bounds(node);
      if (!inner) {
        ++result_.items_skipped;
        warn(current_part_ + ": <" + node.name + "> without geometry skipped (line " +
             std::to_string(node.line) + ")");
        continue;
      }

      EntityClass cls = EntityClass::text_frame();
      if (node.name == "GraphicLine") {
        cls = EntityClass::vector_graphic();
      } else if (frame) {
        cls = EntityClass::vector_graphic();
        for (const xml::Node& c : node.children) {
          if (c.name == "Image") {
            cls = EntityClass::raster_image();
            break;
          }
          if (kVectorContent.contains(c.name)) break;
        }
      }
      std::optional<std::string> label;
      if (layer) label = normalize_label(layer->name);
      out.push_back(Item{cls, apply(transform, Quad::from_box(*inner)), std::move(label)});
    }
  }

  /// Extent of the path anchors in item coordinates, falling back to the
  /// legacy GeometricBounds attribute.
  std::optional<Aabb> inner_bounds(const xml::Node& node) const {
    std::optional<Aabb> box;
    auto include = [&](double x, double y) {
      if (!box) {
        box = Aabb{x, y, x, y};
      } else {
        box->xmin = std::min(box->xmin, x);
        box->ymin = std::min(box->ymin, y);
        box->xmax = std::max(box->xmax, x);
        box->ymax = std::max(box->ymax, y);
      }
    };
    const xml::Node* props = node.child("Properties");
    const xml::Node* geom = props ? props->child("PathGeometry") : nullptr;
    if (geom) {
      for (const xml::Node* path : geom->children_named("GeometryPathType")) {
        const xml::Node* arr = path->child("PathPointArray");
        if (!arr) continue;
        for (const xml::Node* pt : arr->children_named("PathPointType")) {
          const auto anchor = pt->attr("Anchor");
          if (!anchor) continue;
          const auto v = parse_numbers(*anchor);
          if (v.size() != 2) throw Error(ErrorKind::MalformedSpread, current_part_ + ": bad Anchor");
          include(v[0], v[1]);
        }
      }
    }
    if (!box) {
      if (const auto gb = node.attr("GeometricBounds")) {
        const auto v = parse_numbers(*gb);
        if (v.size() == 4) {
          include(v[1], v[0]);
          include(v[3], v[2]);
        }
      }
    }
    return box;
  }

  const zip::Archive& archive_;
  const IdmlIngestOptions& opts_;
  IdmlResult& result_;
  std::map<std::string, LayerInfo> layers_;
  std::vector<std::string> spread_parts_;
  std::vector<std::string> master_parts_;
  std::string current_part_;
};

}  // namespace

IdmlResult parse_idml(std::string_view package, const IdmlIngestOptions& opts,
                      std::string source_name) {
  if (!zip::looks_like_zip(package)) {
    throw Error(ErrorKind::NotAZipArchive, "missing ZIP local header signature");
  }
  const zip::Archive archive = zip::Archive::open(std::string(package));
  const auto designmap = archive.read("designmap.xml");
  if (!designmap) throw Error(ErrorKind::MissingDesignMap, "designmap.xml not in package");

  IdmlResult result;
  PackageReader reader(archive, opts, result);
  try {
    reader.read_designmap(xml::parse(*designmap));
  } catch (const Error& e) {
    throw Error(ErrorKind::MissingDesignMap, std::string("designmap.xml unreadable: ") + e.what());
  }

  // Master pages, keyed by master spread Self id, each holding per-page
  // entities in master-page-local coordinates.
  std::map<std::string, std::vector<std::vector<EntityRecord>>> masters;
  if (opts.include_master_spreads) {
    for (const std::string& part : reader.master_parts()) {
      const auto bytes = archive.read(part);
      if (!bytes) throw Error(ErrorKind::MalformedSpread, part + ": part missing from package");
      std::string self;
      try {
        const xml::Node root = xml::parse(*bytes);
        const xml::Node* ms = root.name == "MasterSpread" && !root.child("MasterSpread")
                                  ? &root
                                  : root.child("MasterSpread");
        if (ms) self = std::string(ms->attr("Self").value_or(""));
      } catch (const Error& e) {
        throw Error(ErrorKind::MalformedSpread, part + ": " + e.what());
      }
      // Master items are counted per emitted copy below.
      const std::size_t walked_before = result.items_walked;
      const std::size_t skipped_before = result.items_skipped;
      ParsedSpread spread = reader.parse_spread(part, true);
      const std::size_t hidden = result.items_skipped - skipped_before;
      result.items_walked = walked_before + hidden;
      std::vector<std::vector<EntityRecord>> per_page(spread.pages.size());
      for (auto& e : spread.entities) per_page[e.page_index].push_back(std::move(e));
      masters[self] = std::move(per_page);
    }
  }

  DocumentGeometry& doc = result.doc;
  doc.source_name = std::move(source_name);
  doc.source_format = SourceFormat::Idml;
  doc.unit = Unit::Pt;
  for (const std::string& part : reader.spread_parts()) {
    ParsedSpread spread = reader.parse_spread(part, false);
    const std::size_t base = doc.pages.size();
    for (ParsedPage& p : spread.pages) {
      PageRecord record = std::move(p.record);
      if (auto it = masters.find(p.applied_master); it != masters.end() && !it->second.empty()) {
        const auto& master_pages = it->second;
        const std::size_t which = std::min(p.position_in_spread, master_pages.size() - 1);
        for (const EntityRecord& e : master_pages[which]) {
          record.entities.push_back(e);
          ++result.items_walked;
        }
      }
      doc.pages.push_back(std::move(record));
    }
    for (EntityRecord& e : spread.entities) {
      doc.pages[base + e.page_index].entities.push_back(std::move(e));
    }
  }
  if (doc.pages.empty()) throw Error(ErrorKind::MalformedSpread, "package contains no pages");
  for (std::size_t i = 0; i < doc.pages.size(); ++i) {
    if (doc.pages[i].number.empty()) doc.pages[i].number = std::to_string(i + 1);
  }
  reindex_pages(doc);
  return result;
}

}  // namespace doctowers::idml
