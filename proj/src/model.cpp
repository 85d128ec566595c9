// SPDX-License-Identifier: Apache-2.0
#include "doctowers/model.hpp"

#include <algorithm>
#include <cmath>

#include "doctowers/error.hpp"

namespace doctowers {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownClassCode: return "UnknownClassCode";
    case ErrorKind::InvalidGeometry: return "InvalidGeometry";
    case ErrorKind::MalformedXml: return "MalformedXml";
    case ErrorKind::MissingPageElement: return "MissingPageElement";
    case ErrorKind::UnknownMeasurementUnit: return "UnknownMeasurementUnit";
    case ErrorKind::NonNumericCoordinate: return "NonNumericCoordinate";
    case ErrorKind::MixedUnits: return "MixedUnits";
    case ErrorKind::NoPagesInSpread: return "NoPagesInSpread";
    case ErrorKind::NotAZipArchive: return "NotAZipArchive";
    case ErrorKind::MissingDesignMap: return "MissingDesignMap";
    case ErrorKind::MalformedSpread: return "MalformedSpread";
    case ErrorKind::BadHeader: return "BadHeader";
    case ErrorKind::RecordArityError: return "RecordArityError";
    case ErrorKind::FirstRecordNotPage: return "FirstRecordNotPage";
    case ErrorKind::ParallelArrayMismatch: return "ParallelArrayMismatch";
    case ErrorKind::ClassRegistryConflict: return "ClassRegistryConflict";
    case ErrorKind::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorKind::OverlappingRanges: return "OverlappingRanges";
    case ErrorKind::BadScene: return "BadScene";
  }
  return "Unknown";
}

Aabb intersect(const Aabb& a, const Aabb& b) noexcept {
  Aabb r{std::max(a.xmin, b.xmin), std::max(a.ymin, b.ymin), std::min(a.xmax, b.xmax),
         std::min(a.ymax, b.ymax)};
  if (r.xmax < r.xmin) r.xmax = r.xmin;
  if (r.ymax < r.ymin) r.ymax = r.ymin;
  return r;
}

double overlap_area(const Aabb& a, const Aabb& b) noexcept { return intersect(a, b).area(); }

Quad Quad::rect(double x, double y, double width, double height) noexcept {
  return Quad{{Point2{x, y}, Point2{x + width, y}, Point2{x + width, y + height},
               Point2{x, y + height}}};
}

Quad Quad::from_box(const Aabb& box) noexcept {
  return Quad{{Point2{box.xmin, box.ymin}, Point2{box.xmax, box.ymin}, Point2{box.xmax, box.ymax},
               Point2{box.xmin, box.ymax}}};
}

Quad Quad::from_coords(std::span<const double, 8> coords) {
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) {
    q.corners[i] = {coords[2 * i], coords[2 * i + 1]};
  }
  if (!is_finite(q)) {
    throw Error(ErrorKind::InvalidGeometry, "quad coordinates must be finite");
  }
  return q;
}

std::array<double, 8> Quad::coords() const noexcept {
  std::array<double, 8> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[2 * i] = corners[i].x;
    out[2 * i + 1] = corners[i].y;
  }
  return out;
}

double quad_area(const Quad& q) noexcept {
  double twice = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2& p = q.corners[i];
    const Point2& n = q.corners[(i + 1) % 4];
    twice += p.x * n.y - n.x * p.y;
  }
  return std::abs(twice) / 2.0;
}

Aabb quad_bbox(const Quad& q) noexcept {
  Aabb box{q.corners[0].x, q.corners[0].y, q.corners[0].x, q.corners[0].y};
  for (const Point2& p : q.corners) {
    box.xmin = std::min(box.xmin, p.x);
    box.ymin = std::min(box.ymin, p.y);
    box.xmax = std::max(box.xmax, p.x);
    box.ymax = std::max(box.ymax, p.y);
  }
  return box;
}

bool is_finite(const Quad& q) noexcept {
  return std::all_of(q.corners.begin(), q.corners.end(),
                     [](const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); });
}

EntityClass ClassRegistry::add(int code, const std::string& name) {
  if (code < EntityClass::kFirstUserCode) {
    throw Error(ErrorKind::InvalidArgument,
                "user-defined class codes start at 100, got " + std::to_string(code));
  }
  const auto trimmed = normalize_label(name);
  if (!trimmed) {
    throw Error(ErrorKind::InvalidArgument, "class name must not be blank");
  }
  if (auto it = names_.find(code); it != names_.end()) {
    if (it->second == *trimmed) return EntityClass(code);
    throw Error(ErrorKind::ClassRegistryConflict,
                "code " + std::to_string(code) + " already names '" + it->second + "'");
  }
  if (find(*trimmed)) {
    throw Error(ErrorKind::ClassRegistryConflict, "class name '" + *trimmed + "' already used");
  }
  names_.emplace(code, *trimmed);
  return EntityClass(code);
}

std::optional<EntityClass> ClassRegistry::find(std::string_view name) const {
  for (const auto& [code, n] : names_) {
    if (n == name) return EntityClass(code);
  }
  return std::nullopt;
}

EntityClass ClassRegistry::class_for_code(int code) const {
  if (code >= 0 && code <= EntityClass::kVectorGraphicCode) return EntityClass(code);
  if (code >= EntityClass::kFirstUserCode && names_.contains(code)) return EntityClass(code);
  throw Error(ErrorKind::UnknownClassCode, "class code " + std::to_string(code) +
                                               (code > 3 && code < 100 ? " is reserved"
                                                                       : " is not registered"));
}

EntityClass class_for_code(int code) { return ClassRegistry{}.class_for_code(code); }

EntityClass class_for_code(int code, const ClassRegistry& registry) {
  return registry.class_for_code(code);
}

std::string class_name(EntityClass cls, const ClassRegistry& registry) {
  switch (cls.code()) {
    case EntityClass::kPageCode: return "page";
    case EntityClass::kTextFrameCode: return "text";
    case EntityClass::kRasterImageCode: return "raster";
    case EntityClass::kVectorGraphicCode: return "vector";
    default: break;
  }
  if (auto it = registry.entries().find(cls.code()); it != registry.entries().end()) {
    return it->second;
  }
  return "class" + std::to_string(cls.code());
}

std::optional<std::string> normalize_label(std::optional<std::string> label) {
  if (!label) return std::nullopt;
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = label->find_first_not_of(ws);
  if (first == std::string::npos) return std::nullopt;
  const auto last = label->find_last_not_of(ws);
  return label->substr(first, last - first + 1);
}

std::string_view to_string(SourceFormat f) noexcept {
  switch (f) {
    case SourceFormat::Alto: return "alto";
    case SourceFormat::Idml: return "idml";
    case SourceFormat::External: return "external";
  }
  return "external";
}

std::string_view to_string(Unit u) noexcept { return u == Unit::Pt ? "pt" : "px"; }

std::optional<SourceFormat> parse_source_format(std::string_view s) noexcept {
  if (s == "alto") return SourceFormat::Alto;
  if (s == "idml") return SourceFormat::Idml;
  if (s == "external") return SourceFormat::External;
  return std::nullopt;
}

std::optional<Unit> parse_unit(std::string_view s) noexcept {
  if (s == "pt") return Unit::Pt;
  if (s == "px") return Unit::Px;
  return std::nullopt;
}

std::size_t DocumentGeometry::entity_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : pages) n += p.entities.size();
  return n;
}

void validate(const DocumentGeometry& doc) {
  if (doc.pages.empty()) {
    throw Error(ErrorKind::InvalidGeometry, "document has no pages");
  }
  if (doc.dpi && !(*doc.dpi > 0.0 && std::isfinite(*doc.dpi))) {
    throw Error(ErrorKind::InvalidArgument, "dpi must be positive");
  }
  for (std::size_t i = 0; i < doc.pages.size(); ++i) {
    const PageRecord& page = doc.pages[i];
    const std::string where = "page " + std::to_string(i);
    if (page.index != i) {
      throw Error(ErrorKind::InvalidGeometry, where + ": index " + std::to_string(page.index));
    }
    if (!is_finite(page.bounds) || !(quad_area(page.bounds) > 0.0)) {
      throw Error(ErrorKind::InvalidGeometry, where + ": bounds must have positive area");
    }
    for (std::size_t k = 0; k < page.entities.size(); ++k) {
      const EntityRecord& e = page.entities[k];
      const std::string ewhere = where + " entity " + std::to_string(k);
      if (e.cls.is_page()) {
        throw Error(ErrorKind::InvalidGeometry, ewhere + ": entity cannot have the page class");
      }
      (void)doc.classes.class_for_code(e.cls.code());
      if (e.page_index != i) {
        throw Error(ErrorKind::InvalidGeometry, ewhere + ": pageIndex mismatch");
      }
      if (!is_finite(e.quad)) {
        throw Error(ErrorKind::InvalidGeometry, ewhere + ": non-finite coordinates");
      }
      if (e.label && normalize_label(e.label) != e.label) {
        throw Error(ErrorKind::InvalidGeometry, ewhere + ": label must be trimmed and non-empty");
      }
    }
  }
}

void reindex_pages(DocumentGeometry& doc) noexcept {
  for (std::size_t i = 0; i < doc.pages.size(); ++i) {
    doc.pages[i].index = i;
    for (auto& e : doc.pages[i].entities) e.page_index = i;
  }
}

}  // namespace doctowers
