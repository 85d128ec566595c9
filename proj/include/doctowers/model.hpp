// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace doctowers {

/// A position in PostScript points (1/72 inch), page-local unless noted.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Aabb {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const noexcept { return xmax - xmin; }
  double height() const noexcept { return ymax - ymin; }
  double area() const noexcept { return width() * height(); }
  Point2 center() const noexcept { return {(xmin + xmax) / 2, (ymin + ymax) / 2}; }
  bool contains(Point2 p) const noexcept {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }

  friend bool operator==(const Aabb&, const Aabb&) = default;
};

/// Intersection of two boxes; empty results collapse to a zero-area box.
Aabb intersect(const Aabb& a, const Aabb& b) noexcept;

/// Area of the intersection of two boxes, 0 when they do not overlap.
double overlap_area(const Aabb& a, const Aabb& b) noexcept;

/// Four corners in serialization order c1..c4. Rotated frames are kept as
/// rotated quads; axis-aligned rectangles start at the top-left corner and
/// run clockwise in the y-down page convention.
struct Quad {
  std::array<Point2, 4> corners{};

  static Quad rect(double x, double y, double width, double height) noexcept;
  static Quad from_box(const Aabb& box) noexcept;
  /// Builds from x1,y1,...,x4,y4. Throws InvalidGeometry on non-finite input.
  static Quad from_coords(std::span<const double, 8> coords);

  std::array<double, 8> coords() const noexcept;

  friend bool operator==(const Quad&, const Quad&) = default;
};

double quad_area(const Quad& q) noexcept;
Aabb quad_bbox(const Quad& q) noexcept;
bool is_finite(const Quad& q) noexcept;

/// Entity taxonomy. Codes 0-3 are the basic classes, 4-99 are reserved and
/// codes >= 100 belong to user-defined classes declared in a ClassRegistry.
class EntityClass {
 public:
  static constexpr int kPageCode = 0;
  static constexpr int kTextFrameCode = 1;
  static constexpr int kRasterImageCode = 2;
  static constexpr int kVectorGraphicCode = 3;
  static constexpr int kFirstUserCode = 100;

  static constexpr EntityClass page() noexcept { return EntityClass(kPageCode); }
  static constexpr EntityClass text_frame() noexcept { return EntityClass(kTextFrameCode); }
  static constexpr EntityClass raster_image() noexcept { return EntityClass(kRasterImageCode); }
  static constexpr EntityClass vector_graphic() noexcept { return EntityClass(kVectorGraphicCode); }

  constexpr int code() const noexcept { return code_; }
  constexpr bool is_page() const noexcept { return code_ == kPageCode; }
  constexpr bool is_user_defined() const noexcept { return code_ >= kFirstUserCode; }

  friend constexpr auto operator<=>(const EntityClass&, const EntityClass&) = default;

 private:
  friend class ClassRegistry;
  constexpr explicit EntityClass(int code) noexcept : code_(code) {}
  int code_;
};

/// Names of user-defined classes (codes >= 100). Both directions of the
/// code/name mapping stay unique.
class ClassRegistry {
 public:
  /// Throws InvalidArgument for codes below 100 and ClassRegistryConflict when
  /// the code or the name is already bound to something else.
  EntityClass add(int code, const std::string& name);

  bool contains(int code) const noexcept { return names_.contains(code); }
  std::optional<EntityClass> find(std::string_view name) const;
  const std::map<int, std::string>& entries() const noexcept { return names_; }
  bool empty() const noexcept { return names_.empty(); }

  /// Resolves a code. Throws UnknownClassCode for reserved or unregistered codes.
  EntityClass class_for_code(int code) const;

  friend bool operator==(const ClassRegistry&, const ClassRegistry&) = default;

 private:
  std::map<int, std::string> names_;
};

/// Basic classes only; user codes always fail here.
EntityClass class_for_code(int code);
EntityClass class_for_code(int code, const ClassRegistry& registry);
constexpr int code_for_class(EntityClass cls) noexcept { return cls.code(); }

/// "page", "text", "raster", "vector" or the registered name.
std::string class_name(EntityClass cls, const ClassRegistry& registry = {});

/// Trims whitespace; blank labels become nullopt.
std::optional<std::string> normalize_label(std::optional<std::string> label);

struct EntityRecord {
  EntityClass cls = EntityClass::text_frame();
  Quad quad;
  std::optional<std::string> label;
  std::size_t page_index = 0;

  friend bool operator==(const EntityRecord&, const EntityRecord&) = default;
};

struct PageRecord {
  std::size_t index = 0;
  std::string number;
  Quad bounds;
  std::vector<EntityRecord> entities;

  friend bool operator==(const PageRecord&, const PageRecord&) = default;
};

enum class SourceFormat { Alto, Idml, External };
enum class Unit { Pt, Px };

std::string_view to_string(SourceFormat f) noexcept;
std::string_view to_string(Unit u) noexcept;
std::optional<SourceFormat> parse_source_format(std::string_view s) noexcept;
std::optional<Unit> parse_unit(std::string_view s) noexcept;

struct DocumentGeometry {
  std::string source_name;
  SourceFormat source_format = SourceFormat::External;
  Unit unit = Unit::Pt;
  std::optional<double> dpi;
  ClassRegistry classes;
  std::vector<PageRecord> pages;

  std::size_t entity_count() const noexcept;

  friend bool operator==(const DocumentGeometry&, const DocumentGeometry&) = default;
};

/// Checks every structural invariant of a document and throws the matching
/// Error on the first violation.
void validate(const DocumentGeometry& doc);

/// Rewrites page.index and entity.page_index to match list positions.
void reindex_pages(DocumentGeometry& doc) noexcept;

}  // namespace doctowers
