// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doctowers/model.hpp"

namespace doctowers::idml {

/// 2x3 affine map (x, y) -> (a*x + c*y + tx, b*x + d*y + ty), the layout of
/// an IDML ItemTransform attribute.
struct Affine2 {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;
  double tx = 0.0;
  double ty = 0.0;

  static constexpr Affine2 identity() noexcept { return {}; }
  static constexpr Affine2 translate(double x, double y) noexcept { return {1, 0, 0, 1, x, y}; }
  static constexpr Affine2 scale(double sx, double sy) noexcept { return {sx, 0, 0, sy, 0, 0}; }
  static Affine2 rotate(double radians) noexcept;

  double determinant() const noexcept { return a * d - b * c; }
  bool is_finite() const noexcept;

  friend bool operator==(const Affine2&, const Affine2&) = default;
};

/// The map that applies `child` first and then `parent`.
Affine2 compose(const Affine2& parent, const Affine2& child) noexcept;
Point2 apply(const Affine2& t, Point2 p) noexcept;
Quad apply(const Affine2& t, const Quad& q) noexcept;
/// nullopt when the transform is singular.
std::optional<Affine2> inverse(const Affine2& t) noexcept;

/// Parses "a b c d tx ty". Throws InvalidArgument on malformed input.
Affine2 parse_item_transform(std::string_view s);

/// A page as seen from its spread.
struct SpreadPage {
  std::size_t page_index = 0;
  Aabb bounds_in_spread;
  Affine2 transform;  // page inner -> spread
  Point2 origin;      // top-left of GeometricBounds, page inner coordinates
};

struct PageAssignment {
  std::size_t page_index = 0;
  Quad quad;  // page-local, may extend past the page
};

/// Picks the page with the largest bbox overlap (ties to the lower index).
/// Items touching no page go to the nearest page by center distance.
/// Throws NoPagesInSpread for an empty page list.
PageAssignment assign_to_page(const Quad& item_in_spread, std::span<const SpreadPage> pages);

struct IdmlIngestOptions {
  bool include_master_spreads = false;
  bool include_hidden_layers = false;
};

struct IdmlResult {
  DocumentGeometry doc;
  std::vector<std::string> warnings;
  std::size_t items_walked = 0;
  std::size_t items_skipped = 0;
};

/// Reads an IDML package (ZIP bytes). Unknown page items and items without
/// usable geometry are skipped and reported in `warnings`.
IdmlResult parse_idml(std::string_view package, const IdmlIngestOptions& opts = {},
                      std::string source_name = {});

}  // namespace doctowers::idml
