// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doctowers/model.hpp"

namespace doctowers {

/// Optional restriction to a set of class codes; nullopt selects all.
using ClassFilter = std::optional<std::set<int>>;

struct PageMetrics {
  std::size_t cardinality_total = 0;
  std::map<int, std::size_t> cardinality_by_class;
  double fill_total_pct = 0.0;
  std::map<int, double> fill_by_class_pct;
  /// Sum of clipped entity areas over the page area; unlike the union-based
  /// fill this counts overlaps repeatedly and may exceed 100.
  double fill_sum_pct = 0.0;
  std::size_t out_of_frame_count = 0;

  friend bool operator==(const PageMetrics&, const PageMetrics&) = default;
};

struct PageExtreme {
  std::size_t page_index = 0;
  std::string number;
  double value = 0.0;

  friend bool operator==(const PageExtreme&, const PageExtreme&) = default;
};

struct Extremes {
  PageExtreme max_cardinality;
  PageExtreme max_fill;
  PageExtreme min_fill;

  friend bool operator==(const Extremes&, const Extremes&) = default;
};

struct StatsReport {
  std::vector<PageMetrics> per_page;
  std::map<int, std::size_t> class_totals;
  Extremes extremes;
  std::size_t out_of_frame_total = 0;
};

/// Exact area of a union of boxes (coordinate-compression sweep).
double union_area_aabb(std::span<const Aabb> boxes);

/// True when the entity box shares interior with the page. Degenerate
/// (hairline) boxes count as inside when they lie on the closed page.
bool overlaps_frame(const Aabb& entity, const Aabb& page) noexcept;

double page_fill(const PageRecord& page, const ClassFilter& filter = std::nullopt);
PageMetrics page_cardinality(const PageRecord& page, const ClassFilter& filter = std::nullopt);
/// Counts plus fill values in one pass.
PageMetrics page_metrics(const PageRecord& page, const ClassFilter& filter = std::nullopt);

/// Ties on extremes resolve to the lowest page index.
StatsReport document_stats(const DocumentGeometry& doc, const ClassFilter& filter = std::nullopt);

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::string hex() const;
  /// Accepts "#rrggbb"; throws InvalidArgument otherwise.
  static Color from_hex(std::string_view s);

  friend bool operator==(const Color&, const Color&) = default;
};

enum class RibbonMetric { Cardinality, Fill };
enum class RibbonScope { PerTower, Global };

std::string_view to_string(RibbonMetric m) noexcept;
std::optional<RibbonMetric> parse_ribbon_metric(std::string_view s) noexcept;

inline constexpr int kRibbonSteps = 64;

struct RibbonSpec {
  RibbonMetric metric = RibbonMetric::Fill;
  RibbonScope scope = RibbonScope::PerTower;
  /// Dark violet to bright yellow by default.
  std::vector<Color> palette_stops{Color{0x44, 0x01, 0x54}, Color{0xFD, 0xE7, 0x25}};
};

struct RibbonValue {
  double normalized = 0.0;
  Color color;

  friend bool operator==(const RibbonValue&, const RibbonValue&) = default;
};

struct ValueRange {
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

/// Palette lookup after quantizing t in [0, 1] to kRibbonSteps steps.
Color palette_color(std::span<const Color> stops, double t);
/// Index of the quantization step for t, 0 .. kRibbonSteps-1.
int palette_step(double t) noexcept;

/// Normalizes a per-page metric to [0, 1] (min/max from the list itself or
/// from `global_range` for global scope; a flat range maps to 0.5) and
/// colors it.
std::vector<RibbonValue> ribbon_values(std::span<const double> values, const RibbonSpec& spec,
                                       std::optional<ValueRange> global_range = std::nullopt);

/// The per-page series a ribbon of the given metric is built from.
std::vector<double> metric_series(const StatsReport& stats, RibbonMetric metric);

}  // namespace doctowers
