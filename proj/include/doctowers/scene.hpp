// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "doctowers/metrics.hpp"
#include "doctowers/model.hpp"

namespace doctowers {

inline constexpr std::string_view kSceneFormat = "DocumentTowersScene";
inline constexpr std::string_view kSceneVersion = "1.0";
inline constexpr std::string_view kSceneExtension = ".dts.json";

/// Page grey, text green, raster blue, vector red.
std::map<int, Color> default_class_colors();
inline constexpr Color kUserClassColor{0x75, 0x75, 0x75};

struct SceneConfig {
  double floor_height = 40.0;
  double floor_plate_thickness_fraction = 0.04;
  std::map<int, Color> class_colors = default_class_colors();
  std::optional<RibbonSpec> ribbon;
  /// Final PDF URL for this document; floors link to "<url>#page=N".
  std::optional<std::string> pdf_base_url;
  double city_aspect = 1.6;
};

struct Slab {
  int class_code = 0;
  Quad footprint;  // y flipped so that the page top faces +y
  double z0 = 0.0;
  double z1 = 0.0;
  std::size_t page_index = 0;
  std::optional<std::string> label;
  Color color;

  friend bool operator==(const Slab&, const Slab&) = default;
};

struct FloorRibbon {
  RibbonMetric metric = RibbonMetric::Fill;
  double value = 0.0;
  double normalized = 0.0;
  Color color;

  friend bool operator==(const FloorRibbon&, const FloorRibbon&) = default;
};

struct Floor {
  double z = 0.0;
  Quad outline;
  std::string number;
  std::size_t cardinality = 0;
  double fill_pct = 0.0;
  std::optional<FloorRibbon> ribbon;
  std::optional<std::string> link;

  friend bool operator==(const Floor&, const Floor&) = default;
};

struct Box3 {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};

  bool contains(double x, double y, double z) const noexcept {
    return x >= lo[0] && x <= hi[0] && y >= lo[1] && y <= hi[1] && z >= lo[2] && z <= hi[2];
  }

  friend bool operator==(const Box3&, const Box3&) = default;
};

struct LegendEntry {
  std::string name;
  Color color;

  friend bool operator==(const LegendEntry&, const LegendEntry&) = default;
};

struct SceneSummary {
  std::map<int, std::size_t> class_totals;
  Extremes extremes;
  std::size_t out_of_frame_total = 0;

  friend bool operator==(const SceneSummary&, const SceneSummary&) = default;
};

struct TowerScene {
  std::string id;
  double floor_height = 40.0;
  double plate_thickness = 1.6;
  std::map<int, LegendEntry> classes;
  std::vector<Floor> floors;
  std::vector<Slab> slabs;
  Box3 extents;
  SceneSummary summary;

  friend bool operator==(const TowerScene&, const TowerScene&) = default;
};

struct CityTower {
  TowerScene tower;
  Point2 origin;

  friend bool operator==(const CityTower&, const CityTower&) = default;
};

struct CityScene {
  std::vector<CityTower> towers;
  std::string order_key = "filename";
  std::size_t grid_columns = 0;
  std::size_t grid_rows = 0;
  double spacing = 0.0;
  std::optional<ValueRange> global_ribbon_range;

  friend bool operator==(const CityScene&, const CityScene&) = default;
};

/// "<base>#page=<n>"; nullopt for an empty base.
std::optional<std::string> page_hyperlink(std::string_view base_url, std::size_t page_number);

/// Stacks page i as a floor at z = i * floor_height and extrudes every
/// entity into a full-height slab on that floor. Entities are not clipped,
/// so off-page items protrude from the tower and widen its extents.
/// Global ribbon scope falls back to the tower's own range here;
/// layout_city recolors with the collection range.
TowerScene build_tower(const DocumentGeometry& doc, const SceneConfig& cfg = {});

/// Sorts towers by id and places them row-major on a square-celled grid with
/// ceil(sqrt(n * aspect)) columns.
CityScene layout_city(std::vector<TowerScene> towers, const SceneConfig& cfg = {});

std::string emit_scene(const TowerScene& scene);
std::string emit_scene(const CityScene& scene);

using Scene = std::variant<TowerScene, CityScene>;

/// Throws Error(BadScene) on schema violations.
Scene parse_scene(std::string_view bytes);

}  // namespace doctowers
