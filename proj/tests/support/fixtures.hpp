// SPDX-License-Identifier: Apache-2.0
// Fixture builders shared by the unit tests and the acceptance binary.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "doctowers/error.hpp"
#include "doctowers/idml.hpp"
#include "doctowers/model.hpp"

namespace fixtures {

/// Kind of the doctowers::Error thrown by `f`, nullopt when nothing is thrown.
template <typename F>
std::optional<doctowers::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const doctowers::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

// ---- ALTO ----------------------------------------------------------------

struct AltoBlock {
  std::string element;  // TextBlock, Illustration, GraphicalElement, ComposedBlock
  double x = 0, y = 0, w = 0, h = 0;
  std::optional<std::string> type;
  std::optional<std::string> tagrefs;
  std::vector<AltoBlock> children;  // ComposedBlock only
};

struct AltoTag {
  std::string element = "LayoutTag";
  std::string id;
  std::string label;
};

struct AltoDoc {
  std::optional<std::string> unit = "pixel";  // nullopt omits MeasurementUnit
  std::string width = "2480";
  std::string height = "3508";
  std::optional<std::string> physical_img_nr;
  std::vector<AltoTag> tags;
  std::vector<AltoBlock> blocks;  // placed inside PrintSpace
  std::string ns = "http://www.loc.gov/standards/alto/ns-v4#";
};

std::string alto_xml(const AltoDoc& doc);

// ---- IDML ----------------------------------------------------------------

struct IdmlItem {
  std::string element = "Rectangle";  // TextFrame, Rectangle, Oval, Polygon, GraphicLine, Group, Button, ...
  std::optional<std::string> transform;          // ItemTransform
  std::optional<std::string> layer;              // ItemLayer
  std::vector<std::pair<double, double>> anchors;  // PathGeometry anchors, item space
  std::optional<std::string> geometric_bounds;   // legacy fallback
  std::optional<std::string> content;            // Image, PDF, EPS child
  std::vector<IdmlItem> children;                // Group members
};

struct IdmlPage {
  std::string name;
  std::string bounds = "0 0 666 441";  // y1 x1 y2 x2
  std::string transform = "1 0 0 1 0 0";
  std::optional<std::string> applied_master;
};

struct IdmlSpread {
  std::string self = "sp1";
  std::vector<IdmlPage> pages;
  std::vector<IdmlItem> items;
};

struct IdmlLayer {
  std::string self;
  std::string name;
  bool visible = true;
};

struct IdmlDoc {
  std::string dom_version = "16.0";
  std::vector<IdmlLayer> layers;
  std::vector<IdmlSpread> spreads;
  std::vector<IdmlSpread> masters;
  bool deflate = true;
  bool include_designmap = true;
};

/// Anchors of the axis-aligned rectangle [x, x+w] x [y, y+h].
std::vector<std::pair<double, double>> rect_anchors(double x, double y, double w, double h);

std::string idml_spread_xml(const IdmlSpread& spread, bool master);
std::string idml_package(const IdmlDoc& doc);

// ---- geometry ------------------------------------------------------------

/// 441 x 666 pt page, the reference page size used throughout the tests.
doctowers::PageRecord blank_page(std::size_t index = 0, double w = 441, double h = 666);

doctowers::EntityRecord entity(int code, double x, double y, double w, double h,
                               std::optional<std::string> label = std::nullopt, std::size_t page = 0);

/// Randomized document: random page sizes, all classes (plus a user class),
/// labels, rotated quads, off-page entities and awkward doubles.
doctowers::DocumentGeometry random_document(std::mt19937_64& rng, std::size_t max_pages = 8,
                                            std::size_t max_entities = 30);

/// Synthetic corpus of `docs` documents holding exactly `total_entities`
/// entities, spread over 4-20 page documents.
std::vector<doctowers::DocumentGeometry> synthetic_corpus(std::size_t docs, std::size_t total_entities,
                                                          std::uint64_t seed);

/// The three-page fixture: empty page, full-page raster, half-covered page.
doctowers::DocumentGeometry extremes_fixture();

/// Page with one on-page raster and two rasters wholly outside the frame.
doctowers::DocumentGeometry out_of_frame_fixture();

// ---- filesystem ----------------------------------------------------------

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& bytes) const;

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);

}  // namespace fixtures
