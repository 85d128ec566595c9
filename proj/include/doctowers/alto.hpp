// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "doctowers/model.hpp"

namespace doctowers::alto {

/// Values of the ALTO MeasurementUnit element.
enum class AltoUnit { Pixel, Mm10, Inch1200 };

std::optional<AltoUnit> parse_alto_unit(std::string_view s) noexcept;

struct AltoIngestOptions {
  std::optional<double> dpi;
  bool recurse_composed_blocks = true;
  bool emit_labels = true;
};

struct Converted {
  double value = 0.0;
  Unit unit = Unit::Pt;  // Px when pixels could not be converted
};

/// inch1200 and mm10 always convert; pixels convert only with a dpi.
Converted to_points(double v, AltoUnit unit, std::optional<double> dpi);

struct AltoPage {
  PageRecord page;  // number holds PHYSICAL_IMG_NR, empty when absent
  Unit unit = Unit::Pt;
};

/// Parses one ALTO file. Emits TextBlock, Illustration and GraphicalElement
/// as text/raster/vector entities in document order, flattening
/// ComposedBlock containers.
AltoPage parse_alto_page(std::string_view xml, const AltoIngestOptions& opts = {});

struct AssembleMeta {
  std::string source_name;
  std::optional<double> dpi;
};

/// Stacks parsed pages into one document in list order. Pages without a
/// PHYSICAL_IMG_NR get their 1-based position as display number.
DocumentGeometry assemble_document(std::vector<std::pair<std::string, AltoPage>> pages,
                                   const AssembleMeta& meta = {});

}  // namespace doctowers::alto
