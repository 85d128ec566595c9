// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doctowers/model.hpp"

namespace doctowers {

inline constexpr std::string_view kGeometryFormat = "DocumentTowersGeometry";
inline constexpr std::string_view kGeometryVersion = "1.0";
inline constexpr std::string_view kGeometryExtension = ".dtg.json";

/// Serializes a document as a geometry file: a flat list of 9-number
/// records [code, x1, y1, ..., x4, y4], one per line, where each code-0
/// record opens a page and the following records are that page's entities.
/// Labels travel in a parallel array. Output is byte-deterministic.
std::string write_geometry(const DocumentGeometry& doc);

/// Inverse of write_geometry. Unknown metadata keys are ignored and a
/// missing labels array means "no labels".
DocumentGeometry read_geometry(std::string_view bytes);

/// Concatenates pages in list order. Throws MixedUnits when the documents
/// disagree on the unit.
DocumentGeometry merge_documents(std::span<const DocumentGeometry> docs);

/// Half-open page range [begin, end).
struct PageRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// One document per range, pages rebased to 0. Ranges must be non-empty,
/// in bounds, ascending and non-overlapping.
std::vector<DocumentGeometry> split_document(const DocumentGeometry& doc,
                                             std::span<const PageRange> ranges);

}  // namespace doctowers
