// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace doctowers {

enum class ErrorKind {
  InvalidArgument,
  UnknownClassCode,
  InvalidGeometry,
  // ALTO
  MalformedXml,
  MissingPageElement,
  UnknownMeasurementUnit,
  NonNumericCoordinate,
  MixedUnits,
  // IDML
  NoPagesInSpread,
  NotAZipArchive,
  MissingDesignMap,
  MalformedSpread,
  // geometry file
  BadHeader,
  RecordArityError,
  FirstRecordNotPage,
  ParallelArrayMismatch,
  ClassRegistryConflict,
  RangeOutOfBounds,
  OverlappingRanges,
  // scene file
  BadScene,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// All recoverable failures raised by the library. The kind is stable and
/// intended for dispatch; the message carries human context such as the
/// element path or the offending record index.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace doctowers
