// SPDX-License-Identifier: Apache-2.0
#include "doctowers/geometry_file.hpp"

#include <cmath>
#include <json.hpp>

#include "doctowers/error.hpp"
#include "doctowers/number_format.hpp"
#include "json_text.hpp"

namespace doctowers {

namespace {

using nlohmann::json;

void append_string(std::string& out, std::string_view s) { detail::append_json_string(out, s); }

void append_record(std::string& out, int code, const Quad& q) {
  out += '[';
  out += std::to_string(code);
  for (double v : q.coords()) {
    out += ',';
    append_number(out, v);
  }
  out += ']';
}

}  // namespace

std::string write_geometry(const DocumentGeometry& doc) {
  validate(doc);
  std::string out;
  out.reserve(64 + doc.entity_count() * 96);
  out += "{\n  \"format\": ";
  append_string(out, kGeometryFormat);
  out += ",\n  \"version\": ";
  append_string(out, kGeometryVersion);
  out += ",\n  \"metadata\": {\n    \"sourceName\": ";
  append_string(out, doc.source_name);
  out += ",\n    \"sourceFormat\": ";
  append_string(out, to_string(doc.source_format));
  out += ",\n    \"unit\": ";
  append_string(out, to_string(doc.unit));
  if (doc.dpi) {
    out += ",\n    \"dpi\": ";
    append_number(out, *doc.dpi);
  }
  out += ",\n    \"pageNumbers\": [";
  for (std::size_t i = 0; i < doc.pages.size(); ++i) {
    if (i) out += ", ";
    append_string(out, doc.pages[i].number);
  }
  out += "],\n    \"classRegistry\": {";
  bool first = true;
  for (const auto& [code, name] : doc.classes.entries()) {
    if (!first) out += ", ";
    first = false;
    append_string(out, std::to_string(code));
    out += ": ";
    append_string(out, name);
  }
  out += "}\n  },\n  \"records\": [\n";

  std::string labels = "  \"labels\": [\n";
  first = true;
  for (const PageRecord& page : doc.pages) {
    if (!first) {
      out += ",\n";
      labels += ",\n";
    }
    first = false;
    out += "    ";
    append_record(out, EntityClass::kPageCode, page.bounds);
    labels += "    null";
    for (const EntityRecord& e : page.entities) {
      out += ",\n    ";
      append_record(out, e.cls.code(), e.quad);
      labels += ",\n    ";
      if (e.label) {
        append_string(labels, *e.label);
      } else {
        labels += "null";
      }
    }
  }
  out += "\n  ],\n";
  out += labels;
  out += "\n  ]\n}\n";
  return out;
}

namespace {

int record_code(const json& v, std::size_t index) {
  double d = 0.0;
  if (v.is_number_integer() || v.is_number_unsigned()) {
    if (v.is_number_unsigned() ? v.get<std::uint64_t>() > 1000000u
                               : std::llabs(v.get<std::int64_t>()) > 1000000) {
      throw Error(ErrorKind::UnknownClassCode, "record " + std::to_string(index) + ": code out of range");
    }
    return static_cast<int>(v.get<std::int64_t>());
  }
  d = v.get<double>();
  if (d != std::floor(d) || std::abs(d) > 1e6) {
    throw Error(ErrorKind::UnknownClassCode,
                "record " + std::to_string(index) + ": class code must be an integer");
  }
  return static_cast<int>(d);
}

}  // namespace

DocumentGeometry read_geometry(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::BadHeader, std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorKind::BadHeader, "top level must be an object");
  const auto fmt = root.find("format");
  if (fmt == root.end() || !fmt->is_string() || fmt->get<std::string>() != kGeometryFormat) {
    throw Error(ErrorKind::BadHeader, "format must be \"DocumentTowersGeometry\"");
  }
  const auto ver = root.find("version");
  if (ver == root.end() || !ver->is_string() || !ver->get<std::string>().starts_with("1.")) {
    throw Error(ErrorKind::BadHeader, "unsupported or missing version");
  }
  const auto records = root.find("records");
  if (records == root.end() || !records->is_array()) {
    throw Error(ErrorKind::BadHeader, "records array missing");
  }

  DocumentGeometry doc;
  std::vector<std::string> page_numbers;
  bool have_page_numbers = false;
  if (const auto meta = root.find("metadata"); meta != root.end()) {
    if (!meta->is_object()) throw Error(ErrorKind::BadHeader, "metadata must be an object");
    if (auto it = meta->find("sourceName"); it != meta->end() && it->is_string()) {
      doc.source_name = it->get<std::string>();
    }
    if (auto it = meta->find("sourceFormat"); it != meta->end() && it->is_string()) {
      doc.source_format = parse_source_format(it->get<std::string>()).value_or(SourceFormat::External);
    }
    if (auto it = meta->find("unit"); it != meta->end()) {
      const auto unit = it->is_string() ? parse_unit(it->get<std::string>()) : std::nullopt;
      if (!unit) throw Error(ErrorKind::BadHeader, "unit must be \"pt\" or \"px\"");
      doc.unit = *unit;
    }
    if (auto it = meta->find("dpi"); it != meta->end() && !it->is_null()) {
      if (!it->is_number() || !(it->get<double>() > 0.0)) {
        throw Error(ErrorKind::BadHeader, "dpi must be a positive number");
      }
      doc.dpi = it->get<double>();
    }
    if (auto it = meta->find("pageNumbers"); it != meta->end() && it->is_array()) {
      have_page_numbers = true;
      for (const json& n : *it) {
        page_numbers.push_back(n.is_string() ? n.get<std::string>() : n.dump());
      }
    }
    if (auto it = meta->find("classRegistry"); it != meta->end() && it->is_object()) {
      for (const auto& [key, name] : it->items()) {
        int code = 0;
        try {
          std::size_t used = 0;
          code = std::stoi(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          throw Error(ErrorKind::BadHeader, "classRegistry key \"" + key + "\" is not an integer");
        }
        if (!name.is_string()) throw Error(ErrorKind::BadHeader, "classRegistry names must be strings");
        doc.classes.add(code, name.get<std::string>());
      }
    }
  }

  const json* labels = nullptr;
  if (const auto it = root.find("labels"); it != root.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != records->size()) {
      throw Error(ErrorKind::ParallelArrayMismatch,
                  "labels has " + std::to_string(it->is_array() ? it->size() : 0) +
                      " entries, records has " + std::to_string(records->size()));
    }
    labels = &*it;
  }

  std::array<double, 8> coords{};
  for (std::size_t i = 0; i < records->size(); ++i) {
    const json& rec = (*records)[i];
    if (!rec.is_array() || rec.size() != 9) {
      throw Error(ErrorKind::RecordArityError,
                  "record " + std::to_string(i) + ": expected 9 numbers, got " +
                      (rec.is_array() ? std::to_string(rec.size()) : std::string("a non-array")));
    }
    for (const json& v : rec) {
      if (!v.is_number()) {
        throw Error(ErrorKind::RecordArityError, "record " + std::to_string(i) + ": non-numeric field");
      }
    }
    const int code = record_code(rec[0], i);
    for (std::size_t k = 0; k < 8; ++k) coords[k] = rec[k + 1].get<double>();
    const Quad quad = Quad::from_coords(coords);
    const EntityClass cls = doc.classes.class_for_code(code);

    if (i == 0 && !cls.is_page()) {
      throw Error(ErrorKind::FirstRecordNotPage, "first record has class code " + std::to_string(code));
    }
    if (cls.is_page()) {
      PageRecord page;
      page.index = doc.pages.size();
      page.bounds = quad;
      doc.pages.push_back(std::move(page));
      continue;
    }
    std::optional<std::string> label;
    if (labels) {
      const json& l = (*labels)[i];
      if (l.is_string()) {
        label = normalize_label(l.get<std::string>());
      } else if (!l.is_null()) {
        throw Error(ErrorKind::ParallelArrayMismatch,
                    "label " + std::to_string(i) + " must be a string or null");
      }
    }
    PageRecord& page = doc.pages.back();
    page.entities.push_back(EntityRecord{cls, quad, std::move(label), page.index});
  }
  if (doc.pages.empty()) throw Error(ErrorKind::FirstRecordNotPage, "file has no records");

  if (have_page_numbers) {
    if (page_numbers.size() != doc.pages.size()) {
      throw Error(ErrorKind::ParallelArrayMismatch,
                  "pageNumbers has " + std::to_string(page_numbers.size()) + " entries for " +
                      std::to_string(doc.pages.size()) + " pages");
    }
    for (std::size_t i = 0; i < page_numbers.size(); ++i) doc.pages[i].number = page_numbers[i];
  } else {
    for (std::size_t i = 0; i < doc.pages.size(); ++i) doc.pages[i].number = std::to_string(i + 1);
  }
  validate(doc);
  return doc;
}

DocumentGeometry merge_documents(std::span<const DocumentGeometry> docs) {
  if (docs.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to merge");
  if (docs.size() == 1) return docs.front();

  DocumentGeometry out;
  out.unit = docs.front().unit;
  out.source_format = docs.front().source_format;
  out.dpi = docs.front().dpi;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const DocumentGeometry& d = docs[i];
    if (d.unit != out.unit) {
      throw Error(ErrorKind::MixedUnits, "document '" + d.source_name + "' is in " +
                                             std::string(to_string(d.unit)) + ", expected " +
                                             std::string(to_string(out.unit)));
    }
    if (d.source_format != out.source_format) out.source_format = SourceFormat::External;
    if (d.dpi != out.dpi) out.dpi.reset();
    if (i) out.source_name += "+";
    out.source_name += d.source_name;
    for (const auto& [code, name] : d.classes.entries()) out.classes.add(code, name);
    out.pages.insert(out.pages.end(), d.pages.begin(), d.pages.end());
  }
  reindex_pages(out);
  return out;
}

std::vector<DocumentGeometry> split_document(const DocumentGeometry& doc,
                                             std::span<const PageRange> ranges) {
  const std::size_t n = doc.pages.size();
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const PageRange& r = ranges[i];
    if (r.begin >= r.end || r.end > n) {
      throw Error(ErrorKind::RangeOutOfBounds, "range [" + std::to_string(r.begin) + ", " +
                                                   std::to_string(r.end) + ") invalid for " +
                                                   std::to_string(n) + " pages");
    }
    if (i > 0 && r.begin < ranges[i - 1].end) {
      throw Error(ErrorKind::OverlappingRanges,
                  "range " + std::to_string(i) + " starts before the previous one ends");
    }
  }

  std::vector<DocumentGeometry> out;
  out.reserve(ranges.size());
  for (const PageRange& r : ranges) {
    DocumentGeometry part;
    part.source_name = doc.source_name + "[" + std::to_string(r.begin) + ":" + std::to_string(r.end) + "]";
    part.source_format = doc.source_format;
    part.unit = doc.unit;
    part.dpi = doc.dpi;
    part.classes = doc.classes;
    part.pages.assign(doc.pages.begin() + static_cast<std::ptrdiff_t>(r.begin),
                      doc.pages.begin() + static_cast<std::ptrdiff_t>(r.end));
    reindex_pages(part);
    out.push_back(std::move(part));
  }
  return out;
}

}  // namespace doctowers
