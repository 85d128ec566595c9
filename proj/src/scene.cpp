// SPDX-License-Identifier: Apache-2.0
#include "doctowers/scene.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "doctowers/error.hpp"
#include "doctowers/number_format.hpp"
#include "json_text.hpp"

namespace doctowers {

std::map<int, Color> default_class_colors() {
  return {{EntityClass::kPageCode, Color{0x9E, 0x9E, 0x9E}},
          {EntityClass::kTextFrameCode, Color{0x2E, 0x7D, 0x32}},
          {EntityClass::kRasterImageCode, Color{0x15, 0x65, 0xC0}},
          {EntityClass::kVectorGraphicCode, Color{0xC6, 0x28, 0x28}}};
}

std::optional<std::string> page_hyperlink(std::string_view base_url, std::size_t page_number) {
  if (base_url.empty()) return std::nullopt;
  return std::string(base_url) + "#page=" + std::to_string(page_number);
}

namespace {

Color color_for(const SceneConfig& cfg, int code) {
  if (auto it = cfg.class_colors.find(code); it != cfg.class_colors.end()) return it->second;
  return kUserClassColor;
}

Quad flip_y(const Quad& q, double axis_sum) {
  Quad out = q;
  for (Point2& p : out.corners) p.y = axis_sum - p.y;
  return out;
}

void apply_ribbon(std::vector<Floor>& floors, const RibbonSpec& spec, std::optional<ValueRange> range) {
  std::vector<double> series;
  series.reserve(floors.size());
  for (const Floor& f : floors) {
    series.push_back(spec.metric == RibbonMetric::Fill ? f.fill_pct : static_cast<double>(f.cardinality));
  }
  const auto values = ribbon_values(series, spec, range);
  for (std::size_t i = 0; i < floors.size(); ++i) {
    floors[i].ribbon = FloorRibbon{spec.metric, series[i], values[i].normalized, values[i].color};
  }
}

ValueRange series_range(const std::vector<Floor>& floors, RibbonMetric metric) {
  ValueRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Floor& f : floors) {
    const double v = metric == RibbonMetric::Fill ? f.fill_pct : static_cast<double>(f.cardinality);
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  return r;
}

}  // namespace

TowerScene build_tower(const DocumentGeometry& doc, const SceneConfig& cfg) {
  if (!(cfg.floor_height > 0.0) || !std::isfinite(cfg.floor_height)) {
    throw Error(ErrorKind::InvalidArgument, "floor height must be positive");
  }
  const StatsReport stats = document_stats(doc);
  const double h = cfg.floor_height;

  TowerScene scene;
  scene.id = doc.source_name;
  scene.floor_height = h;
  scene.plate_thickness = h * cfg.floor_plate_thickness_fraction;
  scene.summary = {stats.class_totals, stats.extremes, stats.out_of_frame_total};

  scene.classes[EntityClass::kPageCode] = {"page", color_for(cfg, EntityClass::kPageCode)};
  scene.floors.reserve(doc.pages.size());
  scene.slabs.reserve(doc.entity_count());

  auto& ext = scene.extents;
  ext.lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0};
  ext.hi = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            h * static_cast<double>(doc.pages.size())};
  auto widen = [&](const Quad& q) {
    for (const Point2& p : q.corners) {
      ext.lo[0] = std::min(ext.lo[0], p.x);
      ext.lo[1] = std::min(ext.lo[1], p.y);
      ext.hi[0] = std::max(ext.hi[0], p.x);
      ext.hi[1] = std::max(ext.hi[1], p.y);
    }
  };

  for (std::size_t i = 0; i < doc.pages.size(); ++i) {
    const PageRecord& page = doc.pages[i];
    const Aabb frame = quad_bbox(page.bounds);
    const double axis_sum = frame.ymin + frame.ymax;
    const double z0 = h * static_cast<double>(i);
    const double z1 = h * static_cast<double>(i + 1);

    Floor floor;
    floor.z = z0;
    floor.outline = flip_y(page.bounds, axis_sum);
    floor.number = page.number;
    floor.cardinality = stats.per_page[i].cardinality_total;
    floor.fill_pct = stats.per_page[i].fill_total_pct;
    if (cfg.pdf_base_url) floor.link = page_hyperlink(*cfg.pdf_base_url, i + 1);
    widen(floor.outline);
    scene.floors.push_back(std::move(floor));

    for (const EntityRecord& e : page.entities) {
      const int code = e.cls.code();
      if (!scene.classes.contains(code)) {
        scene.classes[code] = {class_name(e.cls, doc.classes), color_for(cfg, code)};
      }
      Slab slab{code, flip_y(e.quad, axis_sum), z0, z1, i, e.label, color_for(cfg, code)};
      widen(slab.footprint);
      scene.slabs.push_back(std::move(slab));
    }
  }

  if (cfg.ribbon) {
    RibbonSpec spec = *cfg.ribbon;
    spec.scope = RibbonScope::PerTower;
    apply_ribbon(scene.floors, spec, std::nullopt);
  }
  return scene;
}

CityScene layout_city(std::vector<TowerScene> towers, const SceneConfig& cfg) {
  if (towers.empty()) throw Error(ErrorKind::InvalidArgument, "a city needs at least one tower");
  if (!(cfg.city_aspect > 0.0)) throw Error(ErrorKind::InvalidArgument, "aspect must be positive");
  std::stable_sort(towers.begin(), towers.end(),
                   [](const TowerScene& a, const TowerScene& b) { return a.id < b.id; });

  const std::size_t n = towers.size();
  CityScene city;
  city.grid_columns = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n) * cfg.city_aspect)));
  city.grid_columns = std::clamp<std::size_t>(city.grid_columns, 1, n);
  city.grid_rows = (n + city.grid_columns - 1) / city.grid_columns;

  double max_extent = 0.0;
  for (const TowerScene& t : towers) {
    max_extent = std::max({max_extent, t.extents.hi[0] - t.extents.lo[0], t.extents.hi[1] - t.extents.lo[1]});
  }
  city.spacing = 1.25 * max_extent;

  if (cfg.ribbon && cfg.ribbon->scope == RibbonScope::Global) {
    ValueRange range{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const TowerScene& t : towers) {
      const ValueRange r = series_range(t.floors, cfg.ribbon->metric);
      range.min = std::min(range.min, r.min);
      range.max = std::max(range.max, r.max);
    }
    city.global_ribbon_range = range;
    for (TowerScene& t : towers) apply_ribbon(t.floors, *cfg.ribbon, range);
  }

  city.towers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double col = static_cast<double>(i % city.grid_columns);
    const double row = static_cast<double>(i / city.grid_columns);
    const Box3& e = towers[i].extents;
    // Row 0 is the back row; later rows advance towards -y.
    const Point2 origin{col * city.spacing - e.lo[0], -row * city.spacing - e.lo[1]};
    city.towers.push_back(CityTower{std::move(towers[i]), origin});
  }
  return city;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using detail::append_json_string;

void append_quad(std::string& out, const Quad& q) {
  out += '[';
  bool first = true;
  for (double v : q.coords()) {
    if (!first) out += ',';
    first = false;
    append_number(out, v);
  }
  out += ']';
}

void append_extreme(std::string& out, std::string_view key, const PageExtreme& e) {
  append_json_string(out, key);
  out += ":{\"page\":";
  out += std::to_string(e.page_index);
  out += ",\"number\":";
  append_json_string(out, e.number);
  out += ",\"value\":";
  append_number(out, e.value);
  out += '}';
}

void append_tower(std::string& out, const TowerScene& t, const Point2* origin) {
  out += "{\"id\":";
  append_json_string(out, t.id);
  if (origin) {
    out += ",\"origin\":[";
    append_number(out, origin->x);
    out += ',';
    append_number(out, origin->y);
    out += ']';
  }
  out += ",\"floorHeight\":";
  append_number(out, t.floor_height);
  out += ",\"plateThickness\":";
  append_number(out, t.plate_thickness);
  out += ",\"extents\":[";
  for (int i = 0; i < 3; ++i) {
    append_number(out, t.extents.lo[static_cast<std::size_t>(i)]);
    out += ',';
  }
  for (int i = 0; i < 3; ++i) {
    append_number(out, t.extents.hi[static_cast<std::size_t>(i)]);
    out += i < 2 ? "," : "]";
  }

  out += ",\n \"classes\":{";
  bool first = true;
  for (const auto& [code, entry] : t.classes) {
    if (!first) out += ',';
    first = false;
    append_json_string(out, std::to_string(code));
    out += ":{\"name\":";
    append_json_string(out, entry.name);
    out += ",\"col\":\"" + entry.color.hex() + "\"}";
  }

  out += "},\n \"summary\":{\"classTotals\":{";
  first = true;
  for (const auto& [code, n] : t.summary.class_totals) {
    if (!first) out += ',';
    first = false;
    append_json_string(out, std::to_string(code));
    out += ':' + std::to_string(n);
  }
  out += "},\"outOfFrame\":" + std::to_string(t.summary.out_of_frame_total) + ",\"extremes\":{";
  append_extreme(out, "maxCardinality", t.summary.extremes.max_cardinality);
  out += ',';
  append_extreme(out, "maxFill", t.summary.extremes.max_fill);
  out += ',';
  append_extreme(out, "minFill", t.summary.extremes.min_fill);
  out += "}},\n \"floors\":[";

  for (std::size_t i = 0; i < t.floors.size(); ++i) {
    const Floor& f = t.floors[i];
    out += i ? ",\n  " : "\n  ";
    out += "{\"z\":";
    append_number(out, f.z);
    out += ",\"outline\":";
    append_quad(out, f.outline);
    out += ",\"number\":";
    append_json_string(out, f.number);
    out += ",\"m\":[" + std::to_string(f.cardinality) + ',';
    append_number(out, f.fill_pct);
    out += ']';
    if (f.ribbon) {
      out += ",\"ribbon\":{\"metric\":";
      append_json_string(out, to_string(f.ribbon->metric));
      out += ",\"value\":";
      append_number(out, f.ribbon->value);
      out += ",\"t\":";
      append_number(out, f.ribbon->normalized);
      out += ",\"col\":\"" + f.ribbon->color.hex() + "\"}";
    }
    if (f.link) {
      out += ",\"link\":";
      append_json_string(out, *f.link);
    }
    out += '}';
  }
  out += "],\n \"slabs\":[";
  for (std::size_t i = 0; i < t.slabs.size(); ++i) {
    const Slab& s = t.slabs[i];
    out += i ? ",\n  " : "\n  ";
    out += "{\"c\":" + std::to_string(s.class_code) + ",\"q\":";
    append_quad(out, s.footprint);
    out += ",\"z\":[";
    append_number(out, s.z0);
    out += ',';
    append_number(out, s.z1);
    out += "],\"p\":" + std::to_string(s.page_index) + ",\"col\":\"" + s.color.hex() + '"';
    if (s.label) {
      out += ",\"label\":";
      append_json_string(out, *s.label);
    }
    out += '}';
  }
  out += "]}";
}

void append_header(std::string& out, std::string_view kind) {
  out += "{\"format\":";
  append_json_string(out, kSceneFormat);
  out += ",\"version\":";
  append_json_string(out, kSceneVersion);
  out += ",\"kind\":";
  append_json_string(out, kind);
}

}  // namespace

std::string emit_scene(const TowerScene& scene) {
  std::string out;
  out.reserve(512 + scene.slabs.size() * 128);
  append_header(out, "tower");
  out += ",\n\"towers\":[\n";
  append_tower(out, scene, nullptr);
  out += "\n]}\n";
  return out;
}

std::string emit_scene(const CityScene& city) {
  std::size_t slabs = 0;
  for (const auto& t : city.towers) slabs += t.tower.slabs.size();
  std::string out;
  out.reserve(512 + slabs * 128);
  append_header(out, "city");
  out += ",\n\"grid\":{\"columns\":" + std::to_string(city.grid_columns) +
         ",\"rows\":" + std::to_string(city.grid_rows) + ",\"spacing\":";
  append_number(out, city.spacing);
  out += ",\"orderKey\":";
  append_json_string(out, city.order_key);
  if (city.global_ribbon_range) {
    out += ",\"ribbonRange\":[";
    append_number(out, city.global_ribbon_range->min);
    out += ',';
    append_number(out, city.global_ribbon_range->max);
    out += ']';
  }
  out += "},\n\"towers\":[\n";
  for (std::size_t i = 0; i < city.towers.size(); ++i) {
    if (i) out += ",\n";
    append_tower(out, city.towers[i].tower, &city.towers[i].origin);
  }
  out += "\n]}\n";
  return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::BadScene, what); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) bad(std::string("expected an object around \"") + key + "\"");
  const auto it = obj.find(key);
  if (it == obj.end()) bad(std::string("missing \"") + key + "\"");
  return *it;
}

double number(const json& v, const char* what) {
  if (!v.is_number()) bad(std::string(what) + " must be a number");
  return v.get<double>();
}

std::size_t count(const json& v, const char* what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    bad(std::string(what) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string text(const json& v, const char* what) {
  if (!v.is_string()) bad(std::string(what) + " must be a string");
  return v.get<std::string>();
}

Color color(const json& v) {
  try {
    return Color::from_hex(text(v, "col"));
  } catch (const Error& e) {
    bad(e.what());
  }
}

Quad quad(const json& v) {
  if (!v.is_array() || v.size() != 8) bad("quads need 8 numbers");
  std::array<double, 8> c{};
  for (std::size_t i = 0; i < 8; ++i) c[i] = number(v[i], "quad coordinate");
  return Quad::from_coords(c);
}

int code_key(const std::string& key) {
  try {
    std::size_t used = 0;
    const int code = std::stoi(key, &used);
    if (used == key.size()) return code;
  } catch (const std::exception&) {
  }
  bad("class key \"" + key + "\" is not an integer");
}

PageExtreme extreme(const json& v) {
  return {count(field(v, "page"), "page"), text(field(v, "number"), "number"),
          number(field(v, "value"), "value")};
}

TowerScene parse_tower(const json& v) {
  TowerScene t;
  t.id = text(field(v, "id"), "id");
  t.floor_height = number(field(v, "floorHeight"), "floorHeight");
  t.plate_thickness = number(field(v, "plateThickness"), "plateThickness");
  const json& ext = field(v, "extents");
  if (!ext.is_array() || ext.size() != 6) bad("extents need 6 numbers");
  for (std::size_t i = 0; i < 3; ++i) {
    t.extents.lo[i] = number(ext[i], "extent");
    t.extents.hi[i] = number(ext[i + 3], "extent");
  }
  const json& classes = field(v, "classes");
  if (!classes.is_object()) bad("classes must be an object");
  for (const auto& [key, entry] : classes.items()) {
    t.classes[code_key(key)] = {text(field(entry, "name"), "name"), color(field(entry, "col"))};
  }
  const json& summary = field(v, "summary");
  const json& totals = field(summary, "classTotals");
  if (!totals.is_object()) bad("classTotals must be an object");
  for (const auto& [key, n] : totals.items()) t.summary.class_totals[code_key(key)] = count(n, "class total");
  t.summary.out_of_frame_total = count(field(summary, "outOfFrame"), "outOfFrame");
  const json& ex = field(summary, "extremes");
  t.summary.extremes = {extreme(field(ex, "maxCardinality")), extreme(field(ex, "maxFill")),
                        extreme(field(ex, "minFill"))};

  const json& floors = field(v, "floors");
  if (!floors.is_array()) bad("floors must be an array");
  t.floors.reserve(floors.size());
  for (const json& f : floors) {
    Floor floor;
    floor.z = number(field(f, "z"), "z");
    floor.outline = quad(field(f, "outline"));
    floor.number = text(field(f, "number"), "number");
    const json& m = field(f, "m");
    if (!m.is_array() || m.size() != 2) bad("floor metrics need 2 numbers");
    floor.cardinality = count(m[0], "cardinality");
    floor.fill_pct = number(m[1], "fill");
    if (const auto it = f.find("ribbon"); it != f.end()) {
      const auto metric = parse_ribbon_metric(text(field(*it, "metric"), "metric"));
      if (!metric) bad("unknown ribbon metric");
      floor.ribbon = FloorRibbon{*metric, number(field(*it, "value"), "value"),
                                 number(field(*it, "t"), "t"), color(field(*it, "col"))};
    }
    if (const auto it = f.find("link"); it != f.end()) floor.link = text(*it, "link");
    t.floors.push_back(std::move(floor));
  }

  const json& slabs = field(v, "slabs");
  if (!slabs.is_array()) bad("slabs must be an array");
  t.slabs.reserve(slabs.size());
  for (const json& s : slabs) {
    Slab slab;
    const json& c = field(s, "c");
    if (!c.is_number_integer()) bad("slab class must be an integer");
    slab.class_code = c.get<int>();
    slab.footprint = quad(field(s, "q"));
    const json& z = field(s, "z");
    if (!z.is_array() || z.size() != 2) bad("slab z needs 2 numbers");
    slab.z0 = number(z[0], "z0");
    slab.z1 = number(z[1], "z1");
    slab.page_index = count(field(s, "p"), "p");
    slab.color = color(field(s, "col"));
    if (const auto it = s.find("label"); it != s.end()) slab.label = text(*it, "label");
    t.slabs.push_back(std::move(slab));
  }
  return t;
}

}  // namespace

Scene parse_scene(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (text(field(root, "format"), "format") != kSceneFormat) bad("format must be \"DocumentTowersScene\"");
  if (!text(field(root, "version"), "version").starts_with("1.")) bad("unsupported scene version");
  const std::string kind = text(field(root, "kind"), "kind");
  const json& towers = field(root, "towers");
  if (!towers.is_array()) bad("towers must be an array");

  try {
    if (kind == "tower") {
      if (towers.size() != 1) bad("a tower scene holds exactly one tower");
      return parse_tower(towers[0]);
    }
    if (kind != "city") bad("kind must be \"tower\" or \"city\"");
    CityScene city;
    const json& grid = field(root, "grid");
    city.grid_columns = count(field(grid, "columns"), "columns");
    city.grid_rows = count(field(grid, "rows"), "rows");
    city.spacing = number(field(grid, "spacing"), "spacing");
    city.order_key = text(field(grid, "orderKey"), "orderKey");
    if (const auto it = grid.find("ribbonRange"); it != grid.end()) {
      if (!it->is_array() || it->size() != 2) bad("ribbonRange needs 2 numbers");
      city.global_ribbon_range = ValueRange{number((*it)[0], "min"), number((*it)[1], "max")};
    }
    for (const json& t : towers) {
      const json& o = field(t, "origin");
      if (!o.is_array() || o.size() != 2) bad("origin needs 2 numbers");
      city.towers.push_back(CityTower{parse_tower(t), Point2{number(o[0], "x"), number(o[1], "y")}});
    }
    return city;
  } catch (const json::exception& e) {
    bad(e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::BadScene) throw;
    bad(e.what());
  }
}

}  // namespace doctowers
