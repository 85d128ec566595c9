// SPDX-License-Identifier: Apache-2.0
#include "doctowers/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "doctowers/error.hpp"

namespace doctowers {

double union_area_aabb(std::span<const Aabb> input) {
  std::vector<Aabb> boxes;
  boxes.reserve(input.size());
  for (const Aabb& b : input) {
    if (b.xmax > b.xmin && b.ymax > b.ymin) boxes.push_back(b);
  }
  if (boxes.empty()) return 0.0;

  std::vector<double> xs;
  xs.reserve(boxes.size() * 2);
  for (const Aabb& b : boxes) {
    xs.push_back(b.xmin);
    xs.push_back(b.xmax);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(boxes.begin(), boxes.end(), [](const Aabb& a, const Aabb& b) { return a.ymin < b.ymin; });

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    // Boxes are sorted by ymin, so covering intervals merge in one pass.
    double covered = 0.0;
    double run_start = 0.0;
    double run_end = 0.0;
    bool open = false;
    for (const Aabb& b : boxes) {
      if (b.xmin > x0 || b.xmax < x1) continue;
      if (!open) {
        run_start = b.ymin;
        run_end = b.ymax;
        open = true;
      } else if (b.ymin > run_end) {
        covered += run_end - run_start;
        run_start = b.ymin;
        run_end = b.ymax;
      } else {
        run_end = std::max(run_end, b.ymax);
      }
    }
    if (open) covered += run_end - run_start;
    area += (x1 - x0) * covered;
  }
  return area;
}

bool overlaps_frame(const Aabb& e, const Aabb& page) noexcept {
  auto axis = [](double lo, double hi, double plo, double phi) {
    if (hi > lo) return lo < phi && hi > plo;
    return lo >= plo && lo <= phi;
  };
  return axis(e.xmin, e.xmax, page.xmin, page.xmax) && axis(e.ymin, e.ymax, page.ymin, page.ymax);
}

namespace {

bool selected(const ClassFilter& filter, EntityClass cls) {
  return !filter || filter->contains(cls.code());
}

double percent_of(double area, double page_area) {
  if (!(page_area > 0.0)) return 0.0;
  return std::clamp(100.0 * area / page_area, 0.0, 100.0);
}

}  // namespace

double page_fill(const PageRecord& page, const ClassFilter& filter) {
  const Aabb frame = quad_bbox(page.bounds);
  std::vector<Aabb> boxes;
  boxes.reserve(page.entities.size());
  for (const EntityRecord& e : page.entities) {
    if (selected(filter, e.cls)) boxes.push_back(intersect(quad_bbox(e.quad), frame));
  }
  return percent_of(union_area_aabb(boxes), frame.area());
}

PageMetrics page_cardinality(const PageRecord& page, const ClassFilter& filter) {
  PageMetrics m;
  const Aabb frame = quad_bbox(page.bounds);
  for (const EntityRecord& e : page.entities) {
    if (!selected(filter, e.cls)) continue;
    ++m.cardinality_total;
    ++m.cardinality_by_class[e.cls.code()];
    if (!overlaps_frame(quad_bbox(e.quad), frame)) ++m.out_of_frame_count;
  }
  return m;
}

PageMetrics page_metrics(const PageRecord& page, const ClassFilter& filter) {
  PageMetrics m = page_cardinality(page, filter);
  const Aabb frame = quad_bbox(page.bounds);
  const double page_area = frame.area();

  std::vector<Aabb> all;
  std::map<int, std::vector<Aabb>> by_class;
  double sum = 0.0;
  for (const EntityRecord& e : page.entities) {
    if (!selected(filter, e.cls)) continue;
    const Aabb clipped = intersect(quad_bbox(e.quad), frame);
    all.push_back(clipped);
    by_class[e.cls.code()].push_back(clipped);
    sum += clipped.area();
  }
  m.fill_total_pct = percent_of(union_area_aabb(all), page_area);
  for (const auto& [code, boxes] : by_class) {
    m.fill_by_class_pct[code] = percent_of(union_area_aabb(boxes), page_area);
  }
  m.fill_sum_pct = page_area > 0.0 ? 100.0 * sum / page_area : 0.0;
  return m;
}

StatsReport document_stats(const DocumentGeometry& doc, const ClassFilter& filter) {
  if (doc.pages.empty()) throw Error(ErrorKind::InvalidArgument, "document has no pages");
  StatsReport report;
  report.per_page.reserve(doc.pages.size());
  for (const PageRecord& page : doc.pages) {
    PageMetrics m = page_metrics(page, filter);
    for (const auto& [code, n] : m.cardinality_by_class) report.class_totals[code] += n;
    report.out_of_frame_total += m.out_of_frame_count;
    report.per_page.push_back(std::move(m));
  }

  std::size_t max_card = 0;
  std::size_t max_fill = 0;
  std::size_t min_fill = 0;
  for (std::size_t i = 1; i < report.per_page.size(); ++i) {
    const PageMetrics& m = report.per_page[i];
    if (m.cardinality_total > report.per_page[max_card].cardinality_total) max_card = i;
    if (m.fill_total_pct > report.per_page[max_fill].fill_total_pct) max_fill = i;
    if (m.fill_total_pct < report.per_page[min_fill].fill_total_pct) min_fill = i;
  }
  auto extreme = [&](std::size_t i, double value) {
    return PageExtreme{i, doc.pages[i].number, value};
  };
  report.extremes.max_cardinality =
      extreme(max_card, static_cast<double>(report.per_page[max_card].cardinality_total));
  report.extremes.max_fill = extreme(max_fill, report.per_page[max_fill].fill_total_pct);
  report.extremes.min_fill = extreme(min_fill, report.per_page[min_fill].fill_total_pct);
  return report;
}

std::string Color::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s = "#";
  for (std::uint8_t c : {r, g, b}) {
    s += digits[c >> 4];
    s += digits[c & 0xf];
  }
  return s;
}

Color Color::from_hex(std::string_view s) {
  if (s.size() != 7 || s[0] != '#') {
    throw Error(ErrorKind::InvalidArgument, "color must look like #rrggbb: " + std::string(s));
  }
  std::uint8_t ch[3]{};
  for (int i = 0; i < 3; ++i) {
    const char* first = s.data() + 1 + 2 * i;
    const auto res = std::from_chars(first, first + 2, ch[i], 16);
    if (res.ec != std::errc{} || res.ptr != first + 2) {
      throw Error(ErrorKind::InvalidArgument, "color must look like #rrggbb: " + std::string(s));
    }
  }
  return {ch[0], ch[1], ch[2]};
}

std::string_view to_string(RibbonMetric m) noexcept {
  return m == RibbonMetric::Fill ? "fill" : "cardinality";
}

std::optional<RibbonMetric> parse_ribbon_metric(std::string_view s) noexcept {
  if (s == "fill") return RibbonMetric::Fill;
  if (s == "cardinality") return RibbonMetric::Cardinality;
  return std::nullopt;
}

int palette_step(double t) noexcept {
  if (!(t > 0.0)) return 0;
  return std::min(kRibbonSteps - 1, static_cast<int>(std::floor(t * kRibbonSteps)));
}

Color palette_color(std::span<const Color> stops, double t) {
  if (stops.size() < 2) throw Error(ErrorKind::InvalidArgument, "palette needs at least 2 stops");
  const double q = static_cast<double>(palette_step(t)) / (kRibbonSteps - 1);
  const double u = q * static_cast<double>(stops.size() - 1);
  const std::size_t seg = std::min(static_cast<std::size_t>(u), stops.size() - 2);
  const double f = u - static_cast<double>(seg);
  auto lerp = [f](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(std::lround(a + (static_cast<double>(b) - a) * f));
  };
  const Color& a = stops[seg];
  const Color& b = stops[seg + 1];
  return {lerp(a.r, b.r), lerp(a.g, b.g), lerp(a.b, b.b)};
}

std::vector<RibbonValue> ribbon_values(std::span<const double> values, const RibbonSpec& spec,
                                       std::optional<ValueRange> global_range) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "ribbon needs at least one value");
  if (spec.palette_stops.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "palette needs at least 2 stops");
  }
  ValueRange range;
  if (spec.scope == RibbonScope::Global) {
    if (!global_range) throw Error(ErrorKind::InvalidArgument, "global ribbon scope needs a range");
    range = *global_range;
  } else {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    range = {*lo, *hi};
  }
  std::vector<RibbonValue> out;
  out.reserve(values.size());
  for (double v : values) {
    const double t =
        range.max == range.min ? 0.5 : std::clamp((v - range.min) / (range.max - range.min), 0.0, 1.0);
    out.push_back({t, palette_color(spec.palette_stops, t)});
  }
  return out;
}

std::vector<double> metric_series(const StatsReport& stats, RibbonMetric metric) {
  std::vector<double> out;
  out.reserve(stats.per_page.size());
  for (const PageMetrics& m : stats.per_page) {
    out.push_back(metric == RibbonMetric::Fill ? m.fill_total_pct
                                               : static_cast<double>(m.cardinality_total));
  }
  return out;
}

}  // namespace doctowers
