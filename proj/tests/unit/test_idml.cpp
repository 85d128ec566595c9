// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "doctowers/idml.hpp"
#include "doctowers/zip.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace doctowers;
using namespace doctowers::idml;
using fixtures::error_kind;
using fixtures::IdmlDoc;
using fixtures::IdmlItem;
using fixtures::IdmlPage;
using fixtures::IdmlSpread;

namespace {

bool near(Point2 a, Point2 b, double tol = 1e-9) { return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol; }

Affine2 random_affine(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-3, 3), t(-500, 500);
  return {d(rng), d(rng), d(rng), d(rng), t(rng), t(rng)};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One 441 x 666 page whose spread origin sits at the page's vertical center,
// as InDesign writes single-page spreads.
IdmlPage single_page(std::string name = "1") {
  return IdmlPage{std::move(name), "0 0 666 441", "1 0 0 1 0 -333", std::nullopt};
}

IdmlItem rect_item(double x, double y, double w, double h, std::optional<std::string> content = "Image") {
  IdmlItem it;
  it.element = "Rectangle";
  it.transform = "1 0 0 1 0 -333";
  it.anchors = fixtures::rect_anchors(x, y, w, h);
  it.content = std::move(content);
  return it;
}

IdmlResult parse(const IdmlDoc& d, IdmlIngestOptions o = {}) {
  return parse_idml(fixtures::idml_package(d), o, "fixture.idml");
}

}  // namespace

TEST_CASE("affine examples") {
  const Affine2 t{1.5, 0.25, -0.5, 2, 7, -3};
  CHECK(compose(Affine2::identity(), t) == t);
  CHECK(compose(t, Affine2::identity()) == t);
  CHECK(apply(compose(Affine2::translate(10, 0), Affine2::translate(0, 5)), Point2{0, 0}) == Point2{10, 5});
  const Affine2 rot90{0, 1, -1, 0, 0, 0};
  CHECK(apply(compose(rot90, Affine2::translate(1, 0)), Point2{0, 0}) == Point2{0, 1});
  CHECK(apply(Affine2::identity(), Point2{3, 4}) == Point2{3, 4});
  CHECK(apply(Affine2::scale(2, 2), Point2{1, 1}) == Point2{2, 2});
  CHECK(apply(rot90, Point2{1, 0}) == Point2{0, 1});
  CHECK(near(apply(Affine2::rotate(std::numbers::pi / 2), Point2{1, 0}), {0, 1}, 1e-15));
}

TEST_CASE("parse_item_transform") {
  CHECK(parse_item_transform("1 0 0 1 -441 -333") == Affine2{1, 0, 0, 1, -441, -333});
  CHECK(parse_item_transform("  0.5 0 0 0.5 1e2 2.5 ") == Affine2{0.5, 0, 0, 0.5, 100, 2.5});
  CHECK(error_kind([] { (void)parse_item_transform("1 0 0 1"); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { (void)parse_item_transform("1 0 0 1 a b"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("composition is associative and matches sequential application") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pd(-1000, 1000);
  for (int i = 0; i < 10000; ++i) {
    const Affine2 a = random_affine(rng), b = random_affine(rng), c = random_affine(rng);
    const Point2 p{pd(rng), pd(rng)};
    const Point2 lhs = apply(compose(compose(a, b), c), p);
    const Point2 rhs = apply(compose(a, compose(b, c)), p);
    const Point2 seq = apply(a, apply(b, apply(c, p)));
    // 1e-6 absolute on outputs of magnitude ~1e5 is ~1e-11 relative.
    REQUIRE(near(lhs, rhs, 1e-6));
    REQUIRE(near(lhs, seq, 1e-6));
  }
}

TEST_CASE("inverse undoes the transform") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> pd(-1000, 1000);
  int tested = 0;
  for (int i = 0; i < 10000; ++i) {
    const Affine2 t = random_affine(rng);
    if (std::abs(t.determinant()) < 1e-3) continue;
    const auto inv = inverse(t);
    REQUIRE(inv);
    const Point2 p{pd(rng), pd(rng)};
    REQUIRE(near(apply(*inv, apply(t, p)), p, 1e-6));
    ++tested;
  }
  CHECK(tested > 9000);
  CHECK_FALSE(inverse(Affine2{1, 2, 2, 4, 0, 0}));
}

TEST_CASE("assign_to_page") {
  // Two facing 100 x 100 pages side by side in spread space.
  const std::vector<SpreadPage> pages = {
      {0, {-100, 0, 0, 100}, Affine2::translate(-100, 0), {0, 0}},
      {1, {0, 0, 100, 100}, Affine2::identity(), {0, 0}},
  };

  SUBCASE("item inside a page under identity transforms") {
    const Quad q = Quad::rect(10, 10, 20, 20);
    const PageAssignment a = assign_to_page(q, std::span(pages).subspan(1));
    CHECK(a.page_index == 1);
    CHECK(a.quad == q);
  }
  SUBCASE("largest overlap wins") {
    // 10 pt tall box spanning x in [-3, 7]: 30 pt2 on page 0 and 70 pt2 on page 1
    const Quad q = Quad::rect(-3, 50, 10, 10);
    const oracles::Box box{-3, 50, 7, 60};
    CHECK(oracles::brute_overlap(box, {-100, 0, 0, 100}) == doctest::Approx(30));
    CHECK(oracles::brute_overlap(box, {0, 0, 100, 100}) == doctest::Approx(70));
    const PageAssignment a = assign_to_page(q, pages);
    CHECK(a.page_index == 1);
    CHECK(a.quad == q);

    const PageAssignment b = assign_to_page(Quad::rect(-7, 50, 10, 10), pages);
    CHECK(b.page_index == 0);
    CHECK(b.quad == Quad::rect(93, 50, 10, 10));
  }
  SUBCASE("ties go to the lower index") {
    CHECK(assign_to_page(Quad::rect(-5, 50, 10, 10), pages).page_index == 0);
  }
  SUBCASE("pasteboard item goes to the nearest page and keeps negative coordinates") {
    const PageAssignment a = assign_to_page(Quad::rect(-180, 10, 40, 40), pages);
    CHECK(a.page_index == 0);
    CHECK(quad_bbox(a.quad).xmin == -80);
    const std::vector<SpreadPage> one = {pages[1]};
    const PageAssignment b = assign_to_page(Quad::rect(-50, 10, 40, 40), one);
    CHECK(b.page_index == 1);
    CHECK(quad_bbox(b.quad).xmin == -50);
  }
  SUBCASE("hairlines go to a page they touch") {
    const PageAssignment a = assign_to_page(Quad::rect(10, 100, 60, 0), pages);
    CHECK(a.page_index == 1);
  }
  SUBCASE("page origin is subtracted") {
    const std::vector<SpreadPage> shifted = {{0, {0, 0, 100, 100}, Affine2::translate(-20, -30), {20, 30}}};
    CHECK(assign_to_page(Quad::rect(0, 0, 10, 10), shifted).quad == Quad::rect(0, 0, 10, 10));
  }
  SUBCASE("no pages") {
    CHECK(error_kind([] { (void)assign_to_page(Quad::rect(0, 0, 1, 1), {}); }) == ErrorKind::NoPagesInSpread);
  }
}

TEST_CASE("minimal package: one page, one full-page placed image") {
  IdmlDoc d;
  d.spreads = {IdmlSpread{"u1", {single_page()}, {rect_item(0, 0, 441, 666)}}};
  const IdmlResult r = parse(d);
  REQUIRE(r.doc.pages.size() == 1);
  CHECK(r.doc.source_format == SourceFormat::Idml);
  CHECK(r.doc.unit == Unit::Pt);
  CHECK(r.doc.source_name == "fixture.idml");
  CHECK(r.doc.pages[0].bounds.coords() == std::array<double, 8>{0, 0, 441, 0, 441, 666, 0, 666});
  REQUIRE(r.doc.pages[0].entities.size() == 1);
  const EntityRecord& e = r.doc.pages[0].entities[0];
  CHECK(e.cls == EntityClass::raster_image());
  CHECK(quad_bbox(e.quad) == Aabb{0, 0, 441, 666});
  CHECK(r.warnings.empty());
  CHECK_NOTHROW(validate(r.doc));
}

TEST_CASE("rotated rectangle matches the trigonometric oracle") {
  for (double deg : {30.0, -30.0, 45.0, 90.0, 137.5}) {
    const double th = deg * std::numbers::pi / 180.0;
    const double c = std::cos(th), s = std::sin(th);
    IdmlItem it = rect_item(0, 0, 200, 100);
    // rotate about the item origin, then place at (120, 200) on the page
    it.transform = fmt(c) + " " + fmt(s) + " " + fmt(-s) + " " + fmt(c) + " 120 " + fmt(200 - 333);
    IdmlDoc d;
    d.spreads = {IdmlSpread{"u1", {single_page()}, {it}}};
    const IdmlResult r = parse(d);
    REQUIRE(r.doc.pages[0].entities.size() == 1);
    const Quad q = r.doc.pages[0].entities[0].quad;
    const Aabb got = quad_bbox(q);
    const oracles::Box want = oracles::rotated_rect_bbox(120, 200, 200, 100, th);
    CHECK(std::abs(got.xmin - want.xmin) < 1e-6);
    CHECK(std::abs(got.ymin - want.ymin) < 1e-6);
    CHECK(std::abs(got.xmax - want.xmax) < 1e-6);
    CHECK(std::abs(got.ymax - want.ymax) < 1e-6);
    // still a rotated rectangle of the original area
    CHECK(quad_area(q) == doctest::Approx(20000).epsilon(1e-9));
    if (deg == 30.0) {
      // at 30 degrees no edge is axis-aligned
      for (int k = 0; k < 4; ++k) {
        const Point2 a = q.corners[static_cast<std::size_t>(k)], b = q.corners[static_cast<std::size_t>((k + 1) % 4)];
        CHECK(std::abs(a.x - b.x) > 1);
        CHECK(std::abs(a.y - b.y) > 1);
      }
    }
  }
}

TEST_CASE("classification by element and placed content") {
  IdmlDoc d;
  IdmlItem text = rect_item(10, 10, 100, 50, std::nullopt);
  text.element = "TextFrame";
  IdmlItem pdf = rect_item(10, 70, 100, 50, "PDF");
  pdf.element = "Oval";
  IdmlItem empty = rect_item(10, 130, 100, 50, std::nullopt);
  empty.element = "Polygon";
  IdmlItem line = rect_item(10, 200, 100, 0, std::nullopt);
  line.element = "GraphicLine";
  IdmlItem eps = rect_item(10, 220, 100, 50, "EPS");
  IdmlItem img = rect_item(10, 300, 100, 50, "Image");
  img.element = "Polygon";
  d.spreads = {IdmlSpread{"u1", {single_page()}, {text, pdf, empty, line, eps, img}}};
  const IdmlResult r = parse(d);
  REQUIRE(r.doc.pages[0].entities.size() == 6);
  const std::array<int, 6> expect = {1, 3, 3, 3, 3, 2};
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.doc.pages[0].entities[i].cls.code() == expect[i]);
  CHECK(quad_bbox(r.doc.pages[0].entities[3].quad) == Aabb{10, 200, 110, 200});
}

TEST_CASE("groups compose transforms and pass their layer down") {
  IdmlDoc d;
  d.layers = {{"L1", "Photos", true}};
  IdmlItem child = rect_item(0, 0, 50, 50);
  child.transform = "2 0 0 2 5 5";  // scaled inside the group
  IdmlItem group;
  group.element = "Group";
  group.transform = "1 0 0 1 10 -313";  // page (10, 20)
  group.layer = "L1";
  group.children = {child};
  IdmlItem outer;
  outer.element = "Group";
  outer.transform = "1 0 0 1 100 0";
  outer.children = {group};
  d.spreads = {IdmlSpread{"u1", {single_page()}, {outer}}};
  const IdmlResult r = parse(d);
  REQUIRE(r.doc.pages[0].entities.size() == 1);
  const auto& e = r.doc.pages[0].entities[0];
  CHECK(quad_bbox(e.quad) == Aabb{115, 25, 215, 125});
  CHECK(e.label == "Photos");
}

TEST_CASE("hidden layers and master spreads are opt-in") {
  IdmlDoc d;
  d.layers = {{"Lv", "Body", true}, {"Lh", "Notes", false}};
  IdmlItem visible = rect_item(0, 0, 100, 100);
  visible.layer = "Lv";
  IdmlItem hidden = rect_item(200, 200, 50, 50);
  hidden.layer = "Lh";
  IdmlPage p1 = single_page("1"), p2 = single_page("2");
  p1.applied_master = "ms1";
  p2.applied_master = "ms1";
  d.spreads = {IdmlSpread{"u1", {p1}, {visible, hidden}}, IdmlSpread{"u2", {p2}, {}}};
  IdmlItem running_head = rect_item(20, 10, 400, 20, std::nullopt);
  running_head.element = "TextFrame";
  d.masters = {IdmlSpread{"ms1", {single_page("A")}, {running_head}}};

  const IdmlResult plain = parse(d);
  REQUIRE(plain.doc.pages.size() == 2);
  CHECK(plain.doc.pages[0].entities.size() == 1);
  CHECK(plain.doc.pages[0].entities[0].label == "Body");
  CHECK(plain.doc.pages[1].entities.empty());
  CHECK(plain.items_walked == 2);
  CHECK(plain.items_skipped == 1);

  const IdmlResult all = parse(d, {.include_master_spreads = true, .include_hidden_layers = true});
  CHECK(all.doc.pages[0].entities.size() == 3);
  CHECK(all.doc.pages[1].entities.size() == 1);
  CHECK(all.doc.pages[1].entities[0].cls == EntityClass::text_frame());
  CHECK(quad_bbox(all.doc.pages[1].entities[0].quad) == Aabb{20, 10, 420, 30});
  std::size_t emitted = 0;
  for (const auto& p : all.doc.pages) emitted += p.entities.size();
  CHECK(emitted == all.items_walked - all.items_skipped);
}

TEST_CASE("unsupported items are skipped with a counted warning") {
  IdmlDoc d;
  IdmlItem button = rect_item(0, 0, 10, 10, std::nullopt);
  button.element = "Button";
  IdmlItem no_geometry;
  no_geometry.element = "TextFrame";
  d.spreads = {IdmlSpread{"u1", {single_page()}, {rect_item(0, 0, 10, 10), button, no_geometry}}};
  const IdmlResult r = parse(d);
  CHECK(r.doc.pages[0].entities.size() == 1);
  CHECK(r.items_walked == 3);
  CHECK(r.items_skipped == 2);
  CHECK(r.warnings.size() == 2);
  CHECK(r.doc.entity_count() == r.items_walked - r.items_skipped);
}

TEST_CASE("GeometricBounds fallback") {
  IdmlItem it;
  it.element = "TextFrame";
  it.transform = "1 0 0 1 0 -333";
  it.geometric_bounds = "20 10 120 210";
  IdmlDoc d;
  d.spreads = {IdmlSpread{"u1", {single_page()}, {it}}};
  CHECK(quad_bbox(parse(d).doc.pages[0].entities[0].quad) == Aabb{10, 20, 210, 120});
}

TEST_CASE("spreads in designmap order, facing pages, empty document") {
  IdmlDoc d;
  IdmlPage left{"ii", "0 0 666 441", "1 0 0 1 -441 -333", std::nullopt};
  IdmlPage right{"iii", "0 0 666 441", "1 0 0 1 0 -333", std::nullopt};
  IdmlItem on_left = rect_item(-400, 0, 100, 100);  // spread x, before the -333 y shift
  on_left.transform = "1 0 0 1 0 -333";
  d.spreads = {IdmlSpread{"u9", {single_page("i")}, {}}, IdmlSpread{"u2", {left, right}, {on_left}}};
  const IdmlResult r = parse(d);
  REQUIRE(r.doc.pages.size() == 3);
  CHECK(r.doc.pages[0].number == "i");
  CHECK(r.doc.pages[1].number == "ii");
  CHECK(r.doc.pages[2].number == "iii");
  REQUIRE(r.doc.pages[1].entities.size() == 1);
  CHECK(quad_bbox(r.doc.pages[1].entities[0].quad) == Aabb{41, 0, 141, 100});
  CHECK(r.doc.pages[1].entities[0].page_index == 1);

  IdmlDoc empty;
  empty.spreads = {IdmlSpread{"u1", {single_page(), single_page("2")}, {}}};
  const IdmlResult e = parse(empty);
  CHECK(e.doc.pages.size() == 2);
  CHECK(e.doc.entity_count() == 0);
}

TEST_CASE("determinism") {
  IdmlDoc d;
  d.spreads = {IdmlSpread{"u1", {single_page()}, {rect_item(1, 2, 3, 4), rect_item(5, 6, 7, 8, "PDF")}}};
  const std::string pkg = fixtures::idml_package(d);
  CHECK(parse_idml(pkg).doc == parse_idml(pkg).doc);
}

TEST_CASE("package errors") {
  CHECK(error_kind([] { (void)parse_idml("<xml/>"); }) == ErrorKind::NotAZipArchive);

  IdmlDoc d;
  d.spreads = {IdmlSpread{"u1", {single_page()}, {}}};
  d.include_designmap = false;
  CHECK(error_kind([&] { (void)parse(d); }) == ErrorKind::MissingDesignMap);

  const std::string broken = zip::write({{"designmap.xml",
                                          "<Document DOMVersion=\"16.0\"><idPkg:Spread "
                                          "xmlns:idPkg=\"x\" src=\"Spreads/Spread_u1.xml\"/></Document>",
                                          true},
                                         {"Spreads/Spread_u1.xml", "<Spread><Page", true}});
  try {
    (void)parse_idml(broken);
    FAIL("expected MalformedSpread");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedSpread);
    CHECK(std::string(e.what()).find("Spreads/Spread_u1.xml") != std::string::npos);
  }

  IdmlDoc bad_page;
  bad_page.spreads = {IdmlSpread{"u1", {IdmlPage{"1", "0 0 abc 441", "1 0 0 1 0 0", std::nullopt}}, {}}};
  CHECK(error_kind([&] { (void)parse(bad_page); }) == ErrorKind::MalformedSpread);

  IdmlDoc no_pages;
  no_pages.spreads = {IdmlSpread{"u1", {}, {rect_item(0, 0, 10, 10)}}};
  CHECK(error_kind([&] { (void)parse(no_pages); }) == ErrorKind::NoPagesInSpread);
}

TEST_CASE("unknown DOM versions warn and continue") {
  IdmlDoc d;
  d.dom_version = "3.0";
  d.spreads = {IdmlSpread{"u1", {single_page()}, {rect_item(0, 0, 10, 10)}}};
  const IdmlResult r = parse(d);
  CHECK(r.doc.entity_count() == 1);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("DOMVersion") != std::string::npos);
}
