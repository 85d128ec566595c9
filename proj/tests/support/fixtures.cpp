// SPDX-License-Identifier: Apache-2.0
#include "fixtures.hpp"

#include <unistd.h>

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "doctowers/zip.hpp"

namespace fixtures {

using namespace doctowers;

namespace {

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void alto_block(std::ostringstream& out, const AltoBlock& b, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out << indent << "<" << b.element << " ID=\"blk" << depth << "_" << b.x << "_" << b.y << "\" HPOS=\""
      << num(b.x) << "\" VPOS=\"" << num(b.y) << "\" WIDTH=\"" << num(b.w) << "\" HEIGHT=\"" << num(b.h)
      << "\"";
  if (b.type) out << " TYPE=\"" << escape(*b.type) << "\"";
  if (b.tagrefs) out << " TAGREFS=\"" << escape(*b.tagrefs) << "\"";
  if (b.children.empty() && b.element != "TextBlock") {
    out << "/>\n";
    return;
  }
  out << ">\n";
  if (b.element == "TextBlock") {
    // Line-level content is never emitted as entities.
    out << indent << "  <TextLine HPOS=\"" << num(b.x) << "\" VPOS=\"" << num(b.y) << "\" WIDTH=\"" << num(b.w)
        << "\" HEIGHT=\"10\"><String CONTENT=\"lorem\" HPOS=\"" << num(b.x) << "\" VPOS=\"" << num(b.y)
        << "\" WIDTH=\"20\" HEIGHT=\"10\"/></TextLine>\n";
  }
  for (const auto& c : b.children) alto_block(out, c, depth + 1);
  out << indent << "</" << b.element << ">\n";
}

void idml_item(std::ostringstream& out, const IdmlItem& item, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out << indent << "<" << item.element << " Self=\"it" << depth << "\"";
  if (item.transform) out << " ItemTransform=\"" << *item.transform << "\"";
  if (item.layer) out << " ItemLayer=\"" << *item.layer << "\"";
  if (item.geometric_bounds) out << " GeometricBounds=\"" << *item.geometric_bounds << "\"";
  out << ">\n";
  if (!item.anchors.empty()) {
    out << indent << "  <Properties><PathGeometry><GeometryPathType PathOpen=\"false\"><PathPointArray>\n";
    for (const auto& [x, y] : item.anchors) {
      out << indent << "    <PathPointType Anchor=\"" << num(x) << " " << num(y) << "\" LeftDirection=\""
          << num(x) << " " << num(y) << "\" RightDirection=\"" << num(x) << " " << num(y) << "\"/>\n";
    }
    out << indent << "  </PathPointArray></GeometryPathType></PathGeometry></Properties>\n";
  }
  if (item.content) {
    out << indent << "  <" << *item.content << " Self=\"c" << depth
        << "\" ItemTransform=\"1 0 0 1 0 0\"><Link Self=\"l1\" LinkResourceURI=\"file:img\"/></"
        << *item.content << ">\n";
  }
  for (const auto& c : item.children) idml_item(out, c, depth + 1);
  out << indent << "</" << item.element << ">\n";
}

}  // namespace

std::string alto_xml(const AltoDoc& doc) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<alto xmlns=\"" << doc.ns << "\">\n";
  out << "  <Description>\n";
  if (doc.unit) out << "    <MeasurementUnit>" << *doc.unit << "</MeasurementUnit>\n";
  out << "    <sourceImageInformation><fileName>scan.tif</fileName></sourceImageInformation>\n";
  out << "  </Description>\n";
  if (!doc.tags.empty()) {
    out << "  <Tags>\n";
    for (const auto& t : doc.tags) {
      out << "    <" << t.element << " ID=\"" << t.id << "\" LABEL=\"" << escape(t.label) << "\"/>\n";
    }
    out << "  </Tags>\n";
  }
  out << "  <Layout>\n    <Page ID=\"P1\" WIDTH=\"" << doc.width << "\" HEIGHT=\"" << doc.height << "\"";
  if (doc.physical_img_nr) out << " PHYSICAL_IMG_NR=\"" << *doc.physical_img_nr << "\"";
  out << ">\n      <PrintSpace HPOS=\"0\" VPOS=\"0\" WIDTH=\"" << doc.width << "\" HEIGHT=\"" << doc.height
      << "\">\n";
  for (const auto& b : doc.blocks) alto_block(out, b, 4);
  out << "      </PrintSpace>\n    </Page>\n  </Layout>\n</alto>\n";
  return out.str();
}

std::vector<std::pair<double, double>> rect_anchors(double x, double y, double w, double h) {
  return {{x, y}, {x, y + h}, {x + w, y + h}, {x + w, y}};
}

std::string idml_spread_xml(const IdmlSpread& spread, bool master) {
  const char* element = master ? "MasterSpread" : "Spread";
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
  out << "<idPkg:" << element << " xmlns:idPkg=\"http://ns.adobe.com/AdobeInDesign/idml/1.0/packaging\" "
      << "DOMVersion=\"16.0\">\n";
  out << "  <" << element << " Self=\"" << spread.self << "\" ItemTransform=\"1 0 0 1 0 0\">\n";
  out << "    <FlattenerPreference LineArtAndTextResolution=\"300\"/>\n";
  for (std::size_t i = 0; i < spread.pages.size(); ++i) {
    const auto& p = spread.pages[i];
    out << "    <Page Self=\"" << spread.self << "_p" << i << "\" Name=\"" << escape(p.name)
        << "\" GeometricBounds=\"" << p.bounds << "\" ItemTransform=\"" << p.transform << "\"";
    if (p.applied_master) out << " AppliedMaster=\"" << *p.applied_master << "\"";
    out << "/>\n";
  }
  for (const auto& item : spread.items) idml_item(out, item, 2);
  out << "  </" << element << ">\n</idPkg:" << element << ">\n";
  return out.str();
}

std::string idml_package(const IdmlDoc& doc) {
  std::vector<zip::Member> members;
  members.push_back({"mimetype", "application/vnd.adobe.indesign-idml-package", false});
  std::ostringstream dm;
  dm << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
  dm << "<?aid style=\"50\" type=\"document\" readerVersion=\"6.0\" featureSet=\"257\"?>\n";
  dm << "<Document xmlns:idPkg=\"http://ns.adobe.com/AdobeInDesign/idml/1.0/packaging\" DOMVersion=\""
     << doc.dom_version << "\" Self=\"d\">\n";
  dm << "  <idPkg:Graphic src=\"Resources/Graphic.xml\"/>\n";
  for (const auto& l : doc.layers) {
    dm << "  <Layer Self=\"" << l.self << "\" Name=\"" << escape(l.name) << "\" Visible=\""
       << (l.visible ? "true" : "false") << "\"/>\n";
  }
  for (const auto& m : doc.masters) {
    dm << "  <idPkg:MasterSpread src=\"MasterSpreads/MasterSpread_" << m.self << ".xml\"/>\n";
  }
  for (const auto& s : doc.spreads) dm << "  <idPkg:Spread src=\"Spreads/Spread_" << s.self << ".xml\"/>\n";
  dm << "  <idPkg:Story src=\"Stories/Story_u1.xml\"/>\n";
  dm << "</Document>\n";
  if (doc.include_designmap) members.push_back({"designmap.xml", dm.str(), doc.deflate});
  for (const auto& m : doc.masters) {
    members.push_back({"MasterSpreads/MasterSpread_" + m.self + ".xml", idml_spread_xml(m, true), doc.deflate});
  }
  for (const auto& s : doc.spreads) {
    members.push_back({"Spreads/Spread_" + s.self + ".xml", idml_spread_xml(s, false), doc.deflate});
  }
  members.push_back({"Stories/Story_u1.xml", "<Story/>", doc.deflate});
  return zip::write(members);
}

PageRecord blank_page(std::size_t index, double w, double h) {
  PageRecord p;
  p.index = index;
  p.number = std::to_string(index + 1);
  p.bounds = Quad::rect(0, 0, w, h);
  return p;
}

EntityRecord entity(int code, double x, double y, double w, double h, std::optional<std::string> label,
                    std::size_t page) {
  return EntityRecord{class_for_code(code), Quad::rect(x, y, w, h), std::move(label), page};
}

DocumentGeometry random_document(std::mt19937_64& rng, std::size_t max_pages, std::size_t max_entities) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  static const std::array<std::string, 6> kNames = {"report.pdf", "scan_0001", "Überblick", "a \"quoted\" name",
                                                    "back\\slash", "tab\there"};
  static const std::array<std::optional<std::string>, 7> kLabels = {
      std::nullopt, std::nullopt, std::string("title"), std::string("stamp"),
      std::string("Fußnote"), std::string("caption \"x\""), std::string("line\nbreak")};
  static const std::array<std::string, 6> kNumbers = {"i", "viii", "96", "1", "A-3", "xii"};

  DocumentGeometry doc;
  doc.source_name = kNames[pick(kNames.size())];
  doc.source_format = std::array{SourceFormat::Alto, SourceFormat::Idml, SourceFormat::External}[pick(3)];
  doc.unit = pick(4) == 0 ? Unit::Px : Unit::Pt;
  if (pick(2) == 0) doc.dpi = 72.0 + static_cast<double>(pick(600));
  const bool user_class = pick(2) == 0;
  if (user_class) doc.classes.add(100 + static_cast<int>(pick(50)), "stamp-region");

  const std::size_t pages = 1 + pick(max_pages);
  for (std::size_t i = 0; i < pages; ++i) {
    PageRecord page;
    page.index = i;
    page.number = kNumbers[pick(kNumbers.size())];
    const double w = 100.0 + unit(rng) * 900.0;
    const double h = 100.0 + unit(rng) * 900.0;
    page.bounds = pick(5) == 0 ? Quad::rect(0, 0, std::round(w), std::round(h)) : Quad::rect(0, 0, w, h);
    const std::size_t n = pick(max_entities + 1);
    for (std::size_t k = 0; k < n; ++k) {
      int code = 1 + static_cast<int>(pick(3));
      if (user_class && pick(6) == 0) code = doc.classes.entries().begin()->first;
      const double x = (unit(rng) * 1.4 - 0.2) * w;
      const double y = (unit(rng) * 1.4 - 0.2) * h;
      const double ew = unit(rng) * w * 0.5;
      const double eh = unit(rng) * h * 0.5;
      Quad q = Quad::rect(x, y, ew, eh);
      switch (pick(5)) {
        case 0: {  // rotated frame
          const double t = unit(rng) * 2 * std::numbers::pi;
          const double c = std::cos(t), s = std::sin(t);
          const std::array<std::array<double, 2>, 4> local = {{{0, 0}, {ew, 0}, {ew, eh}, {0, eh}}};
          for (std::size_t j = 0; j < 4; ++j) {
            q.corners[j] = {x + c * local[j][0] - s * local[j][1], y + s * local[j][0] + c * local[j][1]};
          }
          break;
        }
        case 1:  // integers
          q = Quad::rect(std::round(x), std::round(y), std::round(ew), std::round(eh));
          break;
        case 2:  // hairline
          q = Quad::rect(x, y, ew, 0.0);
          break;
        case 3:  // awkward magnitudes
          q = Quad::rect(x * 1e-7, y + 1e9, ew * 3.0000000000000004, 5e-324);
          break;
        default: break;
      }
      page.entities.push_back(EntityRecord{class_for_code(code, doc.classes), q, kLabels[pick(kLabels.size())], i});
    }
    doc.pages.push_back(std::move(page));
  }
  return doc;
}

std::vector<DocumentGeometry> synthetic_corpus(std::size_t docs, std::size_t total_entities, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DocumentGeometry> out;
  out.reserve(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t n = total_entities / docs + (d < total_entities % docs ? 1 : 0);
    const std::size_t pages = 4 + static_cast<std::size_t>(unit(rng) * 17);
    DocumentGeometry doc;
    char name[32];
    std::snprintf(name, sizeof name, "doc_%03zu.pdf", d);
    doc.source_name = name;
    doc.source_format = SourceFormat::External;
    for (std::size_t i = 0; i < pages; ++i) doc.pages.push_back(blank_page(i, 441, 666));
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t p = k * pages / n;
      const double x = unit(rng) * 480 - 20;
      const double y = unit(rng) * 700 - 20;
      doc.pages[p].entities.push_back(
          entity(1 + static_cast<int>(k % 3), x, y, 5 + unit(rng) * 150, 5 + unit(rng) * 120, std::nullopt, p));
    }
    out.push_back(std::move(doc));
  }
  return out;
}

DocumentGeometry extremes_fixture() {
  DocumentGeometry doc;
  doc.source_name = "extremes.pdf";
  doc.pages = {blank_page(0), blank_page(1), blank_page(2)};
  doc.pages[1].entities.push_back(entity(2, 0, 0, 441, 666, "plate", 1));
  doc.pages[2].entities.push_back(entity(1, 0, 0, 220.5, 666, "column", 2));
  doc.pages[2].entities.push_back(entity(1, 10, 10, 100, 100, std::nullopt, 2));  // inside the half
  doc.pages[2].entities.push_back(entity(2, 500, 700, 40, 40, std::nullopt, 2));  // off the page
  return doc;
}

DocumentGeometry out_of_frame_fixture() {
  DocumentGeometry doc;
  doc.source_name = "forensics.pdf";
  doc.pages = {blank_page(0), blank_page(1)};
  doc.pages[0].entities.push_back(entity(2, 100, 100, 200, 150, std::nullopt, 0));
  doc.pages[0].entities.push_back(entity(2, -50, 200, 40, 60, std::nullopt, 0));   // pasteboard, left
  doc.pages[1].entities.push_back(entity(1, 20, 20, 400, 600, std::nullopt, 1));
  doc.pages[1].entities.push_back(entity(2, 100, 700, 80, 80, std::nullopt, 1));   // below the page
  return doc;
}

TempDir::TempDir() {
  std::string templ = (std::filesystem::temp_directory_path() / "doctowers-test-XXXXXX").string();
  if (!::mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
  path_ = templ;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path TempDir::write(const std::string& name, const std::string& bytes) const {
  const auto p = path_ / name;
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << bytes;
  return p;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fixtures
