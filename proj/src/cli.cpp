// SPDX-License-Identifier: Apache-2.0
#include "doctowers/cli.hpp"

#include <glob.h>
#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "doctowers/alto.hpp"
#include "doctowers/error.hpp"
#include "doctowers/geometry_file.hpp"
#include "doctowers/idml.hpp"
#include "doctowers/metrics.hpp"
#include "doctowers/scene.hpp"
#include "doctowers/server.hpp"
#include "doctowers/zip.hpp"

namespace doctowers::cli {

namespace fs = std::filesystem;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + p.string());
  return ss.str();
}

void write_file(const fs::path& p, std::string_view bytes) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + p.string());
}

bool has_glob_chars(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

/// Expands glob patterns (matches sorted lexicographically); plain paths
/// are kept in argument order.
std::vector<std::string> expand_inputs(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const std::string& a : args) {
    if (!has_glob_chars(a)) {
      out.push_back(a);
      continue;
    }
    glob_t g{};
    const int rc = ::glob(a.c_str(), 0, nullptr, &g);
    std::vector<std::string> matches;
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) matches.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (matches.empty()) throw IoError("no files match " + a);
    std::sort(matches.begin(), matches.end());
    out.insert(out.end(), matches.begin(), matches.end());
  }
  return out;
}

/// "a/b/report.dtg.json" -> "report"; "a/page_1.xml" -> "page_1".
std::string document_stem(const fs::path& p) {
  std::string name = p.filename().string();
  for (std::string_view ext : {kGeometryExtension, kSceneExtension}) {
    if (name.size() > ext.size() && name.ends_with(ext)) return name.substr(0, name.size() - ext.size());
  }
  return p.stem().string();
}

fs::path output_for(const fs::path& input, const std::optional<std::string>& out_opt, bool many,
                    std::string_view ext) {
  const std::string file = document_stem(input) + std::string(ext);
  if (!out_opt) return input.parent_path() / file;
  if (many || fs::is_directory(*out_opt)) return fs::path(*out_opt) / file;
  return *out_opt;
}

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------
// ingest

enum class InputFormat { Auto, Alto, Idml };

struct IngestOptions {
  std::vector<std::string> inputs;
  std::string format = "auto";
  std::optional<double> dpi;
  bool merge = false;
  bool keep_going = false;
  std::optional<std::string> out;
  unsigned jobs = 0;
  bool include_masters = false;
  bool include_hidden = false;
};

bool looks_like_alto(std::string_view bytes) {
  const std::string_view head = bytes.substr(0, 1 << 16);
  std::size_t at = 0;
  while ((at = head.find('<', at)) != std::string_view::npos) {
    ++at;
    if (at >= head.size()) break;
    const char c = head[at];
    if (c == '?' || c == '!') continue;
    std::size_t end = at;
    while (end < head.size() && head[end] != '>' && head[end] != ' ' && head[end] != '\t' &&
           head[end] != '\n' && head[end] != '\r' && head[end] != '/') {
      ++end;
    }
    std::string_view name = head.substr(at, end - at);
    if (const auto colon = name.rfind(':'); colon != std::string_view::npos) name = name.substr(colon + 1);
    return name == "alto";
  }
  return false;
}

struct Parsed {
  std::variant<std::monostate, alto::AltoPage, idml::IdmlResult> value;
  std::string error;
  bool io_error = false;
};

int cmd_ingest(const IngestOptions& o, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> inputs = expand_inputs(o.inputs);
  if (o.merge && !o.out) {
    err << "ingest: --merge requires --out\n";
    return static_cast<int>(ExitCode::Usage);
  }

  std::vector<Parsed> parsed(inputs.size());
  parallel_for(inputs.size(), o.jobs ? o.jobs : default_jobs(), [&](std::size_t i) {
    Parsed& p = parsed[i];
    try {
      const std::string bytes = read_file(inputs[i]);
      InputFormat fmt = o.format == "alto" ? InputFormat::Alto
                        : o.format == "idml" ? InputFormat::Idml
                                             : InputFormat::Auto;
      if (fmt == InputFormat::Auto) {
        if (zip::looks_like_zip(bytes)) {
          fmt = InputFormat::Idml;
        } else if (looks_like_alto(bytes)) {
          fmt = InputFormat::Alto;
        } else {
          throw Error(ErrorKind::MalformedXml, "cannot detect format (neither IDML package nor ALTO XML)");
        }
      }
      if (fmt == InputFormat::Alto) {
        alto::AltoIngestOptions opts;
        opts.dpi = o.dpi;
        p.value = alto::parse_alto_page(bytes, opts);
      } else {
        idml::IdmlIngestOptions opts{o.include_masters, o.include_hidden};
        p.value = idml::parse_idml(bytes, opts, fs::path(inputs[i]).filename().string());
      }
    } catch (const IoError& e) {
      p.error = e.what();
      p.io_error = true;
    } catch (const std::exception& e) {
      p.error = e.what();
    }
  });

  int status = 0;
  std::vector<std::pair<std::string, DocumentGeometry>> docs;
  std::vector<std::pair<std::string, alto::AltoPage>> alto_pages;
  bool all_alto = true;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Parsed& p = parsed[i];
    const std::string name = fs::path(inputs[i]).filename().string();
    if (!p.error.empty()) {
      err << "error: " << inputs[i] << ": " << p.error << "\n";
      status = static_cast<int>(p.io_error ? ExitCode::Io : ExitCode::Parse);
      if (!o.keep_going) return status;
      continue;
    }
    std::size_t warnings = 0;
    DocumentGeometry doc;
    if (auto* page = std::get_if<alto::AltoPage>(&p.value)) {
      if (page->unit == Unit::Px) {
        err << "warning: " << inputs[i] << ": pixel coordinates kept unconverted (no --dpi)\n";
        ++warnings;
      }
      alto_pages.emplace_back(name, *page);
      doc = alto::assemble_document({{name, std::move(*page)}}, {name, o.dpi});
    } else {
      auto& r = std::get<idml::IdmlResult>(p.value);
      for (const auto& w : r.warnings) err << "warning: " << inputs[i] << ": " << w << "\n";
      warnings += r.warnings.size();
      doc = std::move(r.doc);
      all_alto = false;
    }
    out << inputs[i] << ": " << doc.pages.size() << " page(s), " << doc.entity_count() << " entities, "
        << warnings << " warning(s)\n";
    docs.emplace_back(inputs[i], std::move(doc));
  }

  try {
    if (o.merge) {
      if (docs.empty()) return status ? status : static_cast<int>(ExitCode::Parse);
      const std::string merged_name = document_stem(*o.out);
      DocumentGeometry merged;
      if (all_alto) {
        merged = alto::assemble_document(std::move(alto_pages), {merged_name, o.dpi});
      } else {
        std::vector<DocumentGeometry> list;
        for (auto& [path, d] : docs) list.push_back(std::move(d));
        merged = merge_documents(list);
      }
      write_file(*o.out, write_geometry(merged));
      out << "wrote " << *o.out << ": " << merged.pages.size() << " page(s), " << merged.entity_count()
          << " entities\n";
    } else {
      for (const auto& [path, d] : docs) {
        const fs::path target = output_for(path, o.out, inputs.size() > 1, kGeometryExtension);
        write_file(target, write_geometry(d));
        out << "wrote " << target.string() << "\n";
      }
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Io);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Parse);
  }
  return status;
}

// ---------------------------------------------------------------------------
// stats

std::string fixed1(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(1) << v;
  return ss.str();
}

nlohmann::ordered_json extreme_json(const PageExtreme& e) {
  return {{"page", e.page_index}, {"number", e.number}, {"value", e.value}};
}

nlohmann::ordered_json stats_json(const std::string& file, const DocumentGeometry& doc, const StatsReport& r) {
  using nlohmann::ordered_json;
  ordered_json pages = ordered_json::array();
  for (std::size_t i = 0; i < r.per_page.size(); ++i) {
    const PageMetrics& m = r.per_page[i];
    ordered_json by_class = ordered_json::object();
    for (const auto& [code, n] : m.cardinality_by_class) by_class[std::to_string(code)] = n;
    ordered_json fill_by_class = ordered_json::object();
    for (const auto& [code, v] : m.fill_by_class_pct) fill_by_class[std::to_string(code)] = v;
    pages.push_back({{"index", i},
                     {"number", doc.pages[i].number},
                     {"cardinality", m.cardinality_total},
                     {"cardinalityByClass", by_class},
                     {"fill", m.fill_total_pct},
                     {"fillByClass", fill_by_class},
                     {"fillSum", m.fill_sum_pct},
                     {"outOfFrame", m.out_of_frame_count}});
  }
  ordered_json totals = ordered_json::object();
  for (const auto& [code, n] : r.class_totals) totals[std::to_string(code)] = n;
  ordered_json names = ordered_json::object();
  for (const auto& [code, n] : r.class_totals) {
    names[std::to_string(code)] = class_name(class_for_code(code, doc.classes), doc.classes);
  }
  return {{"file", file},
          {"sourceName", doc.source_name},
          {"sourceFormat", to_string(doc.source_format)},
          {"unit", to_string(doc.unit)},
          {"pageCount", doc.pages.size()},
          {"classNames", names},
          {"classTotals", totals},
          {"pages", pages},
          {"extremes",
           {{"maxCardinality", extreme_json(r.extremes.max_cardinality)},
            {"maxFill", extreme_json(r.extremes.max_fill)},
            {"minFill", extreme_json(r.extremes.min_fill)}}},
          {"outOfFrameTotal", r.out_of_frame_total}};
}

void stats_table(std::ostream& out, const std::string& file, const DocumentGeometry& doc, const StatsReport& r) {
  out << "document: " << file << " (source " << doc.source_name << ", " << to_string(doc.source_format) << ", "
      << doc.pages.size() << " pages)\n";
  out << std::right << std::setw(6) << "index" << "  " << std::left << std::setw(8) << "page" << std::right
      << std::setw(9) << "entities" << std::setw(7) << "text" << std::setw(8) << "raster" << std::setw(8)
      << "vector" << std::setw(7) << "other" << std::setw(8) << "fill%" << std::setw(6) << "out"
      << "  flags\n";
  auto count_of = [](const PageMetrics& m, int code) {
    const auto it = m.cardinality_by_class.find(code);
    return it == m.cardinality_by_class.end() ? std::size_t{0} : it->second;
  };
  for (std::size_t i = 0; i < r.per_page.size(); ++i) {
    const PageMetrics& m = r.per_page[i];
    const std::size_t text = count_of(m, EntityClass::kTextFrameCode);
    const std::size_t raster = count_of(m, EntityClass::kRasterImageCode);
    const std::size_t vector = count_of(m, EntityClass::kVectorGraphicCode);
    std::vector<std::string> flags;
    if (r.extremes.max_cardinality.page_index == i) flags.emplace_back("max-cardinality");
    if (r.extremes.max_fill.page_index == i) flags.emplace_back("max-fill");
    if (r.extremes.min_fill.page_index == i) flags.emplace_back("min-fill");
    std::string joined;
    for (const auto& f : flags) joined += (joined.empty() ? "" : ",") + f;
    out << std::right << std::setw(6) << i << "  " << std::left << std::setw(8) << doc.pages[i].number
        << std::right << std::setw(9) << m.cardinality_total << std::setw(7) << text << std::setw(8) << raster
        << std::setw(8) << vector << std::setw(7) << (m.cardinality_total - text - raster - vector)
        << std::setw(8) << fixed1(m.fill_total_pct) << std::setw(6) << m.out_of_frame_count << "  " << joined
        << "\n";
  }
  out << "class totals:";
  for (int code : {EntityClass::kTextFrameCode, EntityClass::kRasterImageCode, EntityClass::kVectorGraphicCode}) {
    const auto it = r.class_totals.find(code);
    out << " " << class_name(class_for_code(code)) << "=" << (it == r.class_totals.end() ? 0 : it->second);
  }
  for (const auto& [code, n] : r.class_totals) {
    if (code >= EntityClass::kFirstUserCode) {
      out << " " << class_name(class_for_code(code, doc.classes), doc.classes) << "=" << n;
    }
  }
  out << "\n";
  const auto& e = r.extremes;
  out << "max cardinality: page " << e.max_cardinality.number << " (index " << e.max_cardinality.page_index
      << ") = " << static_cast<std::size_t>(e.max_cardinality.value) << "\n";
  out << "max fill: page " << e.max_fill.number << " (index " << e.max_fill.page_index << ") = "
      << fixed1(e.max_fill.value) << "\n";
  out << "min fill: page " << e.min_fill.number << " (index " << e.min_fill.page_index << ") = "
      << fixed1(e.min_fill.value) << "\n";
  out << "out-of-frame: " << r.out_of_frame_total << "\n";
}

int cmd_stats(const std::vector<std::string>& files, bool json, std::ostream& out, std::ostream& err) {
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  bool first = true;
  for (const std::string& f : expand_inputs(files)) {
    DocumentGeometry doc;
    try {
      doc = read_geometry(read_file(f));
    } catch (const IoError& e) {
      err << "error: " << e.what() << "\n";
      return static_cast<int>(ExitCode::Io);
    } catch (const Error& e) {
      err << "error: " << f << ": " << e.what() << "\n";
      return static_cast<int>(ExitCode::Parse);
    }
    const StatsReport r = document_stats(doc);
    if (json) {
      reports.push_back(stats_json(f, doc, r));
    } else {
      if (!first) out << "\n";
      stats_table(out, f, doc, r);
    }
    first = false;
  }
  if (json) out << reports.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// scene

struct SceneOptions {
  std::vector<std::string> files;
  std::optional<std::string> out;
  bool city = false;
  std::string ribbon = "none";
  double floor_height = 40.0;
  std::optional<std::string> pdf_base;
  unsigned jobs = 0;
};

std::string substitute_name(std::string tmpl, const std::string& name) {
  const std::string key = "{name}";
  for (std::size_t at = tmpl.find(key); at != std::string::npos; at = tmpl.find(key, at + name.size())) {
    tmpl.replace(at, key.size(), name);
  }
  return tmpl;
}

int cmd_scene(const SceneOptions& o, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> files = expand_inputs(o.files);
  if (files.empty()) {
    err << "scene: no geometry files given\n";
    return static_cast<int>(ExitCode::Usage);
  }
  SceneConfig base;
  base.floor_height = o.floor_height;
  if (o.ribbon != "none") {
    RibbonSpec spec;
    spec.metric = *parse_ribbon_metric(o.ribbon);
    spec.scope = o.city ? RibbonScope::Global : RibbonScope::PerTower;
    base.ribbon = spec;
  }

  std::vector<TowerScene> towers(files.size());
  std::vector<std::string> errors(files.size());
  std::vector<bool> io_errors(files.size(), false);
  parallel_for(files.size(), o.jobs ? o.jobs : default_jobs(), [&](std::size_t i) {
    try {
      const DocumentGeometry doc = read_geometry(read_file(files[i]));
      SceneConfig cfg = base;
      const std::string stem = document_stem(files[i]);
      if (o.pdf_base) cfg.pdf_base_url = substitute_name(*o.pdf_base, stem);
      towers[i] = build_tower(doc, cfg);
      towers[i].id = stem;
    } catch (const IoError& e) {
      errors[i] = e.what();
      io_errors[i] = true;
    } catch (const std::exception& e) {
      errors[i] = files[i] + ": " + e.what();
    }
  });
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) {
      err << "error: " << errors[i] << "\n";
      return static_cast<int>(io_errors[i] ? ExitCode::Io : ExitCode::Parse);
    }
  }

  try {
    if (o.city) {
      const CityScene city = layout_city(std::move(towers), base);
      const fs::path target = o.out ? fs::path(*o.out) : fs::path("city") += kSceneExtension;
      write_file(target, emit_scene(city));
      out << "wrote " << target.string() << ": city of " << city.towers.size() << " towers, "
          << city.grid_columns << "x" << city.grid_rows << " grid\n";
    } else {
      for (std::size_t i = 0; i < files.size(); ++i) {
        const fs::path target = output_for(files[i], o.out, files.size() > 1, kSceneExtension);
        write_file(target, emit_scene(towers[i]));
        out << "wrote " << target.string() << ": " << towers[i].floors.size() << " floors, "
            << towers[i].slabs.size() << " slabs\n";
      }
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Io);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// serve

int cmd_serve(const std::string& scene_file, const std::string& host, int port,
              const std::optional<std::string>& pdf_dir, std::ostream& out, std::ostream& err) {
  ServeOptions opts;
  try {
    opts.scene_bytes = read_file(scene_file);
    (void)parse_scene(opts.scene_bytes);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Io);
  } catch (const Error& e) {
    err << "error: " << scene_file << ": " << e.what() << "\n";
    return static_cast<int>(ExitCode::Parse);
  }
  if (pdf_dir) {
    if (!fs::is_directory(*pdf_dir)) {
      err << "error: --pdf-dir " << *pdf_dir << " is not a directory\n";
      return static_cast<int>(ExitCode::Io);
    }
    opts.pdf_dir = fs::path(*pdf_dir);
  }
  opts.log = [&err](const std::string& line) { err << line << std::endl; };

  // Route SIGINT/SIGTERM to a watcher thread; the server threads inherit
  // the blocked mask.
  sigset_t signals, previous;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  ViewerServer server(std::move(opts));
  if (!server.bind(host, port)) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    err << "error: cannot listen on " << host << ":" << port << " (port busy?)\n";
    return static_cast<int>(ExitCode::Io);
  }
  out << "serving " << scene_file << " at http://" << host << ":" << server.port() << "/" << std::endl;

  std::atomic<bool> done{false};
  std::thread watcher([&] {
    const timespec tick{0, 200'000'000};
    while (!done) {
      if (sigtimedwait(&signals, nullptr, &tick) > 0) {
        server.stop();
        return;
      }
    }
  });
  server.listen();
  done = true;
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  out << "server stopped" << std::endl;
  return 0;
}

int default_port() {
  if (const char* env = std::getenv("DOCTOWERS_PORT")) {
    try {
      const int p = std::stoi(env);
      if (p > 0 && p < 65536) return p;
    } catch (const std::exception&) {
    }
  }
  return 8080;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Document Towers: ingest layouts, compute page metrics, build and serve 3D scenes", "doctowers"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Extract geometry files from ALTO or IDML inputs");
  ingest_cmd->add_option("inputs", ingest.inputs, "Input files or glob patterns")->required();
  ingest_cmd->add_option("--format", ingest.format, "Input format")
      ->check(CLI::IsMember({"auto", "alto", "idml"}));
  ingest_cmd->add_option("--dpi", ingest.dpi, "Resolution for converting ALTO pixels to points")
      ->check(CLI::PositiveNumber);
  ingest_cmd->add_flag("--merge", ingest.merge, "Write all inputs into one multi-page geometry file");
  ingest_cmd->add_option("--out", ingest.out, "Output file (or directory for several inputs)");
  ingest_cmd->add_flag("--keep-going", ingest.keep_going, "Continue after a parse error");
  ingest_cmd->add_option("--jobs", ingest.jobs, "Worker threads (default: CPU count)");
  ingest_cmd->add_flag("--include-master-spreads", ingest.include_masters, "IDML: include master page items");
  ingest_cmd->add_flag("--include-hidden-layers", ingest.include_hidden, "IDML: include hidden layers");

  std::vector<std::string> stats_files;
  bool stats_json_flag = false;
  bool stats_table_flag = false;
  auto* stats_cmd = app.add_subcommand("stats", "Per-page cardinality and fill statistics");
  stats_cmd->add_option("files", stats_files, "Geometry files")->required();
  auto* json_opt = stats_cmd->add_flag("--json", stats_json_flag, "Machine-readable output");
  stats_cmd->add_flag("--table", stats_table_flag, "Human-readable table (default)")->excludes(json_opt);

  SceneOptions scene;
  auto* scene_cmd = app.add_subcommand("scene", "Build tower or city scene files");
  scene_cmd->add_option("files", scene.files, "Geometry files");
  scene_cmd->add_option("--out", scene.out, "Output scene file (or directory for several towers)");
  scene_cmd->add_flag("--city", scene.city, "Arrange all documents into one city scene");
  scene_cmd->add_option("--ribbon", scene.ribbon, "Floor ribbon metric")
      ->check(CLI::IsMember({"none", "cardinality", "fill"}));
  scene_cmd->add_option("--floor-height", scene.floor_height, "Floor height in points")
      ->check(CLI::PositiveNumber);
  scene_cmd->add_option("--pdf-base", scene.pdf_base, "PDF URL template, {name} is the document name");
  scene_cmd->add_option("--jobs", scene.jobs, "Worker threads (default: CPU count)");

  std::string serve_file;
  std::string serve_host = "127.0.0.1";
  int serve_port = default_port();
  std::optional<std::string> pdf_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Serve a scene and the browser viewer over HTTP");
  serve_cmd->add_option("scene", serve_file, "Scene file")->required();
  serve_cmd->add_option("--port", serve_port, "TCP port (default 8080 or $DOCTOWERS_PORT)")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", serve_host, "Listen address");
  serve_cmd->add_option("--pdf-dir", pdf_dir, "Directory served under /pdf/");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("doctowers");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return static_cast<int>(ExitCode::Usage);
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, out, err);
    if (*stats_cmd) return cmd_stats(stats_files, stats_json_flag, out, err);
    if (*scene_cmd) {
      if (scene.files.empty()) {
        err << "scene: at least one geometry file is required\n";
        return static_cast<int>(ExitCode::Usage);
      }
      return cmd_scene(scene, out, err);
    }
    if (*serve_cmd) return cmd_serve(serve_file, serve_host, serve_port, pdf_dir, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Io);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Parse);
  }
  return static_cast<int>(ExitCode::Usage);
}

}  // namespace doctowers::cli
