#pragma once

// Persistence of classification cells as JSON documents and emission of the
// census tables in csv/json/markdown.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliffhier/affine_classify.hpp"
#include "cliffhier/search_ch3.hpp"

namespace cliffhier {

using nlohmann::json;

inline std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("CLIFFHIER_CACHE_DIR")) return std::filesystem::path(env);
  return std::filesystem::path("cliffhier-cache");
}

inline std::string shape_tag(const std::vector<uint32_t>& shape) {
  if (shape.empty()) return "id";
  std::string s;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(shape[i]);
  }
  return s;
}

inline std::string shape_label(const std::vector<uint32_t>& shape) {
  if (shape.empty()) return "Id.";
  std::string s = "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

inline std::filesystem::path cell_path(uint32_t n, const std::vector<uint32_t>& shape,
                                       bool extended) {
  std::string name = "cycles-n" + std::to_string(n) + "-shape" + shape_tag(shape);
  if (extended) name += "-extended";
  return cache_dir() / (name + ".json");
}

inline json level_to_json(const LevelVerdict& v) {
  json j;
  if (v.value) {
    j["level"] = *v.value;
  } else {
    j["level"] = nullptr;
    j["not_in_ch_up_to"] = v.cap;
  }
  return j;
}

inline LevelVerdict level_from_json(const json& j) {
  if (!j.at("level").is_null()) return LevelVerdict::level(j.at("level").get<uint32_t>());
  return LevelVerdict::not_in_ch(j.at("not_in_ch_up_to").get<uint32_t>());
}

inline json spectrum_to_json(const std::map<uint32_t, uint64_t>& spec) {
  json j = json::object();
  for (auto& [k, v] : spec) j[std::to_string(k)] = v;
  return j;
}

inline std::map<uint32_t, uint64_t> spectrum_from_json(const json& j) {
  std::map<uint32_t, uint64_t> m;
  for (auto it = j.begin(); it != j.end(); ++it)
    m[static_cast<uint32_t>(std::stoul(it.key()))] = it.value().get<uint64_t>();
  return m;
}

inline json cell_to_json(const CellResult& cell) {
  json j;
  j["convention"] = "qubit 0 = MSB of the basis-state index";
  j["n"] = cell.n;
  j["shape"] = cell.shape;
  // two-sided affine equivalence restricted to the shape; coincides with
  // conjugation from five qubits up
  j["action"] = "two-sided";
  j["extended"] = cell.extended;
  j["total_structures"] = cell.total_structures;
  j["classes"] = json::array();
  for (const auto& rec : cell.classes) {
    json c;
    json cycles = json::array();
    for (const auto& cyc : rec.representative.cycles) cycles.push_back(cyc);
    c["representative_cycles"] = cycles;
    c["notation"] = rec.notation;
    c["order"] = rec.order;
    c["orbit_size"] = rec.orbit_size;
    c["level"] = level_to_json(rec.level);
    c["in_ch"] = rec.in_ch;
    if (rec.semi_clifford)
      c["semi_clifford"] = *rec.semi_clifford;
    else
      c["semi_clifford"] = nullptr;
    c["ddt_spectrum"] = spectrum_to_json(rec.profile.ddt_spectrum);
    c["lat_spectrum"] = spectrum_to_json(rec.profile.lat_spectrum);
    j["classes"].push_back(c);
  }
  json unresolved = json::array();
  for (auto& [x, y] : cell.unresolved_pairs) unresolved.push_back(json::array({x, y}));
  j["unresolved_pairs"] = unresolved;
  return j;
}

inline CellResult cell_from_json(const json& j) {
  CellResult cell;
  cell.n = j.at("n").get<uint32_t>();
  cell.shape = j.at("shape").get<std::vector<uint32_t>>();
  cell.extended = j.at("extended").get<bool>();
  cell.total_structures = j.at("total_structures").get<uint64_t>();
  for (const auto& c : j.at("classes")) {
    ClassRecord rec;
    rec.representative.n = cell.n;
    for (const auto& cyc : c.at("representative_cycles"))
      rec.representative.cycles.push_back(cyc.get<std::vector<uint32_t>>());
    rec.notation = c.at("notation").get<std::string>();
    rec.order = c.at("order").get<uint64_t>();
    rec.orbit_size = c.at("orbit_size").get<uint64_t>();
    rec.level = level_from_json(c.at("level"));
    rec.in_ch = c.at("in_ch").get<bool>();
    if (!c.at("semi_clifford").is_null()) rec.semi_clifford = c.at("semi_clifford").get<bool>();
    rec.profile.ddt_spectrum = spectrum_from_json(c.at("ddt_spectrum"));
    rec.profile.lat_spectrum = spectrum_from_json(c.at("lat_spectrum"));
    cell.classes.push_back(std::move(rec));
  }
  for (const auto& p : j.at("unresolved_pairs"))
    cell.unresolved_pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  return cell;
}

inline void save_cell(const CellResult& cell) {
  std::filesystem::create_directories(cache_dir());
  std::ofstream out(cell_path(cell.n, cell.shape, cell.extended));
  out << cell_to_json(cell).dump(2) << "\n";
}

inline std::optional<CellResult> load_cell(uint32_t n, const std::vector<uint32_t>& shape,
                                           bool extended) {
  std::ifstream in(cell_path(n, shape, extended));
  if (!in) return std::nullopt;
  json j = json::parse(in);
  return cell_from_json(j);
}

/// Column order of the cycle census table.
inline std::vector<std::vector<uint32_t>> table3_shapes() {
  return {{}, {2}, {3}, {4}, {2, 2}, {5}, {3, 2}, {6}, {4, 2}, {3, 3}, {2, 2, 2}};
}

struct TableCell {
  bool applicable = false;  // false renders as "0": no structures fit
  uint64_t in_ch = 0, total = 0;

  std::string text() const {
    if (!applicable || total == 0) return "0";
    return std::to_string(in_ch) + "/" + std::to_string(total);
  }
};

struct Table3 {
  std::vector<std::string> row_labels;  // "n=1".."n=4", "n>=5"
  std::vector<std::vector<TableCell>> cells;
  std::vector<std::string> missing;  // human-readable commands to run
  bool has_unresolved = false;
};

/// Assembles the cycle census from the cache: rows n=1..4 from direct
/// enumeration, the n>=5 row from the stored n=5 extension.
inline Table3 build_table3() {
  Table3 t;
  auto shapes = table3_shapes();
  for (uint32_t n = 1; n <= 5; ++n) {
    t.row_labels.push_back(n < 5 ? "n=" + std::to_string(n) : "n>=5");
    std::vector<TableCell> row;
    for (const auto& shape : shapes) {
      uint32_t total_elems = 0;
      for (uint32_t k : shape) total_elems += k;
      TableCell cell;
      if (total_elems > (1u << n)) {
        row.push_back(cell);  // impossible: renders "0"
        continue;
      }
      bool extended = n >= 5;
      auto loaded = load_cell(n, shape, extended);
      if (!loaded) {
        std::string cmd = "cliffhier classify-cycles --qubits " +
                          std::to_string(extended ? n - 1 : n) + " --shape " +
                          (shape.empty() ? std::string("id") : shape_tag(shape));
        if (extended) cmd += " --extend-to 5";
        t.missing.push_back(cmd);
        row.push_back(cell);
        continue;
      }
      cell.applicable = true;
      cell.total = loaded->classes.size();
      cell.in_ch = loaded->in_ch_count();
      if (!loaded->unresolved_pairs.empty()) t.has_unresolved = true;
      row.push_back(cell);
    }
    t.cells.push_back(std::move(row));
  }
  return t;
}

inline std::string render_table3(const Table3& t, const std::string& format) {
  auto shapes = table3_shapes();
  if (format == "json") {
    json j;
    j["convention"] = "qubit 0 = MSB of the basis-state index";
    j["columns"] = json::array();
    for (auto& s : shapes) j["columns"].push_back(shape_label(s));
    j["rows"] = json::array();
    for (size_t r = 0; r < t.cells.size(); ++r) {
      json row;
      row["label"] = t.row_labels[r];
      row["cells"] = json::array();
      for (auto& c : t.cells[r]) row["cells"].push_back(c.text());
      j["rows"].push_back(row);
    }
    j["unresolved"] = t.has_unresolved;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == "csv") {
    out << "n";
    for (auto& s : shapes) out << "," << shape_label(s);
    out << "\n";
    for (size_t r = 0; r < t.cells.size(); ++r) {
      out << t.row_labels[r];
      for (auto& c : t.cells[r]) out << "," << c.text();
      out << "\n";
    }
    return out.str();
  }
  // markdown
  out << "| n |";
  for (auto& s : shapes) out << " " << shape_label(s) << " |";
  out << "\n|---|";
  for (size_t i = 0; i < shapes.size(); ++i) out << "---|";
  out << "\n";
  for (size_t r = 0; r < t.cells.size(); ++r) {
    out << "| " << t.row_labels[r] << " |";
    for (auto& c : t.cells[r]) out << " " << c.text() << " |";
    out << "\n";
  }
  return out.str();
}

/// The affine-equivalence census over full permutations (computed rows only).
inline std::string render_table2(const std::string& format) {
  std::vector<uint64_t> totals = {2, 24, 40320};
  std::vector<uint64_t> classes;
  for (uint32_t n = 1; n <= 3; ++n) classes.push_back(count_ae_classes_full(n).reps.size());
  if (format == "json") {
    json j;
    j["bits"] = {1, 2, 3};
    j["ae_classes"] = classes;
    j["permutations"] = totals;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == "csv") {
    out << "bits,ae_classes,permutations\n";
    for (size_t i = 0; i < classes.size(); ++i)
      out << (i + 1) << "," << classes[i] << "," << totals[i] << "\n";
    return out.str();
  }
  out << "| bits | AE classes | permutations |\n|---|---|---|\n";
  for (size_t i = 0; i < classes.size(); ++i)
    out << "| " << (i + 1) << " | " << classes[i] << " | " << totals[i] << " |\n";
  return out.str();
}

inline json sweep_report_to_json(const SweepReport& r) {
  json j;
  j["convention"] = "qubit 0 = MSB of the basis-state index";
  j["space"] = r.space;
  j["filtered"] = r.filtered;
  j["classes_total"] = r.classes_total;
  j["classes_checked"] = r.classes_checked;
  j["excluded_by"] = json::object();
  for (auto& [k, v] : r.excluded_by) j["excluded_by"][k] = v;
  j["survivors_semi_clifford"] = r.survivors_semi_clifford;
  j["offenders"] = r.offenders;
  j["verdict"] = r.verdict;
  return j;
}

}  // namespace cliffhier
