// Command-line interface: level and semi-Clifford queries on circuit files,
// the affine-equivalence censuses, cycle-structure classification with
// persistence, the four-qubit verification, and the third-level sweep.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliffhier/affine_classify.hpp"
#include "cliffhier/circuit_io.hpp"
#include "cliffhier/gates.hpp"
#include "cliffhier/hierarchy.hpp"
#include "cliffhier/search_ch3.hpp"
#include "cliffhier/table.hpp"

namespace {

constexpr const char* kConvention = "# convention: qubit 0 = MSB of the basis-state index";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<uint32_t> parse_shape(const std::string& s) {
  if (s == "id" || s == "Id" || s == "Id.") return {};
  std::vector<uint32_t> shape;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    shape.push_back(static_cast<uint32_t>(std::stoul(part)));
  }
  if (shape.empty()) throw CLI::ValidationError("--shape", "empty shape");
  std::sort(shape.rbegin(), shape.rend());
  return shape;
}

int cmd_level(const std::string& file, uint32_t cap) {
  cliffhier::Circuit c = cliffhier::parse_circuit(read_file(file));
  auto p = cliffhier::circuit_to_permutation(c);
  if (cap == 0) cap = cliffhier::default_level_cap(c.n);
  std::fprintf(stderr, "%s\n", kConvention);
  cliffhier::LevelEngine eng;
  auto v = eng.level(cliffhier::to_monomial(p), cap);
  if (v.value)
    std::printf("Level %u\n", *v.value);
  else
    std::printf("Not in CH up to cap %u\n", v.cap);
  return 0;
}

int cmd_semiclifford(const std::string& file) {
  cliffhier::Circuit c = cliffhier::parse_circuit(read_file(file));
  auto p = cliffhier::circuit_to_permutation(c);
  std::fprintf(stderr, "%s\n", kConvention);
  bool sc = cliffhier::is_semi_clifford(cliffhier::to_monomial(p));
  std::printf("semi-Clifford: %s\n", sc ? "yes" : "no");
  return 0;
}

int cmd_classify_perms(uint32_t n) {
  std::fprintf(stderr, "%s\n", kConvention);
  auto census = cliffhier::count_ae_classes_full(n);
  cliffhier::LevelEngine eng;
  uint64_t in_ch = 0;
  for (const auto& rep : census.reps) {
    auto v = eng.level(cliffhier::to_monomial(rep), cliffhier::default_level_cap(n));
    if (v.in_ch()) ++in_ch;
  }
  std::printf("%zu classes, %llu in CH\n", census.reps.size(),
              static_cast<unsigned long long>(in_ch));
  return 0;
}

void print_cell_summary(const cliffhier::CellResult& cell) {
  std::printf("n=%u shape=%s: %zu classes, %llu in CH%s\n", cell.n,
              cliffhier::shape_label(cell.shape).c_str(), cell.classes.size(),
              static_cast<unsigned long long>(cell.in_ch_count()),
              cell.extended ? " (extended)" : "");
  for (const auto& rec : cell.classes) {
    std::string lvl = rec.level.value ? ("level " + std::to_string(*rec.level.value))
                                      : ("not in CH up to " + std::to_string(rec.level.cap));
    std::printf("  %-28s order %llu  %s%s\n", rec.notation.c_str(),
                static_cast<unsigned long long>(rec.order), lvl.c_str(),
                rec.semi_clifford ? (*rec.semi_clifford ? "  semi-Clifford" : "") : "");
  }
  if (!cell.unresolved_pairs.empty())
    std::printf("  WARNING: %zu unresolved pairs\n", cell.unresolved_pairs.size());
}

int cmd_classify_cycles(uint32_t n, const std::string& shape_str, uint32_t extend_to,
                        bool all_shapes, bool verbose) {
  std::fprintf(stderr, "%s\n", kConvention);
  std::vector<std::vector<uint32_t>> shapes;
  if (all_shapes)
    shapes = cliffhier::table3_shapes();
  else
    shapes.push_back(parse_shape(shape_str));
  cliffhier::ClassifyOptions opts;
  opts.verbose = verbose;
  for (const auto& shape : shapes) {
    uint32_t elems = 0;
    for (uint32_t k : shape) elems += k;
    if (elems > (1u << n)) continue;
    if (verbose) std::fprintf(stderr, "classifying n=%u shape=%s\n", n,
                              cliffhier::shape_label(shape).c_str());
    auto cell = cliffhier::classify_cycle_structures(n, shape, opts);
    cliffhier::save_cell(cell);
    print_cell_summary(cell);
    auto prev = cell;
    for (uint32_t m = n + 1; m <= extend_to; ++m) {
      auto ext = cliffhier::extend_classification(prev, opts);
      cliffhier::save_cell(ext);
      print_cell_summary(ext);
      prev = ext;
    }
  }
  return 0;
}

int cmd_verify_4q() {
  std::fprintf(stderr, "%s\n", kConvention);
  cliffhier::LevelEngine eng;
  auto rep = cliffhier::verify_4q_representatives(eng);
  const char* names[5] = {"identity", "CCCX", "CCX(bottom)", "CCCX;CCX", "CCX;CCX"};
  for (size_t i = 0; i < rep.levels.size(); ++i) {
    std::printf("rep %zu (%s): level %s\n", i + 1, names[i],
                rep.levels[i].value ? std::to_string(*rep.levels[i].value).c_str() : "-");
  }
  std::printf("levels %s, invariant profiles %s\n", rep.levels_ok ? "match" : "MISMATCH",
              rep.distinct_ok ? "pairwise distinct" : "NOT DISTINCT");
  std::printf("%s\n", rep.pass() ? "PASS" : "FAIL");
  return rep.pass() ? 0 : 1;
}

int cmd_sweep(bool full_space, bool no_filters, const std::string& expect, uint32_t threads,
              bool as_json) {
  cliffhier::SweepOptions opts;
  opts.full_space = full_space;
  opts.use_filters = !no_filters;
  opts.threads = threads;
  std::fprintf(stderr, "%s\n", kConvention);
  auto report = cliffhier::run_sweep({cliffhier::ccx_bottom_perm()}, opts);
  if (as_json) {
    std::printf("%s\n", cliffhier::sweep_report_to_json(report).dump(2).c_str());
  } else {
    std::printf("space %s, %s\n", report.space.c_str(),
                report.filtered ? "filtered" : "unfiltered");
    std::printf("classes: %llu total, %llu checked\n",
                static_cast<unsigned long long>(report.classes_total),
                static_cast<unsigned long long>(report.classes_checked));
    for (auto& [k, v] : report.excluded_by)
      std::printf("excluded by %s: %llu\n", k.c_str(), static_cast<unsigned long long>(v));
    std::printf("survivors (third level, semi-Clifford): %llu\n",
                static_cast<unsigned long long>(report.survivors_semi_clifford));
    std::printf("verdict: %s\n", report.verdict.c_str());
  }
  if (!expect.empty()) {
    bool ok = (expect == "all-semi-clifford") == report.all_semi_clifford();
    return ok ? 0 : 1;
  }
  return 0;
}

int cmd_diag_order(uint32_t n, uint32_t k) {
  auto p = cliffhier::diag_group_order(n, k);
  std::printf("%s\n", p.decimal().c_str());
  return 0;
}

int cmd_table(uint32_t which, const std::string& format) {
  if (which == 2) {
    std::fputs(cliffhier::render_table2(format).c_str(), stdout);
    return 0;
  }
  auto t = cliffhier::build_table3();
  if (!t.missing.empty()) {
    std::fprintf(stderr, "missing class databases; run:\n");
    for (auto& cmd : t.missing) std::fprintf(stderr, "  %s\n", cmd.c_str());
    return 4;
  }
  std::fputs(cliffhier::render_table3(t, format).c_str(), stdout);
  return t.has_unresolved ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification of qubit permutation gates in the Clifford hierarchy"};
  app.require_subcommand(1);

  std::string file, shape_str = "id", expect, format = "md";
  uint32_t cap = 0, qubits = 3, level_k = 1, extend_to = 0, which = 3, threads = 1;
  bool full_space = false, no_filters = false, all_shapes = false, verbose = false,
       as_json = false;

  auto* lvl = app.add_subcommand("level", "Hierarchy level of a circuit file");
  lvl->add_option("file", file, "circuit file")->required();
  lvl->add_option("--cap", cap, "recursion cap (default qubits+2)");

  auto* sc = app.add_subcommand("semiclifford", "Semi-Clifford test for a circuit file");
  sc->add_option("file", file, "circuit file")->required();

  auto* cp = app.add_subcommand("classify-perms", "Affine-equivalence census of permutations");
  cp->add_option("--qubits", qubits, "qubit count (<= 3)")->required();

  auto* cc = app.add_subcommand("classify-cycles", "Classify cycle structures of a shape");
  cc->add_option("--qubits", qubits, "qubit count (<= 4 direct)")->required();
  cc->add_option("--shape", shape_str, "cycle shape, e.g. 4,2 (or 'id')");
  cc->add_option("--extend-to", extend_to, "extend the classification up to this qubit count");
  cc->add_flag("--all-shapes", all_shapes, "run every shape with at most 6 elements");
  cc->add_flag("--verbose", verbose, "progress on stderr");

  auto* v4 = app.add_subcommand("verify-4q", "Verify the five 4-qubit class representatives");

  auto* sw = app.add_subcommand("sweep-ch3", "Third-level sweep over diagonal classes");
  sw->add_flag("--full-space", full_space, "sweep the unreduced 2^20 cube");
  sw->add_flag("--no-filters", no_filters, "check every class, no exclusions");
  sw->add_option("--expect", expect, "expected verdict: all-semi-clifford");
  sw->add_option("--threads", threads, "worker threads");
  sw->add_flag("--json", as_json, "emit the report as JSON");

  auto* dg = app.add_subcommand("diag-order", "Order of the diagonal group at a level");
  dg->add_option("--qubits", qubits, "qubit count")->required();
  dg->add_option("--level", level_k, "hierarchy level")->required();

  auto* tb = app.add_subcommand("table", "Emit a census table");
  tb->add_option("--which", which, "2 or 3")->required();
  tb->add_option("--format", format, "csv|json|md");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lvl->parsed()) return cmd_level(file, cap);
    if (sc->parsed()) return cmd_semiclifford(file);
    if (cp->parsed()) return cmd_classify_perms(qubits);
    if (cc->parsed()) return cmd_classify_cycles(qubits, shape_str, extend_to, all_shapes, verbose);
    if (v4->parsed()) return cmd_verify_4q();
    if (sw->parsed()) return cmd_sweep(full_space, no_filters, expect, threads, as_json);
    if (dg->parsed()) return cmd_diag_order(qubits, level_k);
    if (tb->parsed()) return cmd_table(which, format);
  } catch (const cliffhier::CircuitParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const cliffhier::guard_error& e) {
    std::fprintf(stderr, "guard: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
