#pragma once

// Diagonal-equivalence-class sweep certifying that every third-level
// 4-qubit gate built from the CCX permutation class and a hierarchy
// diagonal is semi-Clifford. Classes are points of a small parameter cube;
// the per-class test conjugates every X string through pi*d.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cliffhier/gates.hpp"
#include "cliffhier/hierarchy.hpp"

namespace cliffhier {

/// Reduced parameter cube: four S-power exponents on the three-control /
/// two-control phase gates targeting the bottom wire, three controlled-S
/// bits, one T bit. 4^4 * 2^4 = 4096 points.
struct DiagClass {
  std::array<uint32_t, 4> a{};  // mod 4
  std::array<uint32_t, 3> b{};  // mod 2
  uint32_t c = 0;               // mod 2

  static constexpr uint64_t space_size() { return 4096; }

  static DiagClass from_index(uint64_t idx) {
    DiagClass dc;
    for (auto& v : dc.a) {
      v = idx & 3u;
      idx >>= 2;
    }
    for (auto& v : dc.b) {
      v = idx & 1u;
      idx >>= 1;
    }
    dc.c = idx & 1u;
    return dc;
  }

  uint64_t index() const {
    uint64_t idx = c;
    for (size_t i = b.size(); i-- > 0;) idx = (idx << 1) | b[i];
    for (size_t i = a.size(); i-- > 0;) idx = (idx << 2) | a[i];
    return idx;
  }

  bool all_zero() const { return a == std::array<uint32_t, 4>{} && b == std::array<uint32_t, 3>{} && c == 0; }

  DiagClass inverse_class() const {
    DiagClass dc = *this;
    for (auto& v : dc.a) v = (4 - v) & 3u;
    return dc;  // b, c are involutions up to diagonal Cliffords
  }
};

/// Full (unreduced) parameter cube with 2^20 points.
struct DiagClassFull {
  std::array<uint32_t, 5> a{};  // mod 4
  std::array<uint32_t, 6> b{};  // mod 2
  std::array<uint32_t, 4> c{};  // mod 2

  static constexpr uint64_t space_size() { return uint64_t{1} << 20; }

  static DiagClassFull from_index(uint64_t idx) {
    DiagClassFull dc;
    for (auto& v : dc.a) {
      v = idx & 3u;
      idx >>= 2;
    }
    for (auto& v : dc.b) {
      v = idx & 1u;
      idx >>= 1;
    }
    for (auto& v : dc.c) {
      v = idx & 1u;
      idx >>= 1;
    }
    return dc;
  }

  /// True when no factor touches any wire but the bottom one as target
  /// support, i.e. the point also lies in the reduced cube.
  bool bottom_target_only() const {
    return a[1] == 0 && b[0] == 0 && b[1] == 0 && b[3] == 0 && c[0] == 0 && c[1] == 0 && c[2] == 0;
  }

  DiagClass reduced() const {
    DiagClass dc;
    dc.a = {a[0], a[2], a[3], a[4]};
    dc.b = {b[2], b[4], b[5]};
    dc.c = c[3];
    return dc;
  }
};

namespace detail {
inline uint32_t qbit(uint32_t j, uint32_t q, uint32_t n) { return (j >> (n - 1 - q)) & 1u; }
}

/// The 16-entry diagonal of a reduced-cube point; phase numerators over
/// denominator 8.
inline DiagonalGate build_diagonal(const DiagClass& dc) {
  for (uint32_t v : dc.a)
    if (v > 3) throw std::invalid_argument("build_diagonal: a out of range");
  for (uint32_t v : dc.b)
    if (v > 1) throw std::invalid_argument("build_diagonal: b out of range");
  if (dc.c > 1) throw std::invalid_argument("build_diagonal: c out of range");
  std::vector<uint32_t> num(16, 0);
  for (uint32_t j = 0; j < 16; ++j) {
    uint32_t q0 = detail::qbit(j, 0, 4), q1 = detail::qbit(j, 1, 4);
    uint32_t q2 = detail::qbit(j, 2, 4), q3 = detail::qbit(j, 3, 4);
    uint32_t s = dc.a[0] * (q0 & q1 & q2 & q3) + dc.a[1] * (q0 & q1 & q3) +
                 dc.a[2] * (q0 & q2 & q3) + dc.a[3] * (q1 & q2 & q3) + dc.b[0] * (q0 & q3) +
                 dc.b[1] * (q1 & q3) + dc.b[2] * (q2 & q3);
    num[j] = (2 * s + dc.c * q3) & 7u;
  }
  return DiagonalGate::from_phases(4, std::move(num), 3);
}

inline DiagonalGate build_diagonal(const DiagClassFull& dc) {
  std::vector<uint32_t> num(16, 0);
  for (uint32_t j = 0; j < 16; ++j) {
    uint32_t q0 = detail::qbit(j, 0, 4), q1 = detail::qbit(j, 1, 4);
    uint32_t q2 = detail::qbit(j, 2, 4), q3 = detail::qbit(j, 3, 4);
    uint32_t s = dc.a[0] * (q0 & q1 & q2 & q3) + dc.a[1] * (q0 & q1 & q2) +
                 dc.a[2] * (q0 & q1 & q3) + dc.a[3] * (q0 & q2 & q3) + dc.a[4] * (q1 & q2 & q3) +
                 dc.b[0] * (q0 & q1) + dc.b[1] * (q0 & q2) + dc.b[2] * (q0 & q3) +
                 dc.b[3] * (q1 & q2) + dc.b[4] * (q1 & q3) + dc.b[5] * (q2 & q3);
    uint32_t t = dc.c[0] * q0 + dc.c[1] * q1 + dc.c[2] * q2 + dc.c[3] * q3;
    num[j] = (2 * s + t) & 7u;
  }
  return DiagonalGate::from_phases(4, std::move(num), 3);
}

/// The three-control X on the bottom wire with the top wire bare: the single
/// third-level permutation class at n = 4.
inline PermutationGate ccx_bottom_perm() {
  Circuit c{4, {CircuitGate(3, {{1, true}, {2, true}})}};
  return circuit_to_permutation(c);
}

/// Looks for an X string making X d X d^{-1} a non-Clifford diagonal (some
/// gauge-normalized entry is not a 4th root of unity). Such a d cannot sit
/// at the third level next to any permutation.
inline std::optional<uint32_t> spectral_obstruction(const DiagonalGate& d) {
  uint32_t m = d.log_denom();
  if (m < 3) return std::nullopt;
  const auto& num = d.op().num;
  uint32_t dim = static_cast<uint32_t>(num.size());
  uint32_t mk = d.op().mask();
  uint32_t low = (1u << (m - 2)) - 1u;  // bits below the 4th-root grid
  for (uint32_t x = 1; x < dim; ++x) {
    uint32_t r0 = (num[x] - num[0]) & mk;
    for (uint32_t j = 1; j < dim; ++j) {
      uint32_t r = (num[j ^ x] - num[j]) & mk;
      if (((r - r0) & mk & low) != 0) return x;
    }
  }
  return std::nullopt;
}

struct Exclusion {
  std::string reason;
};

/// First applicable exclusion for a reduced-cube point against the bottom
/// CCX permutation, or nullopt when the point must be swept.
inline std::optional<Exclusion> exclusion_filters(const DiagClass& dc, const PermutationGate&) {
  if (dc.all_zero()) return Exclusion{"identity"};
  if (spectral_obstruction(build_diagonal(dc))) return Exclusion{"spectral"};
  DiagClass ccz;
  ccz.a[3] = 2;
  if (dc.a == ccz.a && dc.b == ccz.b && dc.c == ccz.c) return Exclusion{"ccz-product"};
  if (dc.a[0] == 0 && dc.a[1] == 0 && dc.a[2] == 0 && dc.b[0] == 0)
    return Exclusion{"support-3q"};  // support confined to the permutation's three wires
  DiagClass inv = dc.inverse_class();
  if (inv.index() < dc.index()) return Exclusion{"inverse-dedup"};
  return std::nullopt;
}

/// One class test of the sweep: pi*d sits at the third level iff
/// pi X d X d^{-1} pi^{-1} is Clifford for every X string. X d X d^{-1} is
/// the diagonal with entries num[j^x] - num[j]; conjugation by pi permutes
/// the entries.
inline bool pi_d_in_ch3(const PermutationGate& pi, const DiagonalGate& d) {
  uint32_t dim = static_cast<uint32_t>(pi.dim());
  const auto& num = d.op().num;
  MonomialOperator v = MonomialOperator::identity(pi.n);
  v.log_denom = d.log_denom();
  uint32_t mk = v.mask();
  for (uint32_t x = 1; x < dim; ++x) {
    for (uint32_t j = 0; j < dim; ++j) v.num[pi.table[j]] = (num[j ^ x] - num[j]) & mk;
    if (!is_clifford(v)) return false;
  }
  return true;
}

struct SweepReport {
  std::string space;  // "reduced" or "full"
  bool filtered = true;
  uint64_t classes_total = 0;
  uint64_t classes_checked = 0;
  std::map<std::string, uint64_t> excluded_by;
  uint64_t survivors_semi_clifford = 0;
  std::vector<uint64_t> offenders;  // class indices in the hierarchy but not semi-Clifford
  std::string verdict;

  bool all_semi_clifford() const { return verdict == "all semi-Clifford"; }
};

struct SweepOptions {
  bool use_filters = true;
  bool full_space = false;
  uint32_t threads = 1;
  bool verbose = false;
};

/// Checks every unexcluded class; survivors of the X-string loop are
/// confirmed semi-Clifford. Deterministic: partial results merge in class
/// index order.
inline SweepReport run_sweep(const std::vector<PermutationGate>& pi_reps,
                              const SweepOptions& opts = {}) {
  SweepReport report;
  report.space = opts.full_space ? "full" : "reduced";
  report.filtered = opts.use_filters && !opts.full_space;
  report.classes_total = opts.full_space ? DiagClassFull::space_size() : DiagClass::space_size();

  struct Partial {
    uint64_t checked = 0, survivors = 0;
    std::map<std::string, uint64_t> excluded;
    std::vector<uint64_t> offenders;
  };

  auto run_range = [&](uint64_t begin, uint64_t end, Partial& out) {
    for (const auto& pi : pi_reps) {
      MonomialOperator pi_mon = to_monomial(pi);
      for (uint64_t idx = begin; idx < end; ++idx) {
        DiagonalGate d = opts.full_space ? build_diagonal(DiagClassFull::from_index(idx))
                                         : build_diagonal(DiagClass::from_index(idx));
        if (opts.use_filters && !opts.full_space) {
          auto ex = exclusion_filters(DiagClass::from_index(idx), pi);
          if (ex) {
            ++out.excluded[ex->reason];
            continue;
          }
        }
        ++out.checked;
        if (!pi_d_in_ch3(pi, d)) continue;
        // survivor: in the third level, must be semi-Clifford
        MonomialOperator g = compose(pi_mon, d.op());
        if (is_semi_clifford(g))
          ++out.survivors;
        else
          out.offenders.push_back(idx);
      }
    }
  };

  uint64_t total = report.classes_total;
  uint32_t nthreads = std::max(1u, opts.threads);
  std::vector<Partial> parts(nthreads);
  if (nthreads == 1) {
    run_range(0, total, parts[0]);
  } else {
    std::vector<std::thread> workers;
    uint64_t chunk = (total + nthreads - 1) / nthreads;
    for (uint32_t t = 0; t < nthreads; ++t) {
      uint64_t b = t * chunk, e = std::min(total, b + chunk);
      workers.emplace_back([&, b, e, t] { run_range(b, e, parts[t]); });
    }
    for (auto& w : workers) w.join();
  }
  for (const auto& p : parts) {
    report.classes_checked += p.checked;
    report.survivors_semi_clifford += p.survivors;
    for (auto& [k, v] : p.excluded) report.excluded_by[k] += v;
    report.offenders.insert(report.offenders.end(), p.offenders.begin(), p.offenders.end());
  }
  report.verdict = report.offenders.empty() ? "all semi-Clifford" : "non-semi-Clifford gate found";
  return report;
}

}  // namespace cliffhier
