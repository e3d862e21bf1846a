#pragma once

// Affine-equivalence machinery: two-sided orbit enumeration for full
// permutations (n <= 3), invariant profiles (DDT/LAT spectra), and
// cycle-structure classification under affine conjugation, including the
// control-extension step that makes the counts qubit-independent.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "cliffhier/gates.hpp"
#include "cliffhier/hierarchy.hpp"

namespace cliffhier {

// ---- affine permutations -------------------------------------------------

/// The n(n-1) CNOT permutations followed by the n X permutations.
inline std::vector<PermutationGate> affine_generators(uint32_t n) {
  std::vector<PermutationGate> gens;
  for (uint32_t c = 0; c < n; ++c)
    for (uint32_t t = 0; t < n; ++t) {
      if (c == t) continue;
      PermutationGate g = PermutationGate::identity(n);
      for (uint32_t s = 0; s < g.dim(); ++s) {
        bool cb = (s >> (n - 1 - c)) & 1u;
        g.table[s] = cb ? (s ^ (1u << (n - 1 - t))) : s;
      }
      gens.push_back(std::move(g));
    }
  for (uint32_t i = 0; i < n; ++i) {
    PermutationGate g = PermutationGate::identity(n);
    for (uint32_t s = 0; s < g.dim(); ++s) g.table[s] = s ^ (1u << (n - 1 - i));
    gens.push_back(std::move(g));
  }
  return gens;
}

inline PermutationGate affine_to_permutation(const AffineMap& f) {
  uint32_t n = f.dim();
  PermutationGate p = PermutationGate::identity(n);
  for (uint32_t s = 0; s < p.dim(); ++s)
    p.table[s] = static_cast<uint32_t>(f.apply(BitVec(n, s)).word);
  return p;
}

// ---- two-sided census (n <= 3) --------------------------------------------

struct AeCensus {
  uint64_t total = 0;
  std::vector<PermutationGate> reps;       // lexicographically least member per class
  std::vector<uint64_t> class_sizes;
};

/// Connected components of all 2^n! permutations under left/right
/// multiplication by affine generators.
inline AeCensus count_ae_classes_full(uint32_t n) {
  if (n < 1 || n > 3) throw guard_error("count_ae_classes_full: only n <= 3 is enumerable");
  uint32_t d = 1u << n;
  auto pack = [n](const std::vector<uint32_t>& t) {
    uint64_t k = 0;
    for (uint32_t i = 0; i < t.size(); ++i) k |= uint64_t{t[i]} << (n * i);
    return k;
  };
  auto gens = affine_generators(n);
  AeCensus census;
  std::unordered_set<uint64_t> visited;
  std::vector<uint32_t> table(d);
  for (uint32_t i = 0; i < d; ++i) table[i] = i;
  do {
    ++census.total;
    uint64_t key = pack(table);
    if (visited.count(key)) continue;
    PermutationGate rep{n, table};
    uint64_t size = 0;
    std::deque<std::vector<uint32_t>> queue{table};
    visited.insert(key);
    while (!queue.empty()) {
      auto cur = std::move(queue.front());
      queue.pop_front();
      ++size;
      std::vector<uint32_t> nb(d);
      for (const auto& g : gens) {
        for (uint32_t j = 0; j < d; ++j) nb[j] = g.table[cur[j]];
        if (visited.insert(pack(nb)).second) queue.push_back(nb);
        for (uint32_t j = 0; j < d; ++j) nb[j] = cur[g.table[j]];
        if (visited.insert(pack(nb)).second) queue.push_back(nb);
      }
    }
    census.reps.push_back(std::move(rep));
    census.class_sizes.push_back(size);
  } while (std::next_permutation(table.begin(), table.end()));
  return census;
}

// ---- invariant profiles ----------------------------------------------------

/// DDT and LAT spectra are invariant under two-sided affine equivalence;
/// the cycle type only under conjugation, so it is opt-in.
struct AEInvariantProfile {
  std::map<uint32_t, uint64_t> ddt_spectrum;  // entry value -> multiplicity (rows a != 0)
  std::map<uint32_t, uint64_t> lat_spectrum;  // |Walsh| -> multiplicity (columns b != 0)
  std::vector<uint32_t> cycle_type;           // conjugation-only; empty when unused

  bool operator==(const AEInvariantProfile&) const = default;
};

inline AEInvariantProfile ae_profile(const PermutationGate& p, bool with_cycle_type = false) {
  size_t d = p.dim();
  AEInvariantProfile prof;
  std::vector<uint32_t> row(d);
  for (size_t a = 1; a < d; ++a) {
    std::fill(row.begin(), row.end(), 0);
    for (size_t x = 0; x < d; ++x) ++row[p.table[x ^ a] ^ p.table[x]];
    for (uint32_t v : row) ++prof.ddt_spectrum[v];
  }
  std::vector<int32_t> f(d);
  for (size_t b = 1; b < d; ++b) {
    for (size_t x = 0; x < d; ++x) f[x] = parity64(b & p.table[x]) ? -1 : 1;
    for (size_t h = 1; h < d; h <<= 1)
      for (size_t i = 0; i < d; i += h << 1)
        for (size_t j = i; j < i + h; ++j) {
          int32_t u = f[j], v = f[j + h];
          f[j] = u + v;
          f[j + h] = u - v;
        }
    for (int32_t v : f) ++prof.lat_spectrum[static_cast<uint32_t>(v < 0 ? -v : v)];
  }
  if (with_cycle_type) prof.cycle_type = cycle_type(p);
  return prof;
}

// ---- cycle-structure classification ----------------------------------------

namespace detail {

// Fixed-size cycle-structure value used inside orbit search: at most six
// columns, at most three cycles, states below 64.
struct SmallCycles {
  uint8_t ncyc = 0;
  uint8_t len[3] = {0, 0, 0};
  uint8_t st[6] = {0, 0, 0, 0, 0, 0};

  void canonicalize() {
    uint8_t off = 0;
    struct Cyc {
      uint8_t lead, len, elems[6];
    } cyc[3];
    for (uint8_t c = 0; c < ncyc; ++c) {
      uint8_t L = len[c];
      uint8_t best = 0;
      for (uint8_t i = 1; i < L; ++i)
        if (st[off + i] > st[off + best]) best = i;
      cyc[c].len = L;
      for (uint8_t i = 0; i < L; ++i) cyc[c].elems[i] = st[off + (best + i) % L];
      cyc[c].lead = cyc[c].elems[0];
      off += L;
    }
    std::sort(cyc, cyc + ncyc, [](const Cyc& a, const Cyc& b) { return a.lead > b.lead; });
    off = 0;
    for (uint8_t c = 0; c < ncyc; ++c) {
      len[c] = cyc[c].len;
      for (uint8_t i = 0; i < cyc[c].len; ++i) st[off + i] = cyc[c].elems[i];
      off += cyc[c].len;
    }
  }

  uint64_t encode() const {
    uint64_t k = ncyc;
    for (int c = 0; c < 3; ++c) k |= uint64_t{len[c]} << (2 + 3 * c);
    for (int i = 0; i < 6; ++i) k |= uint64_t{st[i]} << (11 + 6 * i);
    return k;
  }

  static SmallCycles decode(uint64_t key) {
    SmallCycles s;
    s.ncyc = static_cast<uint8_t>(key & 3u);
    for (int c = 0; c < 3; ++c) s.len[c] = static_cast<uint8_t>((key >> (2 + 3 * c)) & 7u);
    for (int i = 0; i < 6; ++i) s.st[i] = static_cast<uint8_t>((key >> (11 + 6 * i)) & 63u);
    return s;
  }

  static SmallCycles from(const CycleStructure& cs) {
    SmallCycles s;
    s.ncyc = static_cast<uint8_t>(cs.cycles.size());
    uint8_t off = 0;
    for (uint8_t c = 0; c < s.ncyc; ++c) {
      s.len[c] = static_cast<uint8_t>(cs.cycles[c].size());
      for (uint32_t v : cs.cycles[c]) s.st[off++] = static_cast<uint8_t>(v);
    }
    return s;
  }

  CycleStructure to_cycle_structure(uint32_t n) const {
    CycleStructure cs;
    cs.n = n;
    uint8_t off = 0;
    for (uint8_t c = 0; c < ncyc; ++c) {
      std::vector<uint32_t> cyc;
      for (uint8_t i = 0; i < len[c]; ++i) cyc.push_back(st[off + i]);
      cs.cycles.push_back(std::move(cyc));
      off += len[c];
    }
    return cs;
  }
};

// All structures of the given shape (each cycle led by its largest state;
// equal-length cycles in decreasing lead order), emitted as canonical keys.
inline void enumerate_structures(uint32_t n, const std::vector<uint32_t>& shape_desc,
                                 std::vector<uint64_t>& out) {
  uint32_t d = 1u << n;
  SmallCycles cur;
  cur.ncyc = static_cast<uint8_t>(shape_desc.size());
  for (size_t c = 0; c < shape_desc.size(); ++c)
    cur.len[c] = static_cast<uint8_t>(shape_desc[c]);
  uint64_t used = 0;

  struct Rec {
    uint32_t d;
    SmallCycles* cur;
    uint64_t* used;
    const std::vector<uint32_t>* shape;
    std::vector<uint64_t>* out;

    void cycle_tail(uint8_t cyc_idx, uint8_t pos, uint8_t lead, uint8_t off) {
      uint8_t L = cur->len[cyc_idx];
      if (pos == L) {
        next_cycle(cyc_idx + 1, off + L);
        return;
      }
      for (uint8_t s = 0; s < lead; ++s) {
        if (*used & (1ULL << s)) continue;
        cur->st[off + pos] = s;
        *used |= 1ULL << s;
        cycle_tail(cyc_idx, pos + 1, lead, off);
        *used &= ~(1ULL << s);
      }
    }

    void next_cycle(uint8_t cyc_idx, uint8_t off) {
      if (cyc_idx == cur->ncyc) {
        SmallCycles canon = *cur;
        canon.canonicalize();
        out->push_back(canon.encode());
        return;
      }
      uint8_t max_lead = static_cast<uint8_t>(d);
      if (cyc_idx > 0 && (*shape)[cyc_idx] == (*shape)[cyc_idx - 1]) {
        // equal-length cycles in strictly decreasing lead order
        uint8_t prev_off = 0;
        for (uint8_t c = 0; c + 1 <= cyc_idx - 1; ++c) prev_off += cur->len[c];
        max_lead = cur->st[prev_off];
      }
      for (uint8_t lead = 0; lead < max_lead; ++lead) {
        if (*used & (1ULL << lead)) continue;
        cur->st[off] = lead;
        *used |= 1ULL << lead;
        cycle_tail(cyc_idx, 1, lead, off);
        *used &= ~(1ULL << lead);
      }
    }
  } rec{d, &cur, &used, &shape_desc, &out};

  rec.next_cycle(0, 0);
  std::sort(out.begin(), out.end());
}

}  // namespace detail

// ---- two-sided equivalence test (small n) -----------------------------------

namespace detail {

/// State tables of every invertible linear map on n bits, cached per n.
inline const std::vector<std::vector<uint32_t>>& gl_tables(uint32_t n) {
  static std::map<uint32_t, std::vector<std::vector<uint32_t>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<uint32_t>> tables;
  uint32_t d = 1u << n;
  uint64_t count = uint64_t{1} << (n * n);
  for (uint64_t bits = 0; bits < count; ++bits) {
    BitMatrix m(n, n);
    for (uint32_t r = 0; r < n; ++r)
      m.row_words[r] = (bits >> (r * n)) & word_mask(n);
    if (rank(m) != n) continue;
    std::vector<uint32_t> table(d);
    for (uint32_t x = 0; x < d; ++x) {
      uint32_t y = 0;
      for (uint32_t r = 0; r < n; ++r)
        if (parity64(m.row_words[r] & x)) y |= 1u << (n - 1 - r);
      table[x] = y;
    }
    tables.push_back(std::move(table));
  }
  return cache.emplace(n, std::move(tables)).first->second;
}

}  // namespace detail

/// Exact test for p1 = L p2 R with L, R affine, by scanning all affine L
/// and checking that p2^{-1} L^{-1} p1 is affine. Feasible for n <= 4.
inline bool two_sided_equivalent(const PermutationGate& p1, const PermutationGate& p2) {
  if (p1.n != p2.n) return false;
  uint32_t n = p1.n;
  if (n > 4) throw guard_error("two_sided_equivalent: n <= 4 only");
  uint32_t d = 1u << n;
  PermutationGate p2inv = inverse(p2);
  std::vector<uint32_t> y(d);
  for (const auto& lin : detail::gl_tables(n)) {
    for (uint32_t x = 0; x < d; ++x) y[x] = lin[p1.table[x]];
    for (uint32_t b = 0; b < d; ++b) {
      // candidate map m(x) = p2inv(y(x) ^ b); accept when affine
      uint32_t m0 = p2inv.table[y[0] ^ b];
      uint32_t cols[6];
      for (uint32_t q = 0; q < n; ++q)
        cols[q] = p2inv.table[y[1u << (n - 1 - q)] ^ b] ^ m0;
      bool ok = true;
      for (uint32_t x = 1; x < d && ok; ++x) {
        uint32_t pred = m0, rem = x;
        while (rem) {
          uint32_t bit = rem & (0u - rem);
          pred ^= cols[n - 1 - static_cast<uint32_t>(std::countr_zero(bit))];
          rem ^= bit;
        }
        ok = (p2inv.table[y[x] ^ b] == pred);
      }
      if (ok) return true;
    }
  }
  return false;
}

struct ClassifyOptions {
  uint32_t level_cap = 0;  // 0 means n + 2
  bool with_semi_clifford = true;
  bool with_profiles = true;
  bool verbose = false;
};

struct ClassRecord {
  CycleStructure representative;
  std::string notation;
  uint64_t orbit_size = 0;  // 0 when the cell was produced by extension
  uint64_t order = 0;
  LevelVerdict level;
  bool in_ch = false;
  std::optional<bool> semi_clifford;
  AEInvariantProfile profile;
};

struct CellResult {
  uint32_t n = 0;
  std::vector<uint32_t> shape;  // sorted descending; empty = identity column
  uint64_t total_structures = 0;
  std::vector<ClassRecord> classes;  // sorted by canonical notation
  bool extended = false;
  std::vector<std::pair<std::string, std::string>> unresolved_pairs;

  uint64_t in_ch_count() const {
    uint64_t c = 0;
    for (const auto& r : classes) c += r.in_ch ? 1 : 0;
    return c;
  }
};

namespace detail {

inline ClassRecord make_record(const CycleStructure& rep, uint64_t orbit_size, LevelEngine& eng,
                               const ClassifyOptions& opts, uint32_t cap) {
  ClassRecord rec;
  rec.representative = rep;
  rec.notation = canonical_notation(rep);
  rec.orbit_size = orbit_size;
  PermutationGate p = from_cycle_structure(rep);
  rec.order = permutation_order(p);
  MonomialOperator u = to_monomial(p);
  rec.level = eng.level(u, cap);
  rec.in_ch = rec.level.in_ch();
  if (opts.with_semi_clifford) rec.semi_clifford = is_semi_clifford(u);
  if (opts.with_profiles) rec.profile = ae_profile(p, /*with_cycle_type=*/true);
  return rec;
}

}  // namespace detail

/// Orbit-BFS classification of all cycle structures of the given shape under
/// affine conjugation (each column v -> Av + b).
inline CellResult classify_cycle_structures(uint32_t n, std::vector<uint32_t> shape,
                                            const ClassifyOptions& opts = {}) {
  std::sort(shape.rbegin(), shape.rend());
  CellResult cell;
  cell.n = n;
  cell.shape = shape;
  uint32_t cap = opts.level_cap ? opts.level_cap : default_level_cap(n);
  LevelEngine eng;

  if (shape.empty()) {  // identity column
    cell.total_structures = 1;
    ClassRecord rec;
    rec.representative = CycleStructure{n, {}};
    rec.notation = "";
    rec.orbit_size = 1;
    rec.order = 1;
    rec.level = LevelVerdict::level(1);
    rec.in_ch = true;
    rec.semi_clifford = true;
    if (opts.with_profiles) rec.profile = ae_profile(PermutationGate::identity(n), true);
    cell.classes.push_back(std::move(rec));
    return cell;
  }

  uint32_t total_elems = 0;
  for (uint32_t k : shape) {
    if (k < 2) throw std::invalid_argument("classify_cycle_structures: cycle length < 2");
    total_elems += k;
  }
  if (total_elems > 6) throw guard_error("classify_cycle_structures: shapes limited to 6 elements");
  if (shape.size() > 3) throw guard_error("classify_cycle_structures: too many cycles");
  if (n > 4) throw guard_error("classify_cycle_structures: direct enumeration limited to n <= 4");
  if (total_elems > (1u << n)) return cell;  // not enough states; empty cell

  std::vector<uint64_t> keys;
  detail::enumerate_structures(n, shape, keys);
  cell.total_structures = keys.size();

  // conjugation generators as state tables
  auto gens = affine_generators(n);
  std::unordered_set<uint64_t> visited;
  visited.reserve(keys.size() * 2);

  std::vector<std::pair<uint64_t, uint64_t>> orbits;  // (seed key, size)
  std::deque<detail::SmallCycles> queue;
  for (uint64_t seed : keys) {
    if (visited.count(seed)) continue;
    uint64_t size = 0;
    detail::SmallCycles s0 = detail::SmallCycles::decode(seed);
    visited.insert(seed);
    queue.clear();
    queue.push_back(s0);
    uint32_t ncols = total_elems;
    while (!queue.empty()) {
      detail::SmallCycles cur = queue.front();
      queue.pop_front();
      ++size;
      for (const auto& g : gens) {
        detail::SmallCycles nxt = cur;
        for (uint32_t i = 0; i < ncols; ++i) nxt.st[i] = static_cast<uint8_t>(g.table[cur.st[i]]);
        nxt.canonicalize();
        if (visited.insert(nxt.encode()).second) queue.push_back(nxt);
      }
    }
    orbits.emplace_back(seed, size);
    if (opts.verbose)
      std::fprintf(stderr, "  orbit %zu: size %llu\n", orbits.size(),
                   static_cast<unsigned long long>(size));
  }

  uint64_t covered = 0;
  for (auto& [seed, size] : orbits) {
    CycleStructure rep = detail::SmallCycles::decode(seed).to_cycle_structure(n);
    cell.classes.push_back(detail::make_record(rep, size, eng, opts, cap));
    covered += size;
  }
  if (covered != cell.total_structures)
    throw std::logic_error("classify_cycle_structures: orbit sizes do not partition the space");

  // Coarsen conjugation orbits by two-sided equivalence. For n >= 5 the two
  // relations coincide on structures with at most 6 moved states (an affine
  // map fixing more than half the space is the identity), so this step only
  // matters at small n.
  if (cell.classes.size() > 1) {
    std::vector<PermutationGate> perms;
    for (const auto& rec : cell.classes) perms.push_back(from_cycle_structure(rec.representative));
    std::vector<size_t> parent(cell.classes.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (size_t i = 0; i < perms.size(); ++i)
      for (size_t j = i + 1; j < perms.size(); ++j) {
        if (find(i) == find(j)) continue;
        if (two_sided_equivalent(perms[i], perms[j])) parent[find(j)] = find(i);
      }
    std::vector<ClassRecord> merged;
    for (size_t i = 0; i < cell.classes.size(); ++i) {
      if (find(i) != i) continue;
      ClassRecord rec = cell.classes[i];
      for (size_t j = i + 1; j < cell.classes.size(); ++j) {
        if (find(j) != i) continue;
        const ClassRecord& other = cell.classes[j];
        if (other.in_ch != rec.in_ch || !(other.level == rec.level) ||
            other.semi_clifford != rec.semi_clifford ||
            !(other.profile.ddt_spectrum == rec.profile.ddt_spectrum) ||
            !(other.profile.lat_spectrum == rec.profile.lat_spectrum))
          throw std::logic_error("classify: merged classes disagree on invariants");
        rec.orbit_size += other.orbit_size;
      }
      merged.push_back(std::move(rec));
    }
    cell.classes = std::move(merged);
  }

  std::sort(cell.classes.begin(), cell.classes.end(),
            [](const ClassRecord& a, const ClassRecord& b) { return a.notation < b.notation; });
  return cell;
}

// ---- exact conjugacy test ---------------------------------------------------

/// Decides affine-conjugacy of two cycle structures exactly, at any qubit
/// count, for up to six columns: an affine map taking one column
/// configuration to the other is determined by the images of an affine basis
/// chosen among the columns, and there are at most 6!/(6-d-1)! candidate
/// image tuples to try.
inline bool cycle_structures_conjugate(const CycleStructure& a_in, const CycleStructure& b_in) {
  if (a_in.n != b_in.n) return false;
  CycleStructure a = a_in, b = b_in;
  a.canonicalize();
  b.canonicalize();
  if (a.shape() != b.shape()) return false;
  if (a == b) return true;

  std::vector<uint64_t> ca, cb;
  for (const auto& cyc : a.cycles)
    for (uint32_t s : cyc) ca.push_back(s);
  for (const auto& cyc : b.cycles)
    for (uint32_t s : cyc) cb.push_back(s);
  size_t K = ca.size();
  if (K == 0) return true;
  if (K > 6) throw guard_error("cycle_structures_conjugate: more than 6 columns");

  // xor-basis insert keyed by leading bit; returns false when dependent
  auto basis_insert = [](std::vector<uint64_t>& basis, uint64_t w) {
    while (w) {
      int lead = 63 - std::countl_zero(w);
      bool found = false;
      for (uint64_t b : basis)
        if ((63 - std::countl_zero(b)) == lead) {
          w ^= b;
          found = true;
          break;
        }
      if (!found) {
        basis.push_back(w);
        return true;
      }
    }
    return false;
  };

  auto affine_dim_basis = [&](const std::vector<uint64_t>& cols, std::vector<size_t>& basis_idx) {
    std::vector<uint64_t> basis;
    basis_idx.clear();
    for (size_t i = 1; i < cols.size(); ++i)
      if (basis_insert(basis, cols[i] ^ cols[0])) basis_idx.push_back(i);
    return basis.size();
  };

  std::vector<size_t> basis_a, basis_b;
  size_t da = affine_dim_basis(ca, basis_a);
  size_t db = affine_dim_basis(cb, basis_b);
  if (da != db) return false;
  size_t d = da;

  // coordinates of every column of a over the chosen affine basis
  std::vector<uint64_t> diffs(d);
  for (size_t i = 0; i < d; ++i) diffs[i] = ca[basis_a[i]] ^ ca[0];
  std::map<uint64_t, uint32_t> xor_to_coords;
  for (uint32_t lam = 0; lam < (1u << d); ++lam) {
    uint64_t w = 0;
    for (size_t i = 0; i < d; ++i)
      if (lam & (1u << i)) w ^= diffs[i];
    xor_to_coords[w] = lam;
  }
  std::vector<uint32_t> coords(K);
  for (size_t i = 0; i < K; ++i) {
    auto it = xor_to_coords.find(ca[i] ^ ca[0]);
    if (it == xor_to_coords.end()) throw std::logic_error("conjugacy: coordinate solve failed");
    coords[i] = it->second;
  }

  uint64_t target = 0;
  {
    detail::SmallCycles sb = detail::SmallCycles::from(b);
    sb.canonicalize();
    target = sb.encode();
  }

  // try all injective assignments of (anchor, basis images)
  std::vector<size_t> pick(d + 1);
  std::vector<bool> taken(K, false);
  std::vector<uint64_t> tdiffs(d);

  struct Try {
    const std::vector<uint64_t>&ca, &cb;
    const CycleStructure& a;
    const std::vector<uint32_t>& coords;
    std::vector<size_t>& pick;
    std::vector<bool>& taken;
    std::vector<uint64_t>& tdiffs;
    size_t d, K;
    uint64_t target;

    bool rec(size_t pos) {
      if (pos == d + 1) return apply_and_compare();
      for (size_t j = 0; j < K; ++j) {
        if (taken[j]) continue;
        if (pos > 0) {
          // image diffs must stay linearly independent
          std::vector<uint64_t> basis;
          bool indep = true;
          for (size_t i = 0; i + 1 < pos; ++i) insert(basis, tdiffs[i]);
          indep = insert(basis, cb[j] ^ cb[pick[0]]);
          if (!indep) continue;
          tdiffs[pos - 1] = cb[j] ^ cb[pick[0]];
        }
        pick[pos] = j;
        taken[j] = true;
        if (rec(pos + 1)) {
          taken[j] = false;
          return true;
        }
        taken[j] = false;
      }
      return false;
    }

    static bool insert(std::vector<uint64_t>& basis, uint64_t w) {
      while (w) {
        int lead = 63 - std::countl_zero(w);
        bool found = false;
        for (uint64_t b : basis)
          if ((63 - std::countl_zero(b)) == lead) {
            w ^= b;
            found = true;
            break;
          }
        if (!found) {
          basis.push_back(w);
          return true;
        }
      }
      return false;
    }

    bool apply_and_compare() {
      // image(col_i) = t0 xor XOR of chosen image diffs per coordinates
      std::vector<uint64_t> img(K);
      for (size_t i = 0; i < K; ++i) {
        uint64_t w = cb[pick[0]];
        for (size_t bpos = 0; bpos < d; ++bpos)
          if (coords[i] & (1u << bpos)) w ^= tdiffs[bpos];
        img[i] = w;
      }
      // must be injective onto the column set of b
      std::vector<uint64_t> sorted = img;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
      std::vector<uint64_t> bs = cb;
      std::sort(bs.begin(), bs.end());
      if (sorted != bs) return false;
      CycleStructure mapped;
      mapped.n = a.n;
      size_t off = 0;
      for (const auto& cyc : a.cycles) {
        std::vector<uint32_t> c;
        for (size_t i = 0; i < cyc.size(); ++i) c.push_back(static_cast<uint32_t>(img[off + i]));
        mapped.cycles.push_back(std::move(c));
        off += cyc.size();
      }
      mapped.canonicalize();
      detail::SmallCycles sm = detail::SmallCycles::from(mapped);
      return sm.encode() == target;
    }
  } t{ca, cb, a, coords, pick, taken, tdiffs, d, K, target};

  return t.rec(0);
}

// ---- extension to more qubits ----------------------------------------------

/// Produces the (n+1)-qubit classes of a shape from the n-qubit ones:
/// control extensions of every class, plus (when n+1 equals one less than
/// the column count) the single class whose columns are affinely
/// independent. Distinctness is certified by the exact conjugacy test, so
/// no pair is ever left unresolved.
inline CellResult extend_classification(const CellResult& base, const ClassifyOptions& opts = {}) {
  uint32_t n2 = base.n + 1;
  uint32_t K = 0;
  for (uint32_t k : base.shape) K += k;
  CellResult cell;
  cell.n = n2;
  cell.shape = base.shape;
  cell.extended = true;
  uint32_t cap = opts.level_cap ? opts.level_cap : default_level_cap(n2);

  if (base.shape.empty()) {
    cell = classify_cycle_structures(n2, {}, opts);
    cell.extended = true;
    return cell;
  }
  if (K >= 2 && n2 + 1 < K)
    throw guard_error("extend_classification: requires n+1 >= K-1; enumerate directly");

  LevelEngine eng;
  struct Cand {
    CycleStructure rep;
    const ClassRecord* from = nullptr;  // null for the affinely independent class
  };
  std::vector<Cand> cands;
  for (const auto& rec : base.classes)
    cands.push_back({extend_with_constant_row(rec.representative, true), &rec});
  if (n2 == K - 1) {
    CycleStructure indep;
    indep.n = n2;
    std::vector<uint32_t> pts;
    pts.push_back(0);
    for (uint32_t i = 0; i < n2; ++i) pts.push_back(1u << i);
    size_t off = 0;
    for (uint32_t len : base.shape) {
      std::vector<uint32_t> cyc(pts.begin() + off, pts.begin() + off + len);
      indep.cycles.push_back(std::move(cyc));
      off += len;
    }
    indep.canonicalize();
    cands.push_back({indep, nullptr});
  }

  // exact pairwise distinctness; merge in the (unexpected) case of a collision
  std::vector<bool> dup(cands.size(), false);
  for (size_t i = 0; i < cands.size(); ++i)
    for (size_t j = i + 1; j < cands.size(); ++j) {
      if (dup[j]) continue;
      if (cycle_structures_conjugate(cands[i].rep, cands[j].rep)) dup[j] = true;
    }

  for (size_t i = 0; i < cands.size(); ++i) {
    if (dup[i]) continue;
    const auto& cand = cands[i];
    ClassRecord rec;
    rec.representative = cand.rep;
    rec.notation = canonical_notation(cand.rep);
    rec.orbit_size = 0;
    PermutationGate p = from_cycle_structure(cand.rep);
    rec.order = permutation_order(p);
    bool pow2 = (rec.order & (rec.order - 1)) == 0;
    MonomialOperator u = to_monomial(p);
    if (cand.from && (!cand.from->in_ch || !pow2)) {
      // a controlled gate is in the hierarchy only if the controlled block
      // is, with order a power of two
      rec.level = LevelVerdict::not_in_ch(cap);
      rec.in_ch = false;
    } else {
      rec.level = eng.level(u, cap);
      rec.in_ch = rec.level.in_ch();
    }
    if (opts.with_semi_clifford) rec.semi_clifford = is_semi_clifford(u);
    if (opts.with_profiles) rec.profile = ae_profile(p, true);
    cell.classes.push_back(std::move(rec));
  }

  std::sort(cell.classes.begin(), cell.classes.end(),
            [](const ClassRecord& a, const ClassRecord& b) { return a.notation < b.notation; });
  return cell;
}

// ---- four-qubit representatives ---------------------------------------------

inline std::vector<Circuit> perms4q_representatives() {
  using CG = CircuitGate;
  std::vector<Circuit> reps;
  reps.push_back(Circuit{4, {}});
  reps.push_back(Circuit{4, {CG(3, {{0, true}, {1, true}, {2, true}})}});
  reps.push_back(Circuit{4, {CG(3, {{1, true}, {2, true}})}});
  reps.push_back(Circuit{4, {CG(3, {{0, true}, {1, true}, {2, true}}), CG(2, {{0, true}, {1, true}})}});
  reps.push_back(Circuit{4, {CG(2, {{0, true}, {1, true}}), CG(3, {{1, true}, {2, true}})}});
  return reps;
}

struct Verify4qReport {
  std::vector<LevelVerdict> levels;
  std::vector<AEInvariantProfile> profiles;
  bool levels_ok = false;
  bool distinct_ok = false;
  bool pass() const { return levels_ok && distinct_ok; }
};

inline Verify4qReport verify_4q_representatives(LevelEngine& eng) {
  Verify4qReport rep;
  auto circuits = perms4q_representatives();
  const uint32_t expected[5] = {1, 4, 3, 4, 4};
  rep.levels_ok = true;
  for (size_t i = 0; i < circuits.size(); ++i) {
    PermutationGate p = circuit_to_permutation(circuits[i]);
    LevelVerdict v = eng.level(to_monomial(p), default_level_cap(4));
    rep.levels.push_back(v);
    rep.profiles.push_back(ae_profile(p, false));
    if (!(v.value && *v.value == expected[i])) rep.levels_ok = false;
  }
  rep.distinct_ok = true;
  for (size_t i = 0; i < rep.profiles.size(); ++i)
    for (size_t j = i + 1; j < rep.profiles.size(); ++j)
      if (rep.profiles[i] == rep.profiles[j] && rep.levels[i] == rep.levels[j])
        rep.distinct_ok = false;
  return rep;
}

// ---- monomial-Clifford equivalence harness -----------------------------------

/// Checks that a monomial equivalence gL * p1 * gR = p2 forces the affine
/// (permutation) parts alone to realize it: A_L * p1 * A_R = p2.
inline bool monomial_equiv_implies_affine(const PermutationGate& p1, const PermutationGate& p2,
                                          const MonomialOperator& gL, const MonomialOperator& gR) {
  auto prod = compose(gL, compose(to_monomial(p1), gR)).normalized();
  if (!prod.is_permutation() || prod.perm != p2.table)
    throw std::invalid_argument("monomial_equiv_implies_affine: gL*p1*gR is not p2");
  PermutationGate aL{p1.n, gL.perm}, aR{p1.n, gR.perm};
  return compose(aL, compose(p1, aR)).table == p2.table;
}

}  // namespace cliffhier
