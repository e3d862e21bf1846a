#pragma once

// Permutation gates as truth tables, multi-controlled-X circuits, cycle
// structures with canonical notation, control addition, and wire-mismatch
// analysis.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "cliffhier/pauli_monomial.hpp"

namespace cliffhier {

/// Truth-table permutation of the 2^n basis states.
struct PermutationGate {
  uint32_t n = 0;
  std::vector<uint32_t> table;

  static PermutationGate identity(uint32_t n) {
    PermutationGate p;
    p.n = n;
    p.table.resize(size_t{1} << n);
    for (size_t j = 0; j < p.table.size(); ++j) p.table[j] = static_cast<uint32_t>(j);
    return p;
  }

  size_t dim() const { return table.size(); }
  uint32_t apply(uint32_t state) const { return table[state]; }
  bool is_identity() const {
    for (size_t j = 0; j < table.size(); ++j)
      if (table[j] != j) return false;
    return true;
  }
  bool operator==(const PermutationGate& o) const { return n == o.n && table == o.table; }
  bool operator<(const PermutationGate& o) const { return table < o.table; }
};

inline PermutationGate compose(const PermutationGate& a, const PermutationGate& b) {
  if (a.n != b.n) throw std::invalid_argument("compose: dimension mismatch");
  PermutationGate r = a;
  for (size_t j = 0; j < r.table.size(); ++j) r.table[j] = a.table[b.table[j]];
  return r;
}

inline PermutationGate inverse(const PermutationGate& a) {
  PermutationGate r = a;
  for (size_t j = 0; j < a.table.size(); ++j) r.table[a.table[j]] = static_cast<uint32_t>(j);
  return r;
}

inline MonomialOperator to_monomial(const PermutationGate& p) {
  return MonomialOperator::from_permutation(p.n, p.table);
}

/// Multi-controlled X: polarity true = filled circle (control on |1>),
/// false = open circle. A bare X is the empty-controls case.
struct CircuitGate {
  uint32_t target = 0;
  std::vector<std::pair<uint32_t, bool>> controls;  // sorted by wire

  CircuitGate() = default;
  CircuitGate(uint32_t t, std::vector<std::pair<uint32_t, bool>> ctrls)
      : target(t), controls(std::move(ctrls)) {
    std::sort(controls.begin(), controls.end());
    for (auto& [w, pol] : controls)
      if (w == target) throw std::invalid_argument("CircuitGate: target among controls");
    for (size_t i = 1; i < controls.size(); ++i)
      if (controls[i].first == controls[i - 1].first)
        throw std::invalid_argument("CircuitGate: duplicate control wire");
  }

  bool operator==(const CircuitGate& o) const {
    return target == o.target && controls == o.controls;
  }
};

struct Circuit {
  uint32_t n = 0;
  std::vector<CircuitGate> gates;

  void validate() const {
    for (const auto& g : gates) {
      if (g.target >= n) throw std::invalid_argument("Circuit: target wire out of range");
      for (auto& [w, pol] : g.controls)
        if (w >= n) throw std::invalid_argument("Circuit: control wire out of range");
    }
  }
  bool operator==(const Circuit& o) const { return n == o.n && gates == o.gates; }
};

inline uint32_t apply_gate(const CircuitGate& g, uint32_t n, uint32_t state) {
  for (auto& [w, pol] : g.controls) {
    bool bit = (state >> (n - 1 - w)) & 1u;
    if (bit != pol) return state;
  }
  return state ^ (1u << (n - 1 - g.target));
}

/// Composes gate actions left to right on basis states (the first gate in
/// the list acts first).
inline PermutationGate circuit_to_permutation(const Circuit& c) {
  c.validate();
  PermutationGate p = PermutationGate::identity(c.n);
  for (size_t s = 0; s < p.table.size(); ++s) {
    uint32_t v = static_cast<uint32_t>(s);
    for (const auto& g : c.gates) v = apply_gate(g, c.n, v);
    p.table[s] = v;
  }
  return p;
}

/// Disjoint cycles of the non-fixed basis states of a permutation, kept in
/// canonical order: each cycle rotated so its largest state leads, cycles
/// sorted descending by leading state.
struct CycleStructure {
  uint32_t n = 0;
  std::vector<std::vector<uint32_t>> cycles;

  void canonicalize() {
    for (auto& cyc : cycles) {
      auto it = std::max_element(cyc.begin(), cyc.end());
      std::rotate(cyc.begin(), it, cyc.end());
    }
    std::sort(cycles.begin(), cycles.end(),
              [](const auto& a, const auto& b) { return a.front() > b.front(); });
  }

  void validate() const {
    std::set<uint32_t> seen;
    for (const auto& cyc : cycles) {
      if (cyc.size() < 2) throw std::invalid_argument("CycleStructure: cycle shorter than 2");
      for (uint32_t s : cyc) {
        if (s >= (1u << n)) throw std::invalid_argument("CycleStructure: state out of range");
        if (!seen.insert(s).second)
          throw std::invalid_argument("CycleStructure: duplicate state");
      }
    }
  }

  /// Cycle lengths, sorted descending.
  std::vector<uint32_t> shape() const {
    std::vector<uint32_t> s;
    for (const auto& cyc : cycles) s.push_back(static_cast<uint32_t>(cyc.size()));
    std::sort(s.rbegin(), s.rend());
    return s;
  }

  size_t column_count() const {
    size_t k = 0;
    for (const auto& cyc : cycles) k += cyc.size();
    return k;
  }

  /// The columns as binary vectors, cycle by cycle in canonical order.
  std::vector<BitVec> columns() const {
    std::vector<BitVec> cols;
    for (const auto& cyc : cycles)
      for (uint32_t s : cyc) cols.emplace_back(n, s);
    return cols;
  }

  bool operator==(const CycleStructure& o) const { return n == o.n && cycles == o.cycles; }
};

inline CycleStructure to_cycle_structure(const PermutationGate& p) {
  CycleStructure cs;
  cs.n = p.n;
  std::vector<bool> seen(p.dim(), false);
  for (uint32_t s = 0; s < p.dim(); ++s) {
    if (seen[s] || p.table[s] == s) continue;
    std::vector<uint32_t> cyc;
    uint32_t cur = s;
    while (!seen[cur]) {
      seen[cur] = true;
      cyc.push_back(cur);
      cur = p.table[cur];
    }
    cs.cycles.push_back(std::move(cyc));
  }
  cs.canonicalize();
  return cs;
}

inline PermutationGate from_cycle_structure(const CycleStructure& cs) {
  cs.validate();
  PermutationGate p = PermutationGate::identity(cs.n);
  for (const auto& cyc : cs.cycles)
    for (size_t i = 0; i < cyc.size(); ++i) p.table[cyc[i]] = cyc[(i + 1) % cyc.size()];
  return p;
}

/// "(a,b,...)(c,d,...)" with states as integers; one-cycles omitted,
/// identity renders as the empty string.
inline std::string canonical_notation(const CycleStructure& cs) {
  CycleStructure c = cs;
  c.canonicalize();
  std::string out;
  for (const auto& cyc : c.cycles) {
    out += '(';
    for (size_t i = 0; i < cyc.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(cyc[i]);
    }
    out += ')';
  }
  return out;
}

/// New control wire prepended as wire 0; the permutation acts iff the new
/// wire matches `polarity`.
inline Circuit add_control(const Circuit& c, bool polarity = true) {
  Circuit out;
  out.n = c.n + 1;
  for (const auto& g : c.gates) {
    std::vector<std::pair<uint32_t, bool>> ctrls;
    ctrls.emplace_back(0u, polarity);
    for (auto& [w, pol] : g.controls) ctrls.emplace_back(w + 1, pol);
    out.gates.emplace_back(g.target + 1, std::move(ctrls));
  }
  return out;
}

inline PermutationGate add_control(const PermutationGate& p, bool polarity = true) {
  PermutationGate out = PermutationGate::identity(p.n + 1);
  uint32_t block = 1u << p.n;
  for (uint32_t s = 0; s < block; ++s) {
    if (polarity)
      out.table[block + s] = block + p.table[s];
    else
      out.table[s] = p.table[s];
  }
  return out;
}

/// Column-wise constant-row extension: each state gains `bit` as new wire 0.
inline CycleStructure extend_with_constant_row(const CycleStructure& cs, bool bit = true) {
  CycleStructure out;
  out.n = cs.n + 1;
  uint32_t hi = bit ? (1u << cs.n) : 0u;
  for (const auto& cyc : cs.cycles) {
    std::vector<uint32_t> c;
    for (uint32_t s : cyc) c.push_back(s | hi);
    out.cycles.push_back(std::move(c));
  }
  out.canonicalize();
  return out;
}

/// Number of wires carrying at least one target and at least one control.
/// Bare X gates do not contribute their target.
inline uint32_t wire_mismatch(const Circuit& c) {
  std::set<uint32_t> targets, controls;
  for (const auto& g : c.gates) {
    if (!g.controls.empty()) targets.insert(g.target);
    for (auto& [w, pol] : g.controls) controls.insert(w);
  }
  uint32_t count = 0;
  for (uint32_t w : targets)
    if (controls.count(w)) ++count;
  return count;
}

inline uint64_t permutation_order(const PermutationGate& p) {
  uint64_t ord = 1;
  std::vector<bool> seen(p.dim(), false);
  for (uint32_t s = 0; s < p.dim(); ++s) {
    if (seen[s]) continue;
    uint64_t len = 0;
    uint32_t cur = s;
    while (!seen[cur]) {
      seen[cur] = true;
      ++len;
      cur = p.table[cur];
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

/// Nontrivial cycle lengths of the permutation, sorted descending.
inline std::vector<uint32_t> cycle_type(const PermutationGate& p) {
  return to_cycle_structure(p).shape();
}

}  // namespace cliffhier
