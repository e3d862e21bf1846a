#pragma once

// Clifford recognition, recursive hierarchy level computation, the
// semi-Clifford test, and the diagonal-gate groups D_k^n / Diag_k^n.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cliffhier/pauli_monomial.hpp"

namespace cliffhier {

struct LevelVerdict {
  std::optional<uint32_t> value;  // smallest k with membership, when found
  uint32_t cap = 0;

  static LevelVerdict level(uint32_t k) { return LevelVerdict{k, 0}; }
  static LevelVerdict not_in_ch(uint32_t cap) { return LevelVerdict{std::nullopt, cap}; }

  bool in_ch() const { return value.has_value(); }
  bool operator==(const LevelVerdict& o) const { return value == o.value && cap == o.cap; }
};

struct guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Default recursion cap for n-qubit permutation-generated monomials.
inline uint32_t default_level_cap(uint32_t n) { return n + 2; }

/// True iff conjugating every generator X_i, Z_i by u yields a Pauli.
inline bool is_clifford(const MonomialOperator& u) {
  MonomialOperator ui = inverse(u);
  for (uint32_t q = 0; q < u.n; ++q) {
    auto cx = compose(u, compose(pauli_to_monomial(PauliString::x_on(u.n, q)), ui));
    if (!as_pauli(cx)) return false;
    auto cz = compose(u, compose(pauli_to_monomial(PauliString::z_on(u.n, q)), ui));
    if (!as_pauli(cz)) return false;
  }
  return true;
}

/// The subspace of F_2^{2n} of Pauli labels (x|z) whose conjugate by u is
/// again a Pauli. Closed under addition because conjugation is a
/// homomorphism and Pauli products are Paulis up to phase.
inline std::vector<BitVec> good_pauli_subspace(const MonomialOperator& u) {
  MonomialOperator ui = inverse(u);
  std::vector<BitVec> good;
  uint32_t n = u.n;
  uint64_t d = uint64_t{1} << n;
  for (uint64_t xw = 0; xw < d; ++xw)
    for (uint64_t zw = 0; zw < d; ++zw) {
      if (xw == 0 && zw == 0) continue;
      auto p = pauli_to_monomial(PauliString::from_xz(n, xw, zw));
      if (as_pauli(compose(u, compose(p, ui)))) good.emplace_back(2 * n, (xw << n) | zw);
    }
  return good;
}

/// u maps some maximal abelian Pauli group into the Pauli group, i.e. the
/// good-Pauli subspace contains a Lagrangian.
inline bool is_semi_clifford(const MonomialOperator& u) {
  auto good = good_pauli_subspace(u);
  return max_isotropic_dim(good) >= u.n;
}

/// Memoizing engine for the hierarchy recursion. Not safe for concurrent
/// use; give each thread its own engine (results are deterministic).
class LevelEngine {
 public:
  bool in_ch(const MonomialOperator& u, uint32_t k) {
    if (k == 0) return false;
    if (k == 1) return as_pauli(u).has_value();
    MonomialOperator nu = u.normalized();
    Key key = make_key(nu);
    auto& e = memo_[key];
    uint32_t bit = 1u << k;
    if (e.eval & bit) return e.val & bit;
    bool ok;
    if (k == 2) {
      ok = is_clifford(nu);
    } else if (k == 3) {
      // CH_2 is a group, so generator conjugates suffice.
      ok = true;
      MonomialOperator ui = inverse(nu);
      for (uint32_t q = 0; q < nu.n && ok; ++q) {
        ok = is_clifford(compose(nu, compose(pauli_to_monomial(PauliString::x_on(nu.n, q)), ui)));
        if (ok)
          ok = is_clifford(compose(nu, compose(pauli_to_monomial(PauliString::z_on(nu.n, q)), ui)));
      }
    } else {
      // CH_{k-1} is not a group for k >= 4: every Pauli class must be
      // conjugated, not just the generators. X strings first; they fail
      // earliest for permutation-like operators.
      ok = all_pauli_conjugates_in(nu, k - 1);
    }
    auto& e2 = memo_[key];  // recursion may rehash
    e2.eval |= bit;
    if (ok) e2.val |= bit;
    return ok;
  }

  /// Smallest k <= cap with u in CH_k.
  LevelVerdict level(const MonomialOperator& u, uint32_t cap) {
    if (cap < 2) throw std::invalid_argument("level: cap must be >= 2");
    for (uint32_t k = 1; k <= cap; ++k)
      if (in_ch(u, k)) return LevelVerdict::level(k);
    return LevelVerdict::not_in_ch(cap);
  }

  size_t memo_size() const { return memo_.size(); }
  void clear() { memo_.clear(); }

 private:
  struct Key {
    uint32_t n = 0, log_denom = 0;
    std::vector<uint32_t> perm, num;
    bool operator==(const Key& o) const {
      return n == o.n && log_denom == o.log_denom && perm == o.perm && num == o.num;
    }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      uint64_t h = 1469598103934665603ULL;
      auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
      };
      mix(k.n);
      mix(k.log_denom);
      for (uint32_t v : k.perm) mix(v);
      for (uint32_t v : k.num) mix(v + 0x9e3779b9u);
      return static_cast<size_t>(h);
    }
  };
  struct Entry {
    uint32_t eval = 0, val = 0;
  };

  static Key make_key(const MonomialOperator& nu) {
    return Key{nu.n, nu.log_denom, nu.perm, nu.num};
  }

  bool all_pauli_conjugates_in(const MonomialOperator& u, uint32_t k) {
    MonomialOperator ui = inverse(u);
    uint32_t n = u.n;
    uint64_t d = uint64_t{1} << n;
    auto check = [&](uint64_t xw, uint64_t zw) {
      auto p = pauli_to_monomial(PauliString::from_xz(n, xw, zw));
      return in_ch(compose(u, compose(p, ui)), k);
    };
    for (uint64_t xw = 1; xw < d; ++xw)
      if (!check(xw, 0)) return false;
    for (uint64_t zw = 1; zw < d; ++zw)
      if (!check(0, zw)) return false;
    for (uint64_t xw = 1; xw < d; ++xw)
      for (uint64_t zw = 1; zw < d; ++zw)
        if (!check(xw, zw)) return false;
    return true;
  }

  std::unordered_map<Key, Entry, KeyHash> memo_;
};

// ---- diagonal gate groups ------------------------------------------------

struct DiagGroupSpec {
  enum class Kind { D, Diag };
  uint32_t n = 1;
  uint32_t k = 1;
  Kind kind = Kind::D;
};

/// Exact hierarchy level of a diagonal gate, via the multilinear expansion
/// of its phase-exponent function over subsets of wires. A term with |S|
/// wires and reduced coefficient odd/2^q contributes level |S| + q - 1.
inline LevelVerdict diagonal_level(const DiagonalGate& d) {
  const MonomialOperator& op = d.op();
  uint32_t m = op.log_denom;
  if (m == 0) return LevelVerdict::level(1);
  uint32_t mk = op.mask();
  std::vector<uint32_t> c = op.num;  // c[0] == 0 by gauge
  size_t dim = c.size();
  for (uint32_t b = 0; b < op.n; ++b) {
    uint64_t bit = uint64_t{1} << b;
    for (size_t j = 0; j < dim; ++j)
      if (j & bit) c[j] = (c[j] - c[j ^ bit]) & mk;
  }
  uint32_t best = 1;
  for (size_t s = 1; s < dim; ++s) {
    if (!c[s]) continue;
    uint32_t q = m - static_cast<uint32_t>(std::countr_zero(c[s]));
    uint32_t lvl = static_cast<uint32_t>(std::popcount(s)) + q - 1;
    best = std::max(best, lvl);
  }
  return LevelVerdict::level(best);
}

/// kind = Diag: every phase is a 2^k-th root of unity.
/// kind = D: diagonal_level(d) <= k.
inline bool in_diag_group(const DiagonalGate& d, const DiagGroupSpec& spec) {
  if (d.n() != spec.n) throw std::invalid_argument("in_diag_group: dimension mismatch");
  if (spec.kind == DiagGroupSpec::Kind::Diag) {
    uint32_t m = d.log_denom();
    if (m <= spec.k) return true;
    uint32_t shift = m - spec.k;
    for (size_t j = 0; j < d.op().dim(); ++j)
      if (d.num(j) & ((1u << shift) - 1u)) return false;
    return true;
  }
  auto lvl = diagonal_level(d);
  return lvl.value && *lvl.value <= spec.k;
}

/// |D_k^n| is a power of two; keeps the exponent exact.
struct Pow2 {
  uint32_t exponent = 0;

  std::string decimal() const {
    std::vector<uint8_t> digits{1};
    for (uint32_t i = 0; i < exponent; ++i) {
      uint32_t carry = 0;
      for (auto& d : digits) {
        uint32_t v = d * 2u + carry;
        d = static_cast<uint8_t>(v % 10);
        carry = v / 10;
      }
      if (carry) digits.push_back(static_cast<uint8_t>(carry));
    }
    std::string s;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) s += char('0' + *it);
    return s;
  }
};

inline uint64_t binomial(uint32_t n, uint32_t k) {
  if (k > n) return 0;
  uint64_t r = 1;
  for (uint32_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// prod_{j=0}^{min(k-1,n-1)} (2^{k-j})^{C(n,j+1)}
inline Pow2 diag_group_order(uint32_t n, uint32_t k) {
  if (n < 1 || k < 1) throw std::invalid_argument("diag_group_order: n,k >= 1");
  uint64_t e = 0;
  for (uint32_t j = 0; j <= std::min(k - 1, n - 1); ++j)
    e += uint64_t{k - j} * binomial(n, j + 1);
  if (e > 4096) throw guard_error("diag_group_order: exponent too large");
  return Pow2{static_cast<uint32_t>(e)};
}

/// Closure of a diagonal group from its multi-controlled-rotation
/// generators (the lowest rotation in each column for D, the 2^k-th root on
/// every wire subset for Diag). Elements as phase-numerator vectors over the
/// fixed denominator 2^k, gauge num[0] = 0.
struct DiagGroup {
  uint32_t n = 0, log_denom = 0;
  std::vector<std::vector<uint32_t>> elements;  // sorted
};

inline DiagGroup generate_diag_group(const DiagGroupSpec& spec, size_t guard = size_t{1} << 20) {
  uint32_t n = spec.n, k = spec.k;
  size_t dim = size_t{1} << n;
  std::vector<std::vector<uint32_t>> gens;
  auto all_bits = [](size_t j, size_t s) { return (j & s) == s; };
  if (spec.kind == DiagGroupSpec::Kind::D) {
    for (uint32_t m = 0; m <= std::min(k - 1, n - 1); ++m)
      for (size_t s = 1; s < dim; ++s) {
        if (static_cast<uint32_t>(std::popcount(s)) != m + 1) continue;
        std::vector<uint32_t> g(dim, 0);
        for (size_t j = 0; j < dim; ++j)
          if (all_bits(j, s)) g[j] = 1u << m;  // phase exp(2 pi i / 2^{k-m})
        gens.push_back(std::move(g));
      }
  } else {
    for (size_t s = 1; s < dim; ++s) {
      std::vector<uint32_t> g(dim, 0);
      for (size_t j = 0; j < dim; ++j)
        if (all_bits(j, s)) g[j] = 1u;
      gens.push_back(std::move(g));
    }
  }
  uint32_t mk = (k >= 32) ? ~0u : ((1u << k) - 1u);
  std::set<std::vector<uint32_t>> seen;
  std::vector<std::vector<uint32_t>> queue;
  std::vector<uint32_t> id(dim, 0);
  seen.insert(id);
  queue.push_back(id);
  while (!queue.empty()) {
    auto cur = std::move(queue.back());
    queue.pop_back();
    for (const auto& g : gens) {
      std::vector<uint32_t> nxt(dim);
      for (size_t j = 0; j < dim; ++j) nxt[j] = (cur[j] + g[j]) & mk;
      if (seen.size() >= guard && !seen.count(nxt))
        throw guard_error("generate_diag_group: size guard exceeded");
      if (seen.insert(nxt).second) queue.push_back(nxt);
    }
  }
  DiagGroup out;
  out.n = n;
  out.log_denom = k;
  out.elements.assign(seen.begin(), seen.end());
  return out;
}

}  // namespace cliffhier
