#pragma once

// Bit-packed linear algebra over GF(2): vectors, matrices, reduced row
// echelon form, affine maps, and the symplectic form used by the
// semi-Clifford test. Rows are machine words; row operations are XOR.

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cliffhier {

inline uint64_t word_mask(uint32_t nbits) {
  return nbits >= 64 ? ~0ULL : ((1ULL << nbits) - 1ULL);
}

/// Fixed-length bit vector. Bit for qubit j sits at word bit (n-1-j), so the
/// packed word, read as an unsigned integer, is the basis-state index with
/// qubit 0 as the most significant bit.
struct BitVec {
  uint32_t n = 0;
  uint64_t word = 0;

  BitVec() = default;
  BitVec(uint32_t len, uint64_t packed) : n(len), word(packed & word_mask(len)) {
    if (len == 0 || len > 64) throw std::invalid_argument("BitVec: length out of range");
  }

  static BitVec zeros(uint32_t len) { return BitVec(len, 0); }
  static BitVec from_index(uint32_t len, uint64_t state) { return BitVec(len, state); }
  static BitVec unit(uint32_t len, uint32_t qubit) {
    return BitVec(len, 1ULL << (len - 1 - qubit));
  }

  bool get(uint32_t qubit) const { return (word >> (n - 1 - qubit)) & 1ULL; }
  void set(uint32_t qubit, bool v) {
    uint64_t m = 1ULL << (n - 1 - qubit);
    word = v ? (word | m) : (word & ~m);
  }
  void flip(uint32_t qubit) { word ^= 1ULL << (n - 1 - qubit); }

  /// The basis-state index (qubit 0 = MSB).
  uint64_t index() const { return word; }
  uint32_t popcount() const { return static_cast<uint32_t>(std::popcount(word)); }

  BitVec operator^(const BitVec& o) const { return BitVec(n, word ^ o.word); }
  bool operator==(const BitVec& o) const { return n == o.n && word == o.word; }
  bool operator<(const BitVec& o) const { return n != o.n ? n < o.n : word < o.word; }
};

inline bool parity64(uint64_t w) { return std::popcount(w) & 1; }

/// Rectangular binary matrix, rows packed into words. Column j of a row sits
/// at bit (cols-1-j) so that printing the word in binary reads left to right.
struct BitMatrix {
  uint32_t rows = 0, cols = 0;
  std::vector<uint64_t> row_words;

  BitMatrix() = default;
  BitMatrix(uint32_t r, uint32_t c) : rows(r), cols(c), row_words(r, 0) {
    if (r == 0 || c == 0 || c > 64) throw std::invalid_argument("BitMatrix: bad shape");
  }

  static BitMatrix identity(uint32_t n) {
    BitMatrix m(n, n);
    for (uint32_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }
  static BitMatrix from_rows(const std::vector<std::vector<int>>& rws) {
    if (rws.empty() || rws[0].empty()) throw std::invalid_argument("from_rows: empty");
    BitMatrix m(static_cast<uint32_t>(rws.size()), static_cast<uint32_t>(rws[0].size()));
    for (uint32_t i = 0; i < m.rows; ++i) {
      if (rws[i].size() != m.cols) throw std::invalid_argument("from_rows: ragged");
      for (uint32_t j = 0; j < m.cols; ++j) m.set(i, j, rws[i][j] != 0);
    }
    return m;
  }

  bool get(uint32_t r, uint32_t c) const { return (row_words[r] >> (cols - 1 - c)) & 1ULL; }
  void set(uint32_t r, uint32_t c, bool v) {
    uint64_t m = 1ULL << (cols - 1 - c);
    row_words[r] = v ? (row_words[r] | m) : (row_words[r] & ~m);
  }

  BitVec row(uint32_t r) const { return BitVec(cols, row_words[r]); }
  BitVec col(uint32_t c) const {
    BitVec v = BitVec::zeros(rows);
    for (uint32_t r = 0; r < rows; ++r) v.set(r, get(r, c));
    return v;
  }

  bool operator==(const BitMatrix& o) const {
    return rows == o.rows && cols == o.cols && row_words == o.row_words;
  }
};

struct RrefResult {
  BitMatrix rref;
  uint32_t rank = 0;
  std::vector<uint32_t> pivot_cols;
};

/// Reduced row echelon form. Columns are processed left to right and the
/// pivot is the first 1 from the top, so the result is deterministic.
inline RrefResult rref(const BitMatrix& m) {
  RrefResult res{m, 0, {}};
  auto& rw = res.rref.row_words;
  uint32_t r = 0;
  for (uint32_t c = 0; c < m.cols && r < m.rows; ++c) {
    uint64_t bit = 1ULL << (m.cols - 1 - c);
    uint32_t pivot = r;
    while (pivot < m.rows && !(rw[pivot] & bit)) ++pivot;
    if (pivot == m.rows) continue;
    std::swap(rw[r], rw[pivot]);
    for (uint32_t i = 0; i < m.rows; ++i)
      if (i != r && (rw[i] & bit)) rw[i] ^= rw[r];
    res.pivot_cols.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

inline uint32_t rank(const BitMatrix& m) { return rref(m).rank; }

inline BitMatrix transpose(const BitMatrix& m) {
  BitMatrix t(m.cols, m.rows);
  for (uint32_t r = 0; r < m.rows; ++r)
    for (uint32_t c = 0; c < m.cols; ++c)
      if (m.get(r, c)) t.set(c, r, true);
  return t;
}

inline BitVec mat_apply(const BitMatrix& m, const BitVec& v) {
  if (v.n != m.cols) throw std::invalid_argument("mat_apply: dimension mismatch");
  BitVec out = BitVec::zeros(m.rows);
  for (uint32_t r = 0; r < m.rows; ++r)
    if (parity64(m.row_words[r] & v.word)) out.set(r, true);
  return out;
}

inline BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mat_mul: dimension mismatch");
  BitMatrix out(a.rows, b.cols);
  for (uint32_t r = 0; r < a.rows; ++r)
    for (uint32_t k = 0; k < a.cols; ++k)
      if (a.get(r, k)) out.row_words[r] ^= b.row_words[k];
  return out;
}

inline std::optional<BitMatrix> invert(const BitMatrix& m) {
  if (m.rows != m.cols) return std::nullopt;
  uint32_t n = m.rows;
  std::vector<uint64_t> a = m.row_words;
  BitMatrix inv = BitMatrix::identity(n);
  for (uint32_t c = 0; c < n; ++c) {
    uint64_t bit = 1ULL << (n - 1 - c);
    uint32_t pivot = c;
    while (pivot < n && !(a[pivot] & bit)) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[c], a[pivot]);
    std::swap(inv.row_words[c], inv.row_words[pivot]);
    for (uint32_t i = 0; i < n; ++i)
      if (i != c && (a[i] & bit)) {
        a[i] ^= a[c];
        inv.row_words[i] ^= inv.row_words[c];
      }
  }
  return inv;
}

/// Invertible affine map x -> linear*x + shift over GF(2).
struct AffineMap {
  BitMatrix linear;
  BitVec shift;

  uint32_t dim() const { return shift.n; }
  BitVec apply(const BitVec& v) const { return mat_apply(linear, v) ^ shift; }
};

inline AffineMap make_affine(BitMatrix linear, BitVec shift) {
  if (linear.rows != linear.cols || linear.rows != shift.n)
    throw std::invalid_argument("make_affine: dimension mismatch");
  if (rank(linear) != linear.rows)
    throw std::invalid_argument("make_affine: linear part singular");
  return AffineMap{std::move(linear), shift};
}

inline AffineMap affine_identity(uint32_t n) {
  return AffineMap{BitMatrix::identity(n), BitVec::zeros(n)};
}

inline BitVec affine_apply(const AffineMap& f, const BitVec& v) { return f.apply(v); }

inline AffineMap affine_compose(const AffineMap& f, const AffineMap& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("affine_compose: dimension mismatch");
  // (f o g)(v) = F(Gv + b_g) + b_f
  return AffineMap{mat_mul(f.linear, g.linear), mat_apply(f.linear, g.shift) ^ f.shift};
}

inline AffineMap affine_invert(const AffineMap& f) {
  auto inv = invert(f.linear);
  if (!inv) throw std::invalid_argument("affine_invert: singular linear part");
  return AffineMap{*inv, mat_apply(*inv, f.shift)};
}

// ---- symplectic helpers -------------------------------------------------
//
// Vectors of F_2^{2n} are packed (x|z): the x half occupies qubits 0..n-1
// (high word bits), the z half qubits n..2n-1. The form is
// w((x,z),(x',z')) = x.z' + x'.z mod 2.

inline bool symplectic_product(const BitVec& u, const BitVec& v) {
  if (u.n != v.n || (u.n & 1)) throw std::invalid_argument("symplectic_product: bad length");
  uint32_t n = u.n / 2;
  uint64_t lo = word_mask(n);
  uint64_t ux = u.word >> n, uz = u.word & lo;
  uint64_t vx = v.word >> n, vz = v.word & lo;
  return parity64(ux & vz) ^ parity64(vx & uz);
}

/// Basis of the span of `vecs` (Gaussian elimination, deterministic).
inline std::vector<BitVec> span_basis(std::span<const BitVec> vecs) {
  std::vector<uint64_t> basis;  // kept in decreasing leading-bit order
  uint32_t n = vecs.empty() ? 0 : vecs[0].n;
  for (const auto& v : vecs) {
    uint64_t w = v.word;
    for (uint64_t b : basis) {
      uint64_t lead = 1ULL << (63 - std::countl_zero(b));
      if (w & lead) w ^= b;
    }
    if (w) {
      basis.push_back(w);
      for (size_t i = basis.size(); i-- > 1;) {
        if (std::countl_zero(basis[i - 1]) > std::countl_zero(basis[i]))
          std::swap(basis[i - 1], basis[i]);
        else
          break;
      }
    }
  }
  std::vector<BitVec> out;
  out.reserve(basis.size());
  for (uint64_t w : basis) out.emplace_back(n, w);
  return out;
}

/// Dimension of a maximal isotropic subspace contained in span(vecs), i.e.
/// dim V - rank(w|_V)/2 for the standard symplectic form.
inline uint32_t max_isotropic_dim(std::span<const BitVec> vecs) {
  auto basis = span_basis(vecs);
  uint32_t d = static_cast<uint32_t>(basis.size());
  if (d == 0) return 0;
  BitMatrix gram(d, d == 0 ? 1 : d);
  for (uint32_t i = 0; i < d; ++i)
    for (uint32_t j = 0; j < d; ++j)
      gram.set(i, j, symplectic_product(basis[i], basis[j]));
  uint32_t r = rank(gram);
  return d - r / 2;
}

inline uint32_t max_isotropic_dim(const std::vector<BitVec>& vecs) {
  return max_isotropic_dim(std::span<const BitVec>(vecs));
}

}  // namespace cliffhier
