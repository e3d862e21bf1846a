#pragma once

// Exact algebra of Pauli strings and monomial (generalized permutation)
// operators with dyadic root-of-unity phases. Every operator handled by this
// library lives in this representation.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cliffhier/gf2_linear.hpp"

namespace cliffhier {

/// i^phase_i_power * X^x * Z^z acting as P|j> = i^p (-1)^{z.j} |j xor x>.
struct PauliString {
  uint32_t n = 0;
  BitVec x, z;
  uint8_t phase_i_power = 0;  // mod 4

  static PauliString identity(uint32_t n) {
    return PauliString{n, BitVec::zeros(n), BitVec::zeros(n), 0};
  }
  static PauliString x_on(uint32_t n, uint32_t qubit) {
    return PauliString{n, BitVec::unit(n, qubit), BitVec::zeros(n), 0};
  }
  static PauliString z_on(uint32_t n, uint32_t qubit) {
    return PauliString{n, BitVec::zeros(n), BitVec::unit(n, qubit), 0};
  }
  static PauliString y_on(uint32_t n, uint32_t qubit) {
    return PauliString{n, BitVec::unit(n, qubit), BitVec::unit(n, qubit), 1};
  }
  /// Phaseless Pauli from packed (x|z) words.
  static PauliString from_xz(uint32_t n, uint64_t xw, uint64_t zw) {
    return PauliString{n, BitVec(n, xw), BitVec(n, zw), 0};
  }

  bool operator==(const PauliString& o) const {
    return n == o.n && x == o.x && z == o.z && phase_i_power == o.phase_i_power;
  }
};

/// Generalized permutation matrix: u|j> = exp(2*pi*i*num[j]/2^log_denom) |perm[j]>.
/// num[j] is kept reduced mod 2^log_denom and log_denom minimal.
struct MonomialOperator {
  uint32_t n = 0;
  std::vector<uint32_t> perm;
  std::vector<uint32_t> num;
  uint32_t log_denom = 0;

  static MonomialOperator identity(uint32_t n) {
    MonomialOperator u;
    u.n = n;
    u.perm.resize(size_t{1} << n);
    u.num.assign(size_t{1} << n, 0);
    for (size_t j = 0; j < u.perm.size(); ++j) u.perm[j] = static_cast<uint32_t>(j);
    return u;
  }

  static MonomialOperator from_permutation(uint32_t n, std::vector<uint32_t> table) {
    MonomialOperator u = identity(n);
    if (table.size() != u.perm.size())
      throw std::invalid_argument("from_permutation: table size mismatch");
    u.perm = std::move(table);
    return u;
  }

  size_t dim() const { return perm.size(); }
  uint32_t mask() const { return log_denom == 0 ? 0 : ((1u << log_denom) - 1u); }

  bool is_diagonal() const {
    for (size_t j = 0; j < perm.size(); ++j)
      if (perm[j] != j) return false;
    return true;
  }
  bool is_permutation() const {
    for (uint32_t v : num)
      if (v) return false;
    return true;
  }

  /// Drop common factors of two from all numerators.
  void reduce() {
    bool any = false;
    for (uint32_t v : num) any |= (v != 0);
    if (!any) {
      log_denom = 0;
      return;
    }
    while (log_denom > 0) {
      bool all_even = true;
      for (uint32_t v : num) all_even &= ((v & 1u) == 0);
      if (!all_even) break;
      for (auto& v : num) v >>= 1;
      --log_denom;
    }
  }

  /// Gauge-fixed form: global phase chosen so that num[0] = 0, then reduced.
  MonomialOperator normalized() const {
    MonomialOperator r = *this;
    if (r.log_denom > 0 && r.num[0] != 0) {
      uint32_t g = r.num[0], mk = r.mask();
      for (auto& v : r.num) v = (v - g) & mk;
    }
    r.reduce();
    return r;
  }

  bool operator==(const MonomialOperator& o) const {
    return n == o.n && log_denom == o.log_denom && perm == o.perm && num == o.num;
  }
};

/// Matrix product a*b; denominators unified to the max, result re-minimized.
inline MonomialOperator compose(const MonomialOperator& a, const MonomialOperator& b) {
  if (a.n != b.n) throw std::invalid_argument("compose: dimension mismatch");
  MonomialOperator r;
  r.n = a.n;
  r.log_denom = std::max(a.log_denom, b.log_denom);
  uint32_t sa = r.log_denom - a.log_denom, sb = r.log_denom - b.log_denom;
  uint32_t mk = r.mask();
  size_t d = a.dim();
  r.perm.resize(d);
  r.num.resize(d);
  for (size_t j = 0; j < d; ++j) {
    uint32_t mid = b.perm[j];
    r.perm[j] = a.perm[mid];
    r.num[j] = ((b.num[j] << sb) + (a.num[mid] << sa)) & mk;
  }
  r.reduce();
  return r;
}

inline MonomialOperator inverse(const MonomialOperator& a) {
  MonomialOperator r;
  r.n = a.n;
  r.log_denom = a.log_denom;
  size_t d = a.dim();
  r.perm.resize(d);
  r.num.resize(d);
  uint32_t mk = a.mask();
  for (size_t j = 0; j < d; ++j) {
    r.perm[a.perm[j]] = static_cast<uint32_t>(j);
    r.num[a.perm[j]] = (0u - a.num[j]) & mk;
  }
  r.reduce();
  return r;
}

inline MonomialOperator pauli_to_monomial(const PauliString& p) {
  MonomialOperator u = MonomialOperator::identity(p.n);
  u.log_denom = 2;
  uint64_t xw = p.x.word, zw = p.z.word;
  for (size_t j = 0; j < u.dim(); ++j) {
    u.perm[j] = static_cast<uint32_t>(j ^ xw);
    u.num[j] = (p.phase_i_power + 2u * (parity64(zw & j) ? 1u : 0u)) & 3u;
  }
  u.reduce();
  return u;
}

/// u * p * u^dagger; always monomial.
inline MonomialOperator conjugate(const MonomialOperator& u, const PauliString& p) {
  return compose(u, compose(pauli_to_monomial(p), inverse(u)));
}

inline MonomialOperator conjugate(const MonomialOperator& u, const MonomialOperator& v) {
  return compose(u, compose(v, inverse(u)));
}

/// The Pauli equal to u up to global phase, if one exists: perm must be an
/// XOR-translation and the phase vector a +/-1 character given by a Z string.
/// When the residual global phase is a 4th root of unity it is folded into
/// phase_i_power exactly; otherwise the phase exponent is left at 0.
inline std::optional<PauliString> as_pauli(const MonomialOperator& u) {
  size_t d = u.dim();
  uint64_t t = u.perm[0];
  for (size_t j = 0; j < d; ++j)
    if (u.perm[j] != (j ^ t)) return std::nullopt;
  PauliString p = PauliString::identity(u.n);
  p.x = BitVec(u.n, t);
  uint32_t m = u.log_denom;
  if (m == 0) return p;
  uint32_t mk = u.mask();
  uint32_t half = 1u << (m - 1);
  uint64_t zw = 0;
  for (uint32_t q = 0; q < u.n; ++q) {
    uint64_t e = 1ULL << (u.n - 1 - q);
    uint32_t diff = (u.num[e] - u.num[0]) & mk;
    if (diff == half)
      zw |= e;
    else if (diff != 0)
      return std::nullopt;
  }
  for (size_t j = 0; j < d; ++j) {
    uint32_t diff = (u.num[j] - u.num[0]) & mk;
    uint32_t want = parity64(zw & j) ? half : 0;
    if (diff != want) return std::nullopt;
  }
  p.z = BitVec(u.n, zw);
  // residual global phase exp(2 pi i num[0] / 2^m)
  if (m <= 2) {
    p.phase_i_power = static_cast<uint8_t>((u.num[0] << (2 - m)) & 3u);
  } else if (u.num[0] % (1u << (m - 2)) == 0) {
    p.phase_i_power = static_cast<uint8_t>((u.num[0] >> (m - 2)) & 3u);
  }
  return p;
}

inline bool equal_up_to_phase(const MonomialOperator& a, const MonomialOperator& b) {
  if (a.n != b.n || a.perm != b.perm) return false;
  MonomialOperator na = a.normalized(), nb = b.normalized();
  return na.log_denom == nb.log_denom && na.num == nb.num;
}

/// Monomial with identity permutation; gauge num[0] = 0.
struct DiagonalGate {
  explicit DiagonalGate(MonomialOperator op) : op_(op.normalized()) {
    if (!op_.is_diagonal()) throw std::invalid_argument("DiagonalGate: not diagonal");
  }

  static DiagonalGate identity(uint32_t n) { return DiagonalGate(MonomialOperator::identity(n)); }

  /// Entry j carries phase exp(2*pi*i*nums[j]/2^log_denom).
  static DiagonalGate from_phases(uint32_t n, std::vector<uint32_t> nums, uint32_t log_denom) {
    MonomialOperator u = MonomialOperator::identity(n);
    if (nums.size() != u.dim()) throw std::invalid_argument("from_phases: size mismatch");
    u.log_denom = log_denom;
    uint32_t mk = u.mask();
    for (size_t j = 0; j < nums.size(); ++j) u.num[j] = nums[j] & mk;
    return DiagonalGate(std::move(u));
  }

  const MonomialOperator& op() const { return op_; }
  uint32_t n() const { return op_.n; }
  uint32_t log_denom() const { return op_.log_denom; }
  uint32_t num(size_t j) const { return op_.num[j]; }

  bool operator==(const DiagonalGate& o) const { return op_ == o.op_; }

 private:
  MonomialOperator op_;
};

inline DiagonalGate compose(const DiagonalGate& a, const DiagonalGate& b) {
  return DiagonalGate(compose(a.op(), b.op()));
}

inline DiagonalGate inverse(const DiagonalGate& a) { return DiagonalGate(inverse(a.op())); }

}  // namespace cliffhier
