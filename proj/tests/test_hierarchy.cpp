#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cliffhier/hierarchy.hpp"
#include "support/dense_oracle.hpp"
#include "support/properties.hpp"
#include "support/sampling.hpp"

using namespace cliffhier;

namespace {
MonomialOperator ccx(uint32_t n = 3) {
  Circuit c{n, {CircuitGate(n - 1, {{n - 3, true}, {n - 2, true}})}};
  return to_monomial(circuit_to_permutation(c));
}
MonomialOperator cx() {
  Circuit c{2, {CircuitGate(1, {{0, true}})}};
  return to_monomial(circuit_to_permutation(c));
}
}  // namespace

TEST_CASE("Clifford recognition") {
  CHECK(is_clifford(cx()));
  CHECK(!is_clifford(ccx()));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    CHECK(is_clifford(pauli_to_monomial(sampling::random_pauli(2, rng))));
    CHECK(is_clifford(sampling::random_monomial_clifford(2, rng)));
  }
}

TEST_CASE("levels of the control ladder") {
  LevelEngine eng;
  CHECK(eng.level(ccx(3), 5) == LevelVerdict::level(3));
  Circuit cccx{4, {CircuitGate(3, {{0, true}, {1, true}, {2, true}})}};
  CHECK(eng.level(to_monomial(circuit_to_permutation(cccx)), 6) == LevelVerdict::level(4));
  CHECK(eng.level(MonomialOperator::identity(2), 4) == LevelVerdict::level(1));
  CHECK(eng.level(cx(), 4) == LevelVerdict::level(2));
}

TEST_CASE("level of the T rotation against the dense recursion") {
  MonomialOperator t = DiagonalGate::from_phases(1, {0, 1}, 3).op();
  LevelEngine eng;
  auto v = eng.level(t, 5);
  REQUIRE(v.value.has_value());
  CHECK(*v.value == 3);
  CHECK(oracle::level_dense(oracle::mat_of(t), 1, 5) == 3);
}

TEST_CASE("level cap verdict") {
  // an eighth-root single-entry diagonal that is not a product of
  // multi-controlled rotations of level <= 2
  MonomialOperator sqrt_t = DiagonalGate::from_phases(1, {0, 1}, 4).op();
  LevelEngine eng;
  auto v = eng.level(sqrt_t, 3);
  CHECK(!v.in_ch());
  CHECK(v.cap == 3);
  CHECK(eng.level(sqrt_t, 4) == LevelVerdict::level(4));
}

TEST_CASE("level is invariant under Clifford multiplication") {
  std::mt19937_64 rng(7);
  LevelEngine eng;
  for (int i = 0; i < 25; ++i) {
    MonomialOperator c1 = sampling::random_monomial_clifford(3, rng);
    MonomialOperator c2 = sampling::random_monomial_clifford(3, rng);
    CHECK(eng.level(compose(c1, compose(ccx(), c2)), 5) == LevelVerdict::level(3));
  }
}

TEST_CASE("semi-Clifford recognition") {
  CHECK(is_semi_clifford(ccx()));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) CHECK(is_semi_clifford(sampling::random_monomial_clifford(2, rng)));
  // the 4-cycle generating circuit is in the hierarchy but not semi-Clifford
  Circuit fam{4, {CircuitGate(2, {{0, true}, {1, true}}),
                  CircuitGate(3, {{0, true}, {1, true}, {2, true}})}};
  MonomialOperator u = to_monomial(circuit_to_permutation(fam));
  CHECK(!is_semi_clifford(u));
  LevelEngine eng;
  CHECK(eng.level(u, 6).in_ch());
}

TEST_CASE("diagonal levels of the standard rotations") {
  auto S = DiagonalGate::from_phases(1, {0, 1}, 2);
  auto T = DiagonalGate::from_phases(1, {0, 1}, 3);
  std::vector<uint32_t> cz{0, 0, 0, 1};
  auto CZ = DiagonalGate::from_phases(2, cz, 1);
  std::vector<uint32_t> ccz(8, 0);
  ccz[7] = 1;
  auto CCZ = DiagonalGate::from_phases(3, ccz, 1);
  std::vector<uint32_t> cs4{0, 0, 0, 1};
  auto CS = DiagonalGate::from_phases(2, cs4, 2);
  CHECK(diagonal_level(S) == LevelVerdict::level(2));
  CHECK(diagonal_level(T) == LevelVerdict::level(3));
  CHECK(diagonal_level(CZ) == LevelVerdict::level(2));
  CHECK(diagonal_level(CCZ) == LevelVerdict::level(3));
  CHECK(diagonal_level(CS) == LevelVerdict::level(3));
  CHECK(diagonal_level(DiagonalGate::identity(2)) == LevelVerdict::level(1));
}

TEST_CASE("diagonal level agrees with the recursion on random diagonals") {
  std::mt19937_64 rng(13);
  LevelEngine eng;
  for (int i = 0; i < 60; ++i) {
    uint32_t n = 1 + rng() % 2;
    DiagonalGate d = sampling::random_diag_level_k(n, 1 + rng() % 3, rng);
    auto fast = diagonal_level(d);
    auto slow = eng.level(d.op(), 6);
    CHECK(fast == slow);
  }
}

TEST_CASE("root-of-unity group membership") {
  std::vector<uint32_t> cz{0, 0, 0, 1};
  CHECK(in_diag_group(DiagonalGate::from_phases(2, cz, 1), {2, 2, DiagGroupSpec::Kind::Diag}));
  auto T = DiagonalGate::from_phases(1, {0, 1}, 3);
  CHECK(in_diag_group(T, {1, 3, DiagGroupSpec::Kind::Diag}));
  CHECK(!in_diag_group(T, {1, 2, DiagGroupSpec::Kind::Diag}));
  auto sqrtT = DiagonalGate::from_phases(1, {0, 1}, 4);
  CHECK(in_diag_group(sqrtT, {1, 4, DiagGroupSpec::Kind::Diag}));
  CHECK(!in_diag_group(sqrtT, {1, 3, DiagGroupSpec::Kind::Diag}));
}

TEST_CASE("diagonal group orders match closures") {
  struct {
    uint32_t n, k;
    uint64_t expect;
  } cases[] = {{1, 1, 2}, {1, 2, 4}, {1, 3, 8}, {2, 1, 4}, {2, 2, 32}};
  for (auto [n, k, expect] : cases) {
    auto g = generate_diag_group({n, k, DiagGroupSpec::Kind::D});
    CHECK(g.elements.size() == expect);
    CHECK(diag_group_order(n, k).decimal() == std::to_string(expect));
  }
  CHECK(generate_diag_group({1, 1, DiagGroupSpec::Kind::Diag}).elements.size() == 2);
  CHECK(generate_diag_group({2, 2, DiagGroupSpec::Kind::Diag}).elements.size() == 64);
}

TEST_CASE("diag_group_order handles large exponents") {
  CHECK(diag_group_order(1, 1).decimal() == "2");
  CHECK(diag_group_order(4, 3).decimal() == std::to_string(1ull << 28));
  // 2^106 spelled out
  CHECK(diag_group_order(5, 5).decimal() == "81129638414606681695789005144064");
}

TEST_CASE("closure guard") {
  CHECK_THROWS_AS(generate_diag_group({4, 4, DiagGroupSpec::Kind::Diag}, 1024), guard_error);
}

TEST_CASE("squaring drops the diagonal level") {
  std::mt19937_64 rng(17);
  CHECK(props::square_level_drop(200, rng) == 0);
}

TEST_CASE("containment chain of the small diagonal groups") {
  CHECK(props::containment_chain() == 0);
}

TEST_CASE("permutation conjugation preserves diagonal spectra") {
  std::mt19937_64 rng(19);
  CHECK(props::spectrum_preservation(200, rng) == 0);
}

TEST_CASE("non-dyadic rotations stay outside the hierarchy") {
  std::mt19937_64 rng(23);
  CHECK(props::non_dyadic_exclusion(200, rng) == 0);
}

TEST_CASE("zero-mismatch circuits are in the hierarchy") {
  std::mt19937_64 rng(29);
  CHECK(props::mismatch_in_hierarchy(60, 0, rng) == 0);
}

TEST_CASE("one-mismatch circuits are in the hierarchy") {
  std::mt19937_64 rng(31);
  CHECK(props::mismatch_in_hierarchy(60, 1, rng) == 0);
}
