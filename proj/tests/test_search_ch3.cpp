#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cliffhier/search_ch3.hpp"
#include "cliffhier/table.hpp"
#include "support/properties.hpp"
#include "support/sampling.hpp"

using namespace cliffhier;

TEST_CASE("parameter cube indexing round-trips") {
  for (uint64_t idx : {uint64_t{0}, uint64_t{1}, uint64_t{4095}, uint64_t{2048}, uint64_t{777}}) {
    CHECK(DiagClass::from_index(idx).index() == idx);
  }
  CHECK(DiagClass::space_size() == 4096);
  CHECK(DiagClassFull::space_size() == (uint64_t{1} << 20));
}

TEST_CASE("the zero tuple builds the identity diagonal") {
  auto d = build_diagonal(DiagClass{});
  CHECK(d.op().is_permutation());
  CHECK(d.op().is_diagonal());
}

TEST_CASE("the single T tuple alternates eighth roots down the index") {
  DiagClass dc;
  dc.c = 1;
  auto d = build_diagonal(dc);
  CHECK(d.log_denom() == 3);
  for (uint32_t j = 0; j < 16; ++j) CHECK(d.num(j) == (j & 1u));
}

TEST_CASE("the doubled bottom rotation builds the three-wire Z") {
  DiagClass dc;
  dc.a[3] = 2;
  auto d = build_diagonal(dc);
  CHECK(d.log_denom() == 1);
  for (uint32_t j = 0; j < 16; ++j) {
    bool all = ((j >> 2) & 1u) && ((j >> 1) & 1u) && (j & 1u);
    CHECK(d.num(j) == (all ? 1u : 0u));
  }
}

TEST_CASE("the full tuple hits every factor at the last entry") {
  DiagClass dc{{1, 1, 1, 1}, {1, 1, 1}, 1};
  auto d = build_diagonal(dc);
  // 4 quarter-turn factors and 3 quarter-turn pair factors contribute 2 each
  // over denominator 8, the T factor contributes 1
  CHECK(d.log_denom() == 3);
  CHECK(d.num(15) == ((2u * 7u + 1u) & 7u));
  CHECK(d.num(0) == 0);
}

TEST_CASE("restriction of the full cube to bottom-target support") {
  uint64_t count = 0;
  for (uint64_t i = 0; i < DiagClassFull::space_size(); ++i) {
    DiagClassFull f = DiagClassFull::from_index(i);
    if (!f.bottom_target_only()) continue;
    ++count;
    CHECK(build_diagonal(f.reduced()) == build_diagonal(f));
  }
  CHECK(count == 4096);
}

TEST_CASE("spectral obstruction fires on sub-eighth-root granularity only") {
  auto sqrtT = DiagonalGate::from_phases(1, {0, 1}, 4);
  CHECK(spectral_obstruction(sqrtT).has_value());
  auto T = DiagonalGate::from_phases(1, {0, 1}, 3);
  CHECK(!spectral_obstruction(T).has_value());
  // no reduced-cube point can trigger it: the odd part of every phase
  // function is linear there
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    auto d = build_diagonal(DiagClass::from_index(rng() % DiagClass::space_size()));
    CHECK(!spectral_obstruction(d).has_value());
  }
}

TEST_CASE("spectral obstruction certifies exclusion from the third level") {
  // inject a sixteenth-root factor on a random wire on top of a cube point
  std::mt19937_64 rng(5);
  auto pi = ccx_bottom_perm();
  MonomialOperator pim = to_monomial(pi);
  LevelEngine eng;
  int tried = 0;
  for (int i = 0; i < 200 && tried < 25; ++i) {
    auto base = build_diagonal(DiagClass::from_index(rng() % DiagClass::space_size()));
    uint32_t wire = rng() % 4;
    std::vector<uint32_t> extra(16, 0);
    for (uint32_t j = 0; j < 16; ++j)
      if ((j >> (3 - wire)) & 1u) extra[j] = 1;
    auto d = DiagonalGate(compose(base.op(), DiagonalGate::from_phases(4, extra, 4).op()));
    if (!spectral_obstruction(d)) continue;
    ++tried;
    CHECK(!pi_d_in_ch3(pi, d));
    auto lv = eng.level(compose(pim, d.op()), 4);
    CHECK(!(lv.value && *lv.value <= 3));
  }
  CHECK(tried == 25);
}

TEST_CASE("exclusion filters label the known cases") {
  auto pi = ccx_bottom_perm();
  auto ex0 = exclusion_filters(DiagClass{}, pi);
  REQUIRE(ex0.has_value());
  CHECK(ex0->reason == "identity");

  DiagClass ccz;
  ccz.a[3] = 2;
  auto ex1 = exclusion_filters(ccz, pi);
  REQUIRE(ex1.has_value());
  CHECK(ex1->reason == "ccz-product");

  DiagClass sup;
  sup.b[1] = 1;
  sup.c = 1;
  auto ex2 = exclusion_filters(sup, pi);
  REQUIRE(ex2.has_value());
  CHECK(ex2->reason == "support-3q");

  DiagClass kept;
  kept.a[0] = 1;
  CHECK(!exclusion_filters(kept, pi).has_value());

  DiagClass mirror;
  mirror.a[0] = 3;
  auto ex3 = exclusion_filters(mirror, pi);
  REQUIRE(ex3.has_value());
  CHECK(ex3->reason == "inverse-dedup");
}

TEST_CASE("sweep verdicts agree between modes and runs are byte-identical") {
  SweepOptions filtered;
  auto r1 = run_sweep({ccx_bottom_perm()}, filtered);
  auto r2 = run_sweep({ccx_bottom_perm()}, filtered);
  CHECK(sweep_report_to_json(r1).dump(2) == sweep_report_to_json(r2).dump(2));
  CHECK(r1.verdict == "all semi-Clifford");
  uint64_t excluded = 0;
  for (auto& [k, v] : r1.excluded_by) excluded += v;
  CHECK(excluded + r1.classes_checked == r1.classes_total);

  SweepOptions unfiltered;
  unfiltered.use_filters = false;
  auto r3 = run_sweep({ccx_bottom_perm()}, unfiltered);
  CHECK(r3.classes_checked == 4096);
  CHECK(r3.verdict == r1.verdict);
  // the identity point and the doubled bottom rotation survive as
  // third-level semi-Clifford products
  CHECK(r3.survivors_semi_clifford == 2);
}

TEST_CASE("threaded sweep merges deterministically") {
  SweepOptions two;
  two.use_filters = false;
  two.threads = 2;
  SweepOptions one;
  one.use_filters = false;
  auto a = run_sweep({ccx_bottom_perm()}, one);
  auto b = run_sweep({ccx_bottom_perm()}, two);
  CHECK(sweep_report_to_json(a).dump(2) == sweep_report_to_json(b).dump(2));
}

TEST_CASE("ignoring off-target support keeps the verdict") {
  // a T rotation on the bare wire does not change third-level membership
  auto pi = ccx_bottom_perm();
  MonomialOperator pim = to_monomial(pi);
  std::vector<uint32_t> t_top(16, 0);
  for (uint32_t j = 0; j < 16; ++j)
    if ((j >> 3) & 1u) t_top[j] = 1;
  auto d = DiagonalGate::from_phases(4, t_top, 3);
  CHECK(pi_d_in_ch3(pi, d) == pi_d_in_ch3(pi, DiagonalGate::identity(4)));
  LevelEngine eng;
  auto with = eng.level(compose(pim, d.op()), 6);
  auto without = eng.level(pim, 6);
  CHECK(with == without);
}

TEST_CASE("two-path agreement between the X loop and the recursion") {
  std::mt19937_64 rng(7);
  CHECK(props::pixd_two_path(60, rng) == 0);
}

TEST_CASE("inverse tuples land on the same side of the third level") {
  std::mt19937_64 rng(11);
  CHECK(props::inverse_symmetry(60, rng) == 0);
}
