#include <doctest.h>

#include "pvl/definable_sets.hpp"
#include "set_oracles.hpp"
#include "test_support.hpp"

using namespace pvl;
using pvl::test::oracle_closed;
using pvl::test::oracle_definably_compact;
using pvl::test::random_window;
using pvl::test::window_equal;
using pvl::test::window_subset;

namespace {

CylinderSet cyl1(std::int64_t p, int level, std::initializer_list<std::uint64_t> residues) {
    std::vector<ResiduePoint> r;
    for (std::uint64_t c : residues) r.push_back({c});
    std::sort(r.begin(), r.end());
    return CylinderSet{p, 1, level, std::move(r)};
}

ExactPoint int_point(std::int64_t p, std::int64_t value, std::size_t prec = 6) {
    return ExactPoint::from_integers(p, {value}, prec);
}

}  // namespace

TEST_CASE("cylinder measures") {
    CHECK(measure(cyl1(3, 1, {0})) == Rat(1, 3));
    CHECK(measure(cyl1(3, 2, {0, 3, 6})) == Rat(1, 3));
    CHECK(measure(CylinderSet::full(3, 2, 1)) == Rat(1));
    CHECK(measure(CylinderSet::none(3, 1, 2)) == Rat(0));
}

TEST_CASE("measure is invariant under refinement") {
    Mix64 rng(1001);
    for (int iter = 0; iter < 200; ++iter) {
        int level = 1 + static_cast<int>(rng.below(3));
        CylinderSet d = pvl::test::random_cylinder(rng, 3, 1 + static_cast<int>(rng.below(2)),
                                                   level);
        CHECK(measure(d) == measure(refined(d, level + 1)));
        std::size_t fiber = 1;
        for (int i = 0; i < d.n; ++i) fiber *= 3;
        CHECK(refined(d, level + 1).residues.size() == d.residues.size() * fiber);
    }
}

TEST_CASE("finite additivity of the ambient measure") {
    Mix64 rng(1002);
    for (int iter = 0; iter < 500; ++iter) {
        CylinderSet a = pvl::test::random_cylinder(rng, 3, 1, 1 + static_cast<int>(rng.below(3)));
        CylinderSet b = pvl::test::random_cylinder(rng, 3, 1, 1 + static_cast<int>(rng.below(3)));
        CHECK(measure(cylinder_union(a, b)) ==
              measure(a) + measure(b) - measure(cylinder_intersect(a, b)));
    }
}

TEST_CASE("window boolean algebra on residues") {
    CHECK(cylinder_intersect(cyl1(3, 2, {0, 3, 6}), cyl1(3, 2, {0, 1, 2})).residues ==
          std::vector<ResiduePoint>{{0}});

    WindowSet d = WindowSet::from_core(cyl1(3, 1, {0, 2}));
    WindowSet u = window_union(d, window_complement(d));
    CHECK(u.core.residues == CylinderSet::full(3, 1, 1).residues);
    CHECK(u.tail);
    CHECK(u.punctures_removed.empty());
    CHECK(u.points_added.empty());
}

TEST_CASE("complement is an involution") {
    Mix64 rng(1003);
    int structural = 0;
    for (int iter = 0; iter < 100; ++iter) {
        WindowSet d = random_window(rng, 3, 1, 3, 2);
        WindowSet dd = window_complement(window_complement(d));
        CHECK(window_equal(d, dd));
        // On sets without vacuous punctures the round trip is structural.
        bool all_effective = true;
        for (const auto& x : d.punctures_removed) {
            if (!d.core.contains(x.residue_at(d.core.level))) all_effective = false;
        }
        if (all_effective) {
            ++structural;
            CHECK(dd.core.residues == refined(d.core, dd.core.level).residues);
            CHECK(dd.tail == d.tail);
            CHECK(dd.punctures_removed.size() == d.punctures_removed.size());
            CHECK(dd.points_added.size() == d.points_added.size());
        }
    }
    CHECK(structural > 20);
}

TEST_CASE("union and intersection respect membership") {
    Mix64 rng(1004);
    for (int iter = 0; iter < 60; ++iter) {
        // Equal scales keep every set in the same coordinate frame, so one
        // exact point means the same ambient point everywhere.
        WindowSet a = random_window(rng, 3, 1, 2, 2);
        WindowSet b = random_window(rng, 3, 1, 2, 2);
        a.scale = 0;
        b.scale = 0;
        WindowSet u = window_union(a, b);
        WindowSet i = window_intersect(a, b);
        WindowSet c = window_complement(a);
        for (std::int64_t v = 0; v < 30; ++v) {
            ExactPoint x = int_point(3, v, 8);
            bool ma = window_member(a, x);
            bool mb = window_member(b, x);
            CHECK(window_member(u, x) == (ma || mb));
            CHECK(window_member(i, x) == (ma && mb));
            CHECK(window_member(c, x) == !ma);
        }
    }
}

TEST_CASE("scale reconciliation keeps the tail honest") {
    // A = {v >= 1} plus everything outside Z_p; B = the window 3^-1 Z_p.
    // A covers everything but the units of Z_p, so the union with the full
    // window is all of Q_p, while the intersection keeps the deep core and
    // the ring between the two windows.
    WindowSet a = WindowSet::from_core(cyl1(3, 1, {0}), 0, /*tail=*/true);
    WindowSet b = WindowSet::from_core(CylinderSet::full(3, 1, 0), 1);

    WindowSet u = window_union(a, b);
    CHECK(u.scale == 1);
    CHECK(u.tail);
    CHECK(window_complement(u).content_empty());

    WindowSet i = window_intersect(a, b);
    CHECK_FALSE(i.tail);
    CHECK(measure(i.core) == Rat(7, 9));  // {v >= 1} plus the between-ring

    // The missing part is exactly the units of Z_p: residues 3 and 6 mod 9
    // once coordinates are rescaled into the larger window.
    WindowSet missing = window_complement(i);
    CHECK(missing.tail);
    CHECK(missing.core.residues == std::vector<ResiduePoint>{{3}, {6}});
    CHECK(missing.punctures_removed.empty());
    CHECK(missing.points_added.empty());
}

TEST_CASE("closedness rule") {
    WindowSet zp = WindowSet::from_core(CylinderSet::full(3, 1, 1));
    CHECK(is_closed(zp));

    WindowSet punctured = zp;
    punctured.punctures_removed.push_back(int_point(3, 0));
    CHECK_FALSE(is_closed(punctured));
    CHECK_FALSE(oracle_closed(punctured));

    WindowSet vacuous = WindowSet::from_core(cyl1(3, 1, {1, 2}));
    vacuous.punctures_removed.push_back(int_point(3, 0));
    CHECK(is_closed(vacuous));
    CHECK(oracle_closed(vacuous));
}

TEST_CASE("boundedness is the tail flag") {
    WindowSet d = WindowSet::from_core(cyl1(3, 1, {0}));
    CHECK(is_bounded(d));
    d.tail = true;
    CHECK_FALSE(is_bounded(d));
    WindowSet window_only = WindowSet::from_core(CylinderSet::full(3, 1, 0), 3);
    CHECK(is_bounded(window_only));
}

TEST_CASE("definable compactness decisions") {
    CHECK(is_definably_compact(WindowSet::from_core(CylinderSet::full(3, 2, 1))));

    WindowSet qp = WindowSet::from_core(CylinderSet::full(3, 1, 0), 0, true);
    CHECK_FALSE(is_definably_compact(qp));

    WindowSet zp_minus_zero = WindowSet::from_core(CylinderSet::full(3, 1, 1));
    zp_minus_zero.punctures_removed.push_back(int_point(3, 0));
    CHECK_FALSE(is_definably_compact(zp_minus_zero));
}

TEST_CASE("compactness decision matches the adherence oracle") {
    Mix64 rng(1005);
    for (int iter = 0; iter < 300; ++iter) {
        WindowSet d = random_window(rng, 3, 1, 3, 2);
        CHECK(is_definably_compact(d) == oracle_definably_compact(d));
    }
}

TEST_CASE("compact locus of a finite family") {
    std::vector<WindowSet> family;
    for (int t = 0; t < 3; ++t) {
        WindowSet d = WindowSet::from_core(CylinderSet::full(3, 1, 1));
        if (t == 0) d.punctures_removed.push_back(int_point(3, 0));
        family.push_back(d);
    }
    CHECK(compact_locus(family) == std::vector<std::size_t>{1, 2});

    std::vector<WindowSet> all_compact(4, WindowSet::from_core(cyl1(3, 1, {0})));
    CHECK(compact_locus(all_compact) == std::vector<std::size_t>{0, 1, 2, 3});

    std::vector<WindowSet> tails;
    for (int t = 0; t < 4; ++t) {
        tails.push_back(WindowSet::from_core(CylinderSet::full(3, 1, 1), 0, t % 2 == 0));
    }
    CHECK(compact_locus(tails) == std::vector<std::size_t>{1, 3});
}

TEST_CASE("bounded_by against the standard box family") {
    GammaExhaustion e = GammaExhaustion::standard(3, 1);

    BoundResult zp = bounded_by(WindowSet::from_core(CylinderSet::full(3, 1, 0)), e);
    CHECK(zp.kind == BoundResult::Kind::Bounded);
    CHECK(zp.gamma == 0);

    BoundResult window = bounded_by(WindowSet::from_core(CylinderSet::full(3, 1, 0), 2), e);
    CHECK(window.kind == BoundResult::Kind::Bounded);
    CHECK(window.gamma == 2);

    BoundResult tail = bounded_by(WindowSet::from_core(CylinderSet::full(3, 1, 0), 0, true), e);
    CHECK(tail.kind == BoundResult::Kind::Unbounded);

    BoundResult nothing = bounded_by(WindowSet::from_core(CylinderSet::none(3, 1, 1)), e);
    CHECK(nothing.kind == BoundResult::Kind::EmptySet);

    // Deep subsets need negative gamma.
    BoundResult deep = bounded_by(WindowSet::from_core(cyl1(3, 2, {0})), e);
    CHECK(deep.kind == BoundResult::Kind::Bounded);
    CHECK(deep.gamma == -2);
}

TEST_CASE("bounded_by is least and monotone via the set algebra") {
    Mix64 rng(1006);
    GammaExhaustion e = GammaExhaustion::standard(3, 1);
    for (int iter = 0; iter < 50; ++iter) {
        WindowSet d = random_window(rng, 3, 1, 2, 1, /*allow_tail=*/false);
        if (d.content_empty()) continue;
        BoundResult r = bounded_by(d, e);
        REQUIRE(r.kind == BoundResult::Kind::Bounded);
        CHECK(window_subset(d, e.level_set(r.gamma)));
        CHECK(window_subset(d, e.level_set(r.gamma + 1)));
        CHECK_FALSE(window_subset(d, e.level_set(r.gamma - 1)));
    }
}

TEST_CASE("exhaustion union") {
    GammaExhaustion e = GammaExhaustion::standard(3, 1);
    GammaExhaustion same = exhaustion_union({e, e});
    CHECK(same.components.size() == 1);

    GammaExhaustion shifted{3, 1, {GammaExhaustion::Component{int_point(3, 1, 8), 0}}};
    GammaExhaustion u = exhaustion_union({e, shifted});
    CHECK(u.components.size() == 2);

    // V_1 contains both unit boxes around 0 and around 1.
    WindowSet v1 = u.level_set(1);
    CHECK(window_subset(WindowSet::from_core(cyl1(3, 1, {0})), v1));
    CHECK(window_subset(WindowSet::from_core(cyl1(3, 1, {1})), v1));

    // Monotone, clopen, bounded levels.
    for (std::int64_t g = -3; g < 3; ++g) {
        CHECK(window_subset(u.level_set(g), u.level_set(g + 1)));
        CHECK(is_definably_compact(u.level_set(g)));
        CHECK(is_bounded(u.level_set(g)));
    }

    // Exhausts: any bounded set ends up inside some level.
    Mix64 rng(1007);
    for (int iter = 0; iter < 20; ++iter) {
        WindowSet d = random_window(rng, 3, 1, 2, 0, /*allow_tail=*/false);
        if (d.content_empty()) continue;
        BoundResult r = bounded_by(d, u);
        REQUIRE(r.kind == BoundResult::Kind::Bounded);
        CHECK(window_subset(d, u.level_set(r.gamma)));
    }
}

TEST_CASE("window sets reject malformed input") {
    CHECK_THROWS_AS(cylinder_union(cyl1(3, 1, {0}), cyl1(5, 1, {0})), std::invalid_argument);
    CHECK_THROWS_AS(refined(cyl1(3, 2, {0}), 1), std::invalid_argument);

    WindowSet bad = WindowSet::from_core(cyl1(3, 1, {0}));
    bad.points_added.push_back(int_point(3, 0));  // inside the core
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    CHECK_THROWS_AS(CylinderSet::full(2, 3, 12), CapExceeded);
}
