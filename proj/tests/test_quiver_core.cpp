#include "qm/quiver.hpp"
#include "qm/errors.hpp"
#include "qm/framing.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace qm;
using qmtest::Rng;

namespace {

const Quiver kMarkov = Quiver::from_arrows({{1, 2, 2}, {2, 3, 2}, {3, 1, 2}});
const Quiver kThreeCycle = Quiver::from_arrows({{1, 2, 1}, {2, 3, 1}, {3, 1, 1}});

} // namespace

TEST_CASE("mutating the oriented 3-cycle at 2 yields the path 3 -> 2 -> 1") {
    Quiver expected = Quiver::from_arrows({{2, 1, 1}, {3, 2, 1}});
    CHECK(mutate(kThreeCycle, 2) == expected);
    CHECK(mutate(Quiver(), 5) == Quiver());
}

TEST_CASE("mutation agrees with the dense matrix oracle") {
    Rng rng(42);
    for (int it = 0; it < 200; ++it) {
        Quiver q = qmtest::random_quiver(rng, 8, 4);
        for (Vertex v = 1; v <= 8; ++v)
            CHECK(mutate(q, v) == qmtest::matrix_mutate_oracle(q, v, 8));
    }
    for (Vertex v : {1, 2, 3}) {
        Quiver m = mutate(kMarkov, v);
        CHECK(m == qmtest::matrix_mutate_oracle(kMarkov, v, 3));
        CHECK(is_isomorphic(m, kMarkov).has_value());
    }
}

TEST_CASE("mutation is an involution") {
    Rng rng(7);
    for (int it = 0; it < 100; ++it) {
        Quiver q = qmtest::random_quiver(rng, 8, 4);
        for (Vertex v : q.support()) CHECK(mutate(mutate(q, v), v) == q);
    }
}

TEST_CASE("restriction and overfill on the two-sided ray window") {
    Quiver ray = two_sided_ray_window(11, 6);
    SUBCASE("restriction to the relabeled {-1,0,1}") {
        CHECK(restrict_to(ray, {5, 6, 7}) == Quiver::from_arrows({{6, 5, 1}, {6, 7, 1}}));
    }
    SUBCASE("overfill keeps exactly the arrows meeting the window") {
        Quiver over = overfill(ray, {5, 6, 7});
        for (Vertex k = 1; k <= 11; ++k)
            if (k != 6) CHECK(over.count(6, k) == 1);
        CHECK(over.count(5, 4) == 1);
        CHECK(over.count(7, 8) == 1);
        CHECK(over.count(8, 9) == 0);
        CHECK(over.count(4, 3) == 0);
        CHECK(over.count(9, 10) == 0);
    }
    SUBCASE("full-support restriction and overfill are the identity") {
        CHECK(restrict_to(ray, ray.support()) == ray);
        CHECK(overfill(ray, ray.support()) == ray);
        CHECK(restrict_to(ray, {}) == Quiver());
        CHECK(overfill(ray, {30, 31}) == Quiver());
    }
}

TEST_CASE("support") {
    CHECK(support(Quiver()).empty());
    CHECK(support(Quiver::from_arrows({{3, 7, 1}})) == VertexSet{3, 7});
    CHECK(support(kMarkov) == VertexSet{1, 2, 3});
}

TEST_CASE("restriction and overfill commute with mutation inside the window") {
    Rng rng(11);
    for (int it = 0; it < 120; ++it) {
        Quiver q = qmtest::random_quiver(rng, 8, 4);
        VertexSet supp = q.support();
        if (supp.empty()) continue;
        for (Vertex x : supp) {
            VertexSet v{x};
            for (Vertex u : supp)
                if (qmtest::rand_int(rng, 0, 1)) v.insert(u);
            CHECK(mutate(restrict_to(q, v), x) == restrict_to(mutate(q, x), v));
            CHECK(overfill(mutate(overfill(q, v), x), v) == overfill(mutate(q, x), v));
            CHECK(restrict_to(overfill(q, v), v) == restrict_to(q, v));
        }
    }
}

TEST_CASE("mutation preserves isolation") {
    Rng rng(13);
    for (int it = 0; it < 50; ++it) {
        Quiver q = qmtest::random_quiver(rng, 6, 3);
        for (Vertex x : q.support())
            for (Vertex v = 1; v <= 9; ++v)
                CHECK(q.is_isolated(v) == mutate(q, x).is_isolated(v));
    }
}

TEST_CASE("property predicates") {
    SUBCASE("finiteness is structural") {
        CHECK(check_property(kMarkov, PropertyKind::finite()) == Tri::Yes);
    }
    SUBCASE("connectedness ignores isolated vertices") {
        CHECK(check_property(Quiver(), PropertyKind::connected()) == Tri::Yes);
        CHECK(check_property(kMarkov, PropertyKind::connected()) == Tri::Yes);
        Quiver two = Quiver::from_arrows({{1, 2, 1}, {4, 5, 1}});
        CHECK(check_property(two, PropertyKind::connected()) == Tri::No);
    }
    SUBCASE("acyclicity via positive-arrow cycle search") {
        CHECK(check_property(kThreeCycle, PropertyKind::acyclic()) == Tri::No);
        CHECK(check_property(mutate(kThreeCycle, 2), PropertyKind::acyclic()) == Tri::Yes);
    }
    SUBCASE("abundance on the support") {
        CHECK(check_property(kMarkov, PropertyKind::abundant()) == Tri::Yes);
        CHECK(check_property(kThreeCycle, PropertyKind::abundant()) == Tri::No);
        CHECK(check_property(Quiver(), PropertyKind::abundant()) == Tri::Yes);
    }
    SUBCASE("weights") {
        CHECK(check_property(kMarkov, PropertyKind::has_weight_in({2})) == Tri::Yes);
        CHECK(check_property(kMarkov, PropertyKind::has_weight_in({3, 4})) == Tri::No);
        CHECK(check_property(kMarkov, PropertyKind::has_weight_in({0})) == Tri::Yes);
    }
    SUBCASE("bounded mutation-acyclicity never lies") {
        CHECK(check_property(kMarkov, PropertyKind::mutation_acyclic_within(6)) == Tri::Unknown);
        CHECK(check_property(kThreeCycle, PropertyKind::mutation_acyclic_within(1)) == Tri::Yes);
        CHECK(check_property(kThreeCycle, PropertyKind::mutation_acyclic_within(0)) == Tri::Unknown);
    }
    SUBCASE("bounded tameness") {
        Quiver wild = Quiver::from_arrows({{1, 2, 3}});
        CHECK(check_property(wild, PropertyKind::tame_within(0)) == Tri::No);
        CHECK(check_property(kMarkov, PropertyKind::tame_within(4)) == Tri::Unknown);
        Quiver cyc_weighted = Quiver::from_arrows({{1, 2, 2}, {2, 3, 2}, {3, 1, 1}});
        CHECK(check_property(cyc_weighted, PropertyKind::tame_within(2)) == Tri::No);
    }
}

TEST_CASE("isomorphism search") {
    CHECK(is_isomorphic(kMarkov, mutate(kMarkov, 1)).has_value());
    Quiver p1 = Quiver::from_arrows({{1, 2, 1}, {2, 3, 1}});
    Quiver p2 = Quiver::from_arrows({{1, 2, 1}, {3, 2, 1}});
    CHECK(!is_isomorphic(p1, p2).has_value());
    auto id = is_isomorphic(kMarkov, kMarkov);
    REQUIRE(id.has_value());
    for (const auto& [a, b] : *id) CHECK(a == b);
    SUBCASE("found bijections really are isomorphisms") {
        Rng rng(3);
        for (int it = 0; it < 60; ++it) {
            Quiver q = qmtest::random_quiver(rng, 6, 3);
            Quiver m = mutate(q, qmtest::rand_int(rng, 1, 6));
            auto f = is_isomorphic(q, m);
            if (!f) continue;
            for (Vertex x : q.support())
                for (Vertex y : q.support())
                    CHECK(m.count(f->at(x), f->at(y)) == q.count(x, y));
        }
    }
}

TEST_CASE("fork detection") {
    CHECK(!fork_point(kMarkov).has_value());
    CHECK(!fork_point(qn_abundant(3)).has_value()); // acyclic, so no fork
    CHECK(fork_point(mutate(qn_abundant(3), 2)) == std::optional<Vertex>(2));
}

TEST_CASE("fork growth under mutation away from the return") {
    Rng rng(17);
    for (int it = 0; it < 60; ++it) {
        int n = qmtest::rand_int(rng, 3, 6);
        Quiver q = qmtest::random_abundant_acyclic(rng, n);
        auto order = acyclic_order(q, q.support());
        REQUIRE(order.has_value());
        // skip the unique source and sink
        Vertex k = (*order)[static_cast<std::size_t>(qmtest::rand_int(rng, 1, n - 2))];
        Quiver f = mutate(q, k);
        CHECK(fork_point(f) == std::optional<Vertex>(k));
        CHECK(f.total_arrows() > q.total_arrows());

        Vertex r = k;
        std::vector<Vertex> candidates;
        for (Vertex v : f.support())
            if (v != r) candidates.push_back(v);
        Vertex k2 = candidates[static_cast<std::size_t>(
            qmtest::rand_int(rng, 0, static_cast<int>(candidates.size()) - 1))];
        Quiver f2 = mutate(f, k2);
        CHECK(fork_point(f2) == std::optional<Vertex>(k2));
        CHECK(f2.total_arrows() > f.total_arrows());
    }
}

TEST_CASE("acyclic order") {
    Quiver q3 = qn_abundant(3);
    auto order = acyclic_order(q3, q3.support());
    REQUIRE(order.has_value());
    CHECK(*order == std::vector<Vertex>{4, 3, 2, 1});

    Quiver cyc = Quiver::from_arrows({{1, 2, 2}, {2, 3, 2}, {3, 1, 2}});
    CHECK(!acyclic_order(cyc, cyc.support()).has_value());

    Quiver two = Quiver::from_arrows({{2, 1, 3}});
    auto o2 = acyclic_order(two, {1, 2});
    REQUIRE(o2.has_value());
    CHECK(*o2 == std::vector<Vertex>{2, 1});

    CHECK_THROWS_AS(acyclic_order(kThreeCycle, {1, 2, 3}), AbundanceViolation);
}

TEST_CASE("acyclic-order shift at a fork") {
    Rng rng(23);
    for (int it = 0; it < 60; ++it) {
        int n = qmtest::rand_int(rng, 3, 6);
        Quiver base = qmtest::random_abundant_acyclic(rng, n);
        auto base_order = acyclic_order(base, base.support());
        Vertex mid = (*base_order)[static_cast<std::size_t>(qmtest::rand_int(rng, 1, n - 2))];
        Quiver f = mutate(base, mid);
        Vertex r = *fork_point(f);

        VertexSet complement = f.support();
        complement.erase(r);
        auto order = acyclic_order(f, complement);
        REQUIRE(order.has_value());
        int j = qmtest::rand_int(rng, 0, static_cast<int>(order->size()) - 1);
        Vertex vj = (*order)[static_cast<std::size_t>(j)];

        Quiver f2 = mutate(f, vj);
        VertexSet complement2 = f2.support();
        complement2.erase(vj);
        auto order2 = acyclic_order(f2, complement2);
        REQUIRE(order2.has_value());

        std::vector<Vertex> expected;
        if (f.count(r, vj) > 0) {
            expected.push_back(r);
            for (std::size_t t = 0; t < order->size(); ++t)
                if (static_cast<int>(t) != j) expected.push_back((*order)[t]);
        } else {
            for (std::size_t t = 0; t < order->size(); ++t)
                if (static_cast<int>(t) != j) expected.push_back((*order)[t]);
            expected.push_back(r);
        }
        CHECK(*order2 == expected);
    }
}

TEST_CASE("prime-power encoding") {
    SUBCASE("h folds the integers onto the nonnegative integers") {
        CHECK(h_fold(0) == 0);
        CHECK(h_fold(1) == 2);
        CHECK(h_fold(-1) == 1);
        std::set<Int> seen;
        for (long long t = -1000; t <= 1000; ++t) {
            Int u = h_fold(Int(t));
            CHECK(u >= 0);
            CHECK(seen.insert(u).second);
            CHECK(h_unfold(u) == t);
        }
    }
    SUBCASE("worked encodings") {
        CHECK(lf_encode(Quiver(), 3) == std::vector<Int>{1, 1, 1});
        CHECK(lf_encode(Quiver::from_arrows({{1, 2, 1}}), 2) == std::vector<Int>{4, 1});
        CHECK(lf_encode(Quiver::from_arrows({{1, 2, -1}}), 1) == std::vector<Int>{2});
    }
    SUBCASE("decode inverts on the window") {
        Rng rng(31);
        for (int it = 0; it < 60; ++it) {
            Quiver q = qmtest::random_quiver(rng, 10, 4);
            int window = qmtest::rand_int(rng, 1, 10);
            Quiver back = lf_decode(lf_encode(q, window));
            for (Vertex i = 1; i <= window; ++i)
                for (Vertex j = i + 1; j <= 12; ++j) CHECK(back.count(i, j) == q.count(i, j));
        }
    }
    SUBCASE("malformed codes are rejected") {
        CHECK_THROWS_AS(lf_decode({Int(0)}), MalformedCode);
        CHECK_THROWS_AS(lf_decode({Int(-4)}), MalformedCode);
    }
}

TEST_CASE("window generators extend one another") {
    for (int n = 1; n <= 20; n += 3)
        CHECK(restrict_to(a_infinity_window(40), qmtest::range_set(1, n)) == a_infinity_window(n));
}

TEST_CASE("serialization is canonical and ordered") {
    Quiver q = Quiver::from_arrows({{2, 7, -1}, {1, 3, 2}});
    CHECK(q.serialize() == "{\"arrows\":[[1,3,2],[2,7,-1]]}");
    CHECK(Quiver().serialize() == "{\"arrows\":[]}");
}
