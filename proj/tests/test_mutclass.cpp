#include "qm/mutclass.hpp"
#include "qm/errors.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>

using namespace qm;
using qmtest::Rng;

namespace {

const Quiver kMarkov = Quiver::from_arrows({{1, 2, 2}, {2, 3, 2}, {3, 1, 2}});
const Quiver kA3 = Quiver::from_arrows({{1, 2, 1}, {2, 3, 1}});

} // namespace

TEST_CASE("canonical forms name iso classes") {
    Rng rng(401);
    for (int it = 0; it < 80; ++it) {
        Quiver a = qmtest::random_quiver(rng, 5, 2);
        Quiver b = qmtest::random_quiver(rng, 5, 2);
        CHECK((canonical_form(a) == canonical_form(b)) == is_isomorphic(a, b).has_value());
    }
    CHECK(canonical_form(kMarkov) == canonical_form(mutate(kMarkov, 2)));
}

TEST_CASE("exploring mutation classes") {
    SUBCASE("the Markov class is a single exhausted iso class") {
        MutationClassNode node = explore_class(kMarkov, 4, 50);
        CHECK(node.members_found == 1);
        CHECK(node.frontier_exhausted);
        CHECK(!node.weight_bound_hit);
    }
    SUBCASE("the A3 path closes after four iso classes") {
        MutationClassNode node = explore_class(kA3, 1, 50);
        CHECK(node.members_found == 4);
        CHECK(node.frontier_exhausted);
    }
    SUBCASE("the empty quiver is its own class") {
        MutationClassNode node = explore_class(Quiver(), 4, 50);
        CHECK(node.members_found == 1);
        CHECK(node.frontier_exhausted);
    }
    SUBCASE("node bounds flip the exhaustion flag") {
        MutationClassNode node = explore_class(kA3, 1, 2);
        CHECK(node.members_found == 2);
        CHECK(!node.frontier_exhausted);
    }
    SUBCASE("exploration is order-insensitive on exhausted classes") {
        MutationClassNode from_start = explore_class(kA3, 1, 50);
        for (const Quiver& member : from_start.members) {
            MutationClassNode other = explore_class(member, 1, 50);
            CHECK(other.members_found == from_start.members_found);
            CHECK(other.frontier_exhausted);
            CHECK(canonical_form(other.representative) ==
                  canonical_form(from_start.representative));
        }
    }
}

TEST_CASE("class embedding") {
    MutationClassNode a3 = explore_class(kA3, 1, 100);
    SUBCASE("a single vertex embeds anywhere") {
        CHECK(class_embeds(Quiver(), a3, true) == Tri::Yes);
    }
    SUBCASE("members embed into their own class") {
        Quiver triangle = Quiver::from_arrows({{1, 2, 1}, {2, 3, 1}, {3, 1, 1}});
        CHECK(class_embeds(triangle, a3) == Tri::Yes);
    }
    SUBCASE("the Markov quiver cannot embed into the A3 class") {
        CHECK(class_embeds(kMarkov, a3) == Tri::No);
    }
    SUBCASE("unexhausted classes answer Unknown") {
        MutationClassNode partial = explore_class(kA3, 1, 2);
        CHECK(class_embeds(kMarkov, partial) == Tri::Unknown);
    }
    SUBCASE("embedding is reflexive and transitive on exhausted classes") {
        Quiver a2 = Quiver::from_arrows({{1, 2, 1}});
        MutationClassNode a2_node = explore_class(a2, 1, 50);
        CHECK(class_embeds(a2, a2_node) == Tri::Yes);
        CHECK(class_embeds(a2, a3) == Tri::Yes);
        CHECK(class_embeds(kA3, a3) == Tri::Yes);

        // transitivity on a sampled chain p <= q <= r
        Rng rng(403);
        for (int it = 0; it < 10; ++it) {
            Quiver r = qmtest::random_quiver(rng, 4, 1, 0.7);
            VertexSet mid_set, small_set;
            for (Vertex v : r.support()) {
                if (qmtest::rand_int(rng, 0, 2)) mid_set.insert(v);
            }
            for (Vertex v : mid_set)
                if (qmtest::rand_int(rng, 0, 1)) small_set.insert(v);
            Quiver q = restrict_to(r, mid_set);
            Quiver p = restrict_to(q, small_set);
            MutationClassNode rc = explore_class(r, 3, 120);
            MutationClassNode qc = explore_class(q, 3, 120);
            if (class_embeds(p, qc) == Tri::Yes && class_embeds(q, rc) == Tri::Yes)
                CHECK(class_embeds(p, rc) != Tri::No);
        }
    }
}

TEST_CASE("stripping isolated vertices") {
    CHECK(strip_isolated(Quiver()).one_vertex);
    StrippedQuiver s = strip_isolated(Quiver::from_arrows({{3, 7, 1}}));
    CHECK(!s.one_vertex);
    CHECK(s.quiver == Quiver::from_arrows({{3, 7, 1}}));
    CHECK(strip_isolated(kMarkov).quiver == kMarkov);
    // idempotence
    CHECK(strip_isolated(s.quiver).quiver == s.quiver);
}

TEST_CASE("poset order checks") {
    SUBCASE("worked pairs") {
        std::vector<std::pair<Quiver, Quiver>> pairs{
            {Quiver(), kA3},                          // one-vertex into A3
            {Quiver::from_arrows({{1, 2, 1}}), kA3},  // A2 into A3
        };
        PosetCheckReport rep = poset_order_check(pairs, 3, 100);
        CHECK(rep.passed());
        CHECK(rep.consistent == 2);
    }
    SUBCASE("random induced-subquiver pairs are consistent") {
        Rng rng(402);
        std::vector<std::pair<Quiver, Quiver>> pairs;
        while (pairs.size() < 25) {
            Quiver big = qmtest::random_quiver(rng, 5, 1, 0.6);
            if (big.is_empty()) continue;
            VertexSet sub;
            for (Vertex v : big.support())
                if (qmtest::rand_int(rng, 0, 1)) sub.insert(v);
            pairs.push_back({restrict_to(big, sub), big});
        }
        PosetCheckReport rep = poset_order_check(pairs, 3, 120);
        CHECK(rep.passed());
    }
}
