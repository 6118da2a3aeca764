#ifndef QM_MUTCLASS_HPP
#define QM_MUTCLASS_HPP

#include "qm/quiver.hpp"

#include <string>
#include <vector>

namespace qm {

// Lexicographically least serialization over all compact relabelings of the
// support; the dedup key for iso classes at small sizes. Guarded for
// supports <= 9.
std::string canonical_form(const Quiver& q);

struct MutationClassNode {
    Quiver representative;      // member with the least canonical form
    long long members_found = 0; // iso classes discovered
    bool frontier_exhausted = false;
    bool weight_bound_hit = false;
    long long max_weight = 0;
    long long max_nodes = 0;
    std::vector<Quiver> members; // one representative per discovered iso class
    std::vector<std::pair<std::size_t, std::size_t>> edges; // single-mutation moves

    std::string to_json() const;
    std::string to_dot() const;
};

// BFS over single mutations up to isomorphism, stopping at the weight or
// node bound; frontier_exhausted iff the class closed under all mutations
// within bounds.
MutationClassNode explore_class(const Quiver& q, long long max_weight, long long max_nodes);

// Whether some explored member contains an induced copy of p up to
// isomorphism. No only when the class is exhausted. `p_one_vertex` marks the
// designated one-vertex quiver (which embeds into any nonempty member).
Tri class_embeds(const Quiver& p, const MutationClassNode& node, bool p_one_vertex = false);

// The map underlying the class-poset comparison: drop isolated vertices
// (which the sparse representation never stores), sending the arrowless
// quiver to the designated one-vertex quiver.
struct StrippedQuiver {
    Quiver quiver;
    bool one_vertex = false; // the arrowless case
};

StrippedQuiver strip_isolated(const Quiver& q);

struct PosetCheckReport {
    long long pairs_checked = 0;
    long long consistent = 0;
    std::vector<std::string> violations;
    bool passed() const { return violations.empty(); }
};

// For each (q, q') with q a full subquiver of q', verifies that
// class_embeds(strip(q), class of strip(q')) is not No within bounds.
PosetCheckReport poset_order_check(const std::vector<std::pair<Quiver, Quiver>>& samples,
                                   long long max_weight, long long max_nodes);

} // namespace qm

#endif // QM_MUTCLASS_HPP
