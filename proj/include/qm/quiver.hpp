#ifndef QM_QUIVER_HPP
#define QM_QUIVER_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qm {

// Arrow counts are exact arbitrary-precision integers; mutation chains grow
// them exponentially and fixed-width arithmetic would corrupt invariants.
using Int = boost::multiprecision::cpp_int;

using Vertex = int;
using VertexSet = std::set<Vertex>;

// A quiver without loops or oriented 2-cycles, stored as a sparse
// skew-symmetric integer function with finite support. count(i, j) is the
// signed number of arrows i -> j; only pairs with i < j and nonzero count
// are stored. Public quivers live on positive vertex labels; framed quivers
// reuse negative labels for frozen companions (see framing.hpp).
//
// Values are immutable once built: every operation below returns a new
// quiver and never touches its inputs.
class Quiver {
public:
    using Key = std::pair<Vertex, Vertex>;
    using ArrowMap = std::map<Key, Int>;

    Quiver() = default;

    // Arrow triples (i, j, m), any order of endpoints, m added signed.
    static Quiver from_arrows(const std::vector<std::tuple<Vertex, Vertex, long long>>& arrows);

    Int count(Vertex i, Vertex j) const;
    void set(Vertex i, Vertex j, Int m);
    void add(Vertex i, Vertex j, const Int& dm);

    const ArrowMap& entries() const { return arrows_; }
    bool is_empty() const { return arrows_.empty(); }

    VertexSet support() const;
    bool is_isolated(Vertex v) const;
    Int total_arrows() const; // sum of |count| over stored pairs
    Int max_weight() const;   // max |count|, 0 when empty

    // Labeled canonical text, "{\"arrows\":[[i,j,m],...]}" sorted by (i, j).
    // Doubles as the canonical JSON form.
    std::string serialize() const;

    friend bool operator==(const Quiver&, const Quiver&) = default;

private:
    ArrowMap arrows_;
};

// --- pointwise operators ---------------------------------------------------

// Mutation at v. Defined for any vertex; mutating an isolated vertex is the
// identity. Involutive: mutate(mutate(q, v), v) == q.
Quiver mutate(const Quiver& q, Vertex v);
Quiver mutate_word(const Quiver& q, const std::vector<Vertex>& word);

// Full subquiver: keep arrows with both endpoints in v.
Quiver restrict_to(const Quiver& q, const VertexSet& v);

// Overfull subquiver: keep arrows with at least one endpoint in v.
Quiver overfill(const Quiver& q, const VertexSet& v);

VertexSet support(const Quiver& q);

// --- property predicates ----------------------------------------------------

enum class Tri { Yes, No, Unknown };

const char* to_string(Tri t);

struct PropertyKind {
    enum class Tag {
        Finite,
        Connected,
        Acyclic,
        Abundant,
        HasWeightIn,
        MutationAcyclicWithin,
        TameWithin,
    };

    Tag tag = Tag::Finite;
    std::set<long long> weights; // HasWeightIn only, nonempty
    int depth = 0;               // bounded searches only, >= 0

    static PropertyKind finite() { return {Tag::Finite, {}, 0}; }
    static PropertyKind connected() { return {Tag::Connected, {}, 0}; }
    static PropertyKind acyclic() { return {Tag::Acyclic, {}, 0}; }
    static PropertyKind abundant() { return {Tag::Abundant, {}, 0}; }
    static PropertyKind has_weight_in(std::set<long long> s) { return {Tag::HasWeightIn, std::move(s), 0}; }
    static PropertyKind mutation_acyclic_within(int d) { return {Tag::MutationAcyclicWithin, {}, d}; }
    static PropertyKind tame_within(int d) { return {Tag::TameWithin, {}, d}; }
};

// Decidable tags answer Yes/No exactly; the bounded searches return Yes or
// Unknown (mutation-acyclicity) resp. No or Unknown (tameness), never a
// false definite answer.
Tri check_property(const Quiver& q, const PropertyKind& p);

// Connectedness per the convention that isolated vertices do not count as
// extra components; exposed separately because several modules use it.
bool is_connected(const Quiver& q);
bool is_acyclic(const Quiver& q);
bool is_abundant_on_support(const Quiver& q);

// --- isomorphism ------------------------------------------------------------

using VertexBijection = std::map<Vertex, Vertex>;

// Support-to-support bijection f with b(f(x), f(y)) == a(x, y), or nullopt.
// Degree-profile pruning plus backtracking; intended for supports <= 10.
std::optional<VertexBijection> is_isomorphic(const Quiver& a, const Quiver& b);

// --- fork machinery ---------------------------------------------------------

// The unique point of return r of a fork (conditions (F1)-(F2) on the
// support), or nullopt when q is not a fork.
std::optional<Vertex> fork_point(const Quiver& q);

// The unique linear order x < y iff count(x, y) > 0 on v, listed ascending,
// when restrict_to(q, v) is abundant and acyclic; nullopt when cyclic.
// Throws AbundanceViolation when some pair in v is joined by fewer than two
// arrows.
std::optional<std::vector<Vertex>> acyclic_order(const Quiver& q, const VertexSet& v);

// --- the prime-power window encoding -----------------------------------------

// h: Z -> Z>=0, h(t) = 2t for t >= 0 and -2t-1 otherwise; h(0) = 0.
Int h_fold(const Int& t);
Int h_unfold(const Int& u);

// L(Q)(i) = prod_k p_k^{h(Q(i, i+k))} for i = 1..n.
std::vector<Int> lf_encode(const Quiver& q, int n);

// Inverse on the encoded window: recovers every pair (i, j) with i <= n.
// Throws MalformedCode on nonpositive or unfactorable entries.
Quiver lf_decode(const std::vector<Int>& prefix);

// --- window generators --------------------------------------------------------

// Rule producing restrict(Q, [1..n]) of a fixed infinite quiver; larger
// windows extend smaller ones.
using QuiverWindowFn = std::function<Quiver(int)>;

// The type A-infinity ray 1 -> 2 -> 3 -> ... truncated to [1..n].
Quiver a_infinity_window(int n);

// The two-sided ray of the restriction/overfill example: vertex `center` has
// one arrow to every other vertex of [1..n], ascending arrows right of the
// center and descending arrows left of it.
Quiver two_sided_ray_window(int n, int center);

// DOT export: one node per support vertex, one edge per stored pair oriented
// by sign, labeled with the multiplicity.
std::string to_dot(const Quiver& q);

} // namespace qm

#endif // QM_QUIVER_HPP
