#ifndef QM_FRAMING_HPP
#define QM_FRAMING_HPP

#include "qm/quiver.hpp"
#include "qm/words.hpp"

namespace qm {

enum class Color { Green, Red };

const char* to_string(Color c);

struct CVector {
    std::map<Vertex, Int> entries; // indexed by mutable vertices
    friend bool operator==(const CVector&, const CVector&) = default;
};

// A quiver carrying one frozen companion per mutable vertex. The companion
// of x is stored as -x, so mutable/frozen status is structural and mutation
// at a frozen vertex is impossible by construction.
class FramedQuiver {
public:
    FramedQuiver() = default;
    FramedQuiver(Quiver base, VertexSet mutables)
        : base_(std::move(base)), mutable_(std::move(mutables)) {}

    const Quiver& base() const { return base_; }
    const VertexSet& mutables() const { return mutable_; }
    bool is_mutable(Vertex v) const { return mutable_.count(v) > 0; }

    // The quiver among mutable vertices only (frozen companions dropped).
    Quiver mutable_part() const;

    friend bool operator==(const FramedQuiver&, const FramedQuiver&) = default;

private:
    Quiver base_;
    VertexSet mutable_;
};

// Framing of q: mutables = support(q), one arrow x -> x' per mutable x.
FramedQuiver frame(const Quiver& q);

// Mutation at a mutable vertex; FrozenMutation otherwise. Asserts that no
// arrow between two frozen vertices arises (that would witness a sign
// incoherence).
FramedQuiver mutate_framed(const FramedQuiver& fq, Vertex v);
FramedQuiver mutate_framed_word(const FramedQuiver& fq, const Word& w);

// c_{x,y} = arrows from x to the frozen companion of y.
CVector c_vector(const FramedQuiver& fq, Vertex x);

// Green iff every entry >= 0, Red iff every entry <= 0; a mixed or zero
// vector raises SignIncoherence.
Color color(const FramedQuiver& fq, Vertex x);

// The abundant acyclic quiver on [n+1] with exactly 2 arrows i -> j for all
// i > j; acyclic order n+1 < n < ... < 1.
Quiver qn_abundant(int n);

// First appearances of w respect the acyclic order of q (sink end first).
// Throws NotAbundantAcyclic when q is not abundant acyclic on its support.
bool is_triangular(const Word& w, const Quiver& q);

// Triangular and every support vertex except `excluded` is used.
bool is_strongly_triangular(const Word& w, const Quiver& q, Vertex excluded);

// The stabilized c-vector of n+1 over qn_abundant(n): 2*3^(n-i) at i <= n
// and 1 at n+1.
CVector stabilized_c_vector(int n);

struct OffdiagWitness {
    Quiver quiver;   // qn_abundant(max letter) relabeled so w is triangular
    Vertex vertex;   // index of a strictly positive c-vector entry
    Int entry;       // the entry itself, computed by framed mutation
    CVector cvector; // full c-vector of the witness vertex n+1
};

// The c-vector witness behind the gluing construction: for a nontrivial
// reduced w on [n] (n = max letter), a quiver on [n+1] whose vertex n+1 has
// a strictly positive c-vector entry after mutating along w.
OffdiagWitness offdiag_witness(const Word& w);

// Same construction over an arbitrary support with an explicit junction
// vertex in place of n+1.
OffdiagWitness offdiag_witness_over(const Word& w, Vertex junction);

} // namespace qm

#endif // QM_FRAMING_HPP
