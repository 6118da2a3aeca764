#include "qm/framing.hpp"
#include "qm/errors.hpp"

#include <algorithm>
#include <cassert>

namespace qm {

const char* to_string(Color c) { return c == Color::Green ? "green" : "red"; }

Quiver FramedQuiver::mutable_part() const {
    Quiver out;
    for (const auto& [k, m] : base_.entries())
        if (k.first > 0 && k.second > 0) out.set(k.first, k.second, m);
    return out;
}

FramedQuiver frame(const Quiver& q) {
    Quiver base = q;
    VertexSet mutables = q.support();
    for (Vertex x : mutables) base.set(x, -x, 1);
    return FramedQuiver(std::move(base), std::move(mutables));
}

FramedQuiver mutate_framed(const FramedQuiver& fq, Vertex v) {
    if (!fq.is_mutable(v))
        throw FrozenMutation("vertex " + std::to_string(v) + " is not mutable");
    Quiver next = mutate(fq.base(), v);
    for (const auto& [k, m] : next.entries())
        if (k.first < 0 && k.second < 0)
            throw SignIncoherence("mutation created an arrow between frozen vertices");
    return FramedQuiver(std::move(next), fq.mutables());
}

FramedQuiver mutate_framed_word(const FramedQuiver& fq, const Word& w) {
    FramedQuiver cur = fq;
    for (Vertex v : w) cur = mutate_framed(cur, v);
    return cur;
}

CVector c_vector(const FramedQuiver& fq, Vertex x) {
    if (!fq.is_mutable(x))
        throw FrozenMutation("c-vectors are attached to mutable vertices");
    CVector c;
    for (Vertex y : fq.mutables()) c.entries[y] = fq.base().count(x, -y);
    return c;
}

Color color(const FramedQuiver& fq, Vertex x) {
    CVector c = c_vector(fq, x);
    bool has_pos = false, has_neg = false;
    for (const auto& [y, e] : c.entries) {
        if (e > 0) has_pos = true;
        if (e < 0) has_neg = true;
    }
    if (has_pos && !has_neg) return Color::Green;
    if (has_neg && !has_pos) return Color::Red;
    throw SignIncoherence("c-vector of " + std::to_string(x) +
                          (has_pos ? " has mixed signs" : " vanished"));
}

Quiver qn_abundant(int n) {
    Quiver q;
    for (int i = 1; i <= n + 1; ++i)
        for (int j = 1; j < i; ++j) q.set(i, j, 2);
    return q;
}

namespace {

// Rank from the sink end: the acyclic order's maximum gets rank 1.
std::map<Vertex, int> sink_ranks(const Quiver& q) {
    VertexSet supp = q.support();
    if (!is_abundant_on_support(q))
        throw NotAbundantAcyclic("quiver is not abundant on its support");
    auto order = acyclic_order(q, supp);
    if (!order) throw NotAbundantAcyclic("quiver is not acyclic");
    std::map<Vertex, int> rank;
    int n = static_cast<int>(order->size());
    for (int k = 0; k < n; ++k) rank[(*order)[static_cast<std::size_t>(k)]] = n - k;
    return rank;
}

} // namespace

bool is_triangular(const Word& w, const Quiver& q) {
    std::map<Vertex, int> rank = sink_ranks(q);
    int last_rank = 0;
    VertexSet seen;
    for (Vertex x : w) {
        if (!rank.count(x)) return false; // letter outside the vertex set
        if (seen.insert(x).second) {
            if (rank[x] <= last_rank) return false;
            last_rank = rank[x];
        }
    }
    return true;
}

bool is_strongly_triangular(const Word& w, const Quiver& q, Vertex excluded) {
    if (!is_triangular(w, q)) return false;
    VertexSet used(w.begin(), w.end());
    if (used.count(excluded)) return false;
    for (Vertex v : q.support())
        if (v != excluded && !used.count(v)) return false;
    return true;
}

CVector stabilized_c_vector(int n) {
    CVector c;
    Int p = 1;
    for (int i = n; i >= 1; --i) {
        c.entries[i] = 2 * p;
        p *= 3;
    }
    c.entries[n + 1] = 1;
    return c;
}

namespace {

// Complete doubled quiver with acyclic order junction < ... < sink_first[1]
// < sink_first[0]; sink_first lists vertices from the sink end downward.
OffdiagWitness witness_from_order(const Word& w, const std::vector<Vertex>& sink_first,
                                  Vertex junction) {
    Quiver q;
    for (std::size_t a = 0; a < sink_first.size(); ++a) {
        q.set(junction, sink_first[a], 2);
        for (std::size_t b = a + 1; b < sink_first.size(); ++b)
            q.set(sink_first[b], sink_first[a], 2);
    }
    assert(is_triangular(w, q));

    FramedQuiver fq = mutate_framed_word(frame(q), w);
    OffdiagWitness out;
    out.quiver = q;
    out.cvector = c_vector(fq, junction);
    out.vertex = 0;
    out.entry = 0;
    for (const auto& [y, e] : out.cvector.entries)
        if (y != junction && e > out.entry) {
            out.vertex = y;
            out.entry = e;
        }
    if (out.entry <= 0)
        throw SignIncoherence("witness produced no positive off-diagonal c-vector entry");
    return out;
}

// Distinct letters of w in order of first appearance.
std::vector<Vertex> first_appearances(const Word& w) {
    std::vector<Vertex> by_first;
    VertexSet seen;
    for (Vertex x : w)
        if (seen.insert(x).second) by_first.push_back(x);
    return by_first;
}

} // namespace

OffdiagWitness offdiag_witness_over(const Word& w, Vertex junction) {
    if (w.empty() || !is_reduced(w)) throw UnreducedWord("witness word must be nontrivial and reduced");
    if (std::find(w.begin(), w.end(), junction) != w.end())
        throw LetterCollision("junction vertex appears in the word");
    return witness_from_order(w, first_appearances(w), junction);
}

OffdiagWitness offdiag_witness(const Word& w) {
    if (w.empty() || !is_reduced(w)) throw UnreducedWord("witness word must be nontrivial and reduced");
    Vertex n = 0;
    for (Vertex x : w) {
        if (x < 1) throw UnreducedWord("letters must be positive");
        n = std::max(n, x);
    }
    // Relabeled qn_abundant(n): used letters at the sink end in first-
    // appearance order, unused letters of [n] below them, n+1 at the bottom.
    std::vector<Vertex> order = first_appearances(w);
    VertexSet used(w.begin(), w.end());
    for (Vertex v = 1; v <= n; ++v)
        if (!used.count(v)) order.push_back(v);
    return witness_from_order(w, order, n + 1);
}

} // namespace qm
