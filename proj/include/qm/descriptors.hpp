#ifndef QM_DESCRIPTORS_HPP
#define QM_DESCRIPTORS_HPP

#include "qm/words.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace qm {

struct Occurrence {
    bool infinite = false;
    long long count = 0;
};

struct InfiniteLetterSet {
    bool is_infinite_set = false; // true when S_infinity itself is infinite
    VertexSet members;            // exact members otherwise
};

namespace detail {
class DescriptorImpl;
}

struct Family;
class SequenceDescriptor;
SequenceDescriptor build_sequence_from_family(const Family& family);

// A finitely-describable (finite or infinite) mutation sequence, produced as
// a stream of finite blocks with per-vertex occurrence bookkeeping. Registry
// generators carry their occurrence oracles analytically; see the factory
// functions below for the registry ids. Descriptors are immutable and cheap
// to copy; streaming state lives in LetterStream.
class SequenceDescriptor {
public:
    // k-th finite block, 1-based; nullopt once the sequence is exhausted.
    // Blocks may be empty for derived (filtered) descriptors.
    std::optional<Word> block(long long k) const;

    Occurrence occurrences(Vertex v) const;
    InfiniteLetterSet infinite_letters() const;
    bool has_infinite_letters() const;

    // Exact length when the whole sequence is finite.
    std::optional<long long> total_length() const;

    // Superset of all letters ever occurring, when finitely describable.
    std::optional<VertexSet> alphabet() const;

    // Smallest letter occurring at any position >= pos (1-based); nullopt
    // when not analytically available.
    std::optional<Vertex> min_letter_at_or_after(long long pos) const;

    // Whether the reduction R^omega is infinite; analytic registry metadata,
    // nullopt when unknown. Meaningless (nullopt) when letters recur
    // infinitely often.
    std::optional<bool> reduction_is_infinite() const;

    std::string to_json() const;

    // registry
    static SequenceDescriptor prefix(Word w);
    static SequenceDescriptor identity_ray();
    static SequenceDescriptor shifted_ray(Vertex k);
    static SequenceDescriptor pair_blocks();
    static SequenceDescriptor triangular_palindromes();
    static SequenceDescriptor repeat(Vertex i);

    // derived views
    SequenceDescriptor induced(const VertexSet& keep) const;
    SequenceDescriptor induced_complement(const VertexSet& drop) const;
    SequenceDescriptor suffix_from(long long pos) const; // letters at positions >= pos

private:
    friend class LetterStream;
    friend SequenceDescriptor build_sequence_from_family(const Family& family);
    explicit SequenceDescriptor(std::shared_ptr<const detail::DescriptorImpl> impl)
        : impl_(std::move(impl)) {}
    std::shared_ptr<const detail::DescriptorImpl> impl_;
};

// Single-consumer cursor over a descriptor's letters.
class LetterStream {
public:
    explicit LetterStream(SequenceDescriptor d);
    std::optional<Vertex> next();
    long long position() const { return position_; } // letters yielded so far

private:
    SequenceDescriptor d_;
    long long block_index_ = 0;
    long long position_ = 0;
    Word current_;
    std::size_t offset_ = 0;
    bool done_ = false;
    std::optional<long long> remaining_;
};

struct TakenPrefix {
    Word letters;
    bool exhausted = false; // the descriptor ended within the request
};

// First min(n, length) letters.
TakenPrefix take(const SequenceDescriptor& d, long long n);

// --- stream reduction ---------------------------------------------------------

struct StreamReduction {
    Word frozen;                    // certified prefix of R^omega
    long long certified_length = 0; // == frozen.size()
    Word live_suffix;               // uncertified stack remainder
    bool exhausted = false;
    long long letters_consumed = 0;
};

// Stack cancellation over the first `horizon` letters. A stack position is
// certified frozen once the occurrence oracle reports no future instance of
// some letter at or above it; everything below such a position can never be
// cancelled. Extending the horizon never changes a certified prefix.
// Throws InfiniteOccurrence when some letter recurs infinitely often.
StreamReduction stream_reduce(const SequenceDescriptor& d, long long horizon);

// Letters appearing between the first and last occurrence of i, inclusive.
// Empty when i never occurs; HorizonTooSmall when i's occurrences are not
// certainly contained in the horizon.
VertexSet convex_hull(const SequenceDescriptor& d, Vertex i, long long horizon);

// Linkedness of s with respect to d: Yes when the certified reduction of the
// induced subsequence is nonempty, No when the induced stream is exhausted
// with empty reduction, Unknown otherwise.
Tri is_linked(const SequenceDescriptor& d, const VertexSet& s, long long horizon);

// Inclusion-minimal linked subsets of conv_hull(d, i) containing i.
// HullTooLarge above the exhaustive-search cap; HorizonTooSmall when some
// candidate's linkedness cannot be certified within the horizon.
std::vector<VertexSet> minimal_linked_supersets(const SequenceDescriptor& d, Vertex i,
                                                long long horizon, std::size_t hull_cap = 20);

// --- sequences from linking families -------------------------------------------

// An antichain of finite vertex sets, possibly infinite, with a per-vertex
// membership bound (sets containing v all have index <= member_bound(v)).
struct Family {
    std::function<std::optional<VertexSet>(long long)> set_at; // 1-based; nullopt = exhausted
    std::function<long long(Vertex)> member_bound;
    bool is_infinite = false;

    static Family from_sets(std::vector<VertexSet> sets);
};

// Strings together irreducible words, one per family set, skipping (and
// revisiting later) any word whose first letter would collide with the
// current last letter. The resulting descriptor is reduced and its minimal
// linked sets are exactly the family. Throws NotAntichain / InfiniteMembership.
SequenceDescriptor build_sequence_from_family(const Family& family);

// Registry id `family_concat`: the same construction for an explicit list.
SequenceDescriptor family_concat(std::vector<VertexSet> sets);

// Parse {"kind":"prefix",...} / {"kind":"generator",...} descriptor JSON.
SequenceDescriptor descriptor_from_json(const std::string& text);

// --- the normal-form subset (disjoint minimal linked sets) ---------------------

struct NormalFormResult {
    VertexSet s;                       // union of the chosen sets
    std::vector<VertexSet> sets;       // pairwise disjoint minimal linked sets
    std::vector<Word> segments;        // certified reductions of the induced subsequences
    std::vector<long long> boundaries; // position by which each set is exhausted
};

// Greedy left-to-right selection of `count` pairwise disjoint finite minimal
// linked sets with their reduced segments. Requires d reduced on the
// inspected window (UnreducedWord) and no infinitely recurring letters;
// ExhaustedHorizon when fewer than `count` sets are certifiable.
NormalFormResult normal_form_subset(const SequenceDescriptor& d, int count, long long horizon);

} // namespace qm

#endif // QM_DESCRIPTORS_HPP
