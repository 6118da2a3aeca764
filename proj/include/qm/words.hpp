#ifndef QM_WORDS_HPP
#define QM_WORDS_HPP

#include "qm/quiver.hpp"

#include <map>
#include <optional>
#include <vector>

namespace qm {

// A finite mutation word; unreduced words are allowed everywhere.
using Word = std::vector<Vertex>;

// One pass of the block reduction: split into maximal constant blocks,
// delete even-length blocks, collapse odd-length blocks to one letter.
Word one_step_reduce(const Word& w);

// Fixed point of one_step_reduce, computed by single-pass stack cancellation
// (push a letter, pop instead when it equals the current top). The block
// route is kept as the oracle in tests.
Word reduce_word(const Word& w);

bool is_reduced(const Word& w);

struct ReductionTrace {
    std::vector<Word> stages;          // R^0(w), R^1(w), ..., fixed point last
    std::optional<int> rank;           // nullopt encodes omega (never for finite words)
    std::map<Vertex, int> letter_rank; // i-rank per letter occurring in w
};

ReductionTrace reduction_trace(const Word& w);

// Letters outside `keep` removed, order preserved.
Word induced_word(const Word& w, const VertexSet& keep);

// Reduced, nonempty, and deleting all instances of any single letter
// collapses the word to empty.
bool is_irreducible(const Word& w);

// (w, i, reverse(w), i); requires w irreducible and i not appearing in w
// (LetterCollision otherwise). The result is asserted irreducible.
Word extend_irreducible(const Word& w, Vertex i);

// Deterministic irreducible word with support exactly `s`, built by repeated
// extension in the given insertion order (defaults to ascending).
Word irreducible_word_for(const VertexSet& s);
Word irreducible_word_for(const std::vector<Vertex>& insertion_order);

} // namespace qm

#endif // QM_WORDS_HPP
