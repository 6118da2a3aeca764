#include "qm/words.hpp"
#include "qm/errors.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace qm {

Word one_step_reduce(const Word& w) {
    Word out;
    std::size_t i = 0;
    while (i < w.size()) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        if ((j - i) % 2 == 1) out.push_back(w[i]);
        i = j;
    }
    return out;
}

Word reduce_word(const Word& w) {
    Word stack;
    for (Vertex x : w) {
        if (!stack.empty() && stack.back() == x)
            stack.pop_back();
        else
            stack.push_back(x);
    }
    return stack;
}

bool is_reduced(const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] == w[i + 1]) return false;
    return true;
}

ReductionTrace reduction_trace(const Word& w) {
    ReductionTrace t;
    t.stages.push_back(w);
    while (true) {
        Word next = one_step_reduce(t.stages.back());
        if (next == t.stages.back()) break;
        t.stages.push_back(std::move(next));
    }
    t.rank = static_cast<int>(t.stages.size()) - 1;

    std::set<Vertex> letters(w.begin(), w.end());
    auto count_in = [](const Word& v, Vertex x) {
        return static_cast<int>(std::count(v.begin(), v.end(), x));
    };
    for (Vertex x : letters) {
        int final_count = count_in(t.stages.back(), x);
        int r = static_cast<int>(t.stages.size()) - 1;
        while (r > 0 && count_in(t.stages[static_cast<std::size_t>(r - 1)], x) == final_count) --r;
        t.letter_rank[x] = r;
    }
    return t;
}

Word induced_word(const Word& w, const VertexSet& keep) {
    Word out;
    for (Vertex x : w)
        if (keep.count(x)) out.push_back(x);
    return out;
}

bool is_irreducible(const Word& w) {
    if (w.empty() || !is_reduced(w)) return false;
    std::set<Vertex> letters(w.begin(), w.end());
    for (Vertex j : letters) {
        Word without;
        for (Vertex x : w)
            if (x != j) without.push_back(x);
        if (!reduce_word(without).empty()) return false;
    }
    return true;
}

Word extend_irreducible(const Word& w, Vertex i) {
    if (std::find(w.begin(), w.end(), i) != w.end())
        throw LetterCollision("letter " + std::to_string(i) + " already appears");
    if (!is_irreducible(w)) throw UnreducedWord("extension base must be irreducible");
    Word out = w;
    out.push_back(i);
    out.insert(out.end(), w.rbegin(), w.rend());
    out.push_back(i);
    assert(is_irreducible(out));
    return out;
}

Word irreducible_word_for(const std::vector<Vertex>& insertion_order) {
    if (insertion_order.empty()) throw std::invalid_argument("empty support");
    Word w{insertion_order.front()};
    for (std::size_t k = 1; k < insertion_order.size(); ++k)
        w = extend_irreducible(w, insertion_order[k]);
    return w;
}

Word irreducible_word_for(const VertexSet& s) {
    return irreducible_word_for(std::vector<Vertex>(s.begin(), s.end()));
}

} // namespace qm
