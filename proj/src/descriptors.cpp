#include "qm/descriptors.hpp"
#include "qm/errors.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#include <json.hpp>

namespace qm {

namespace detail {

class DescriptorImpl {
public:
    virtual ~DescriptorImpl() = default;
    virtual std::optional<Word> block(long long k) const = 0;
    virtual Occurrence occurrences(Vertex v) const = 0;
    virtual InfiniteLetterSet infinite_letters() const { return {}; }
    virtual std::optional<long long> total_length() const { return std::nullopt; }
    virtual std::optional<VertexSet> alphabet() const { return std::nullopt; }
    virtual std::optional<Vertex> min_letter_at_or_after(long long) const { return std::nullopt; }
    virtual std::optional<bool> reduction_is_infinite() const { return std::nullopt; }
    virtual std::string json() const = 0;
};

namespace {

long long triangular(long long n) { return n * (n + 1) / 2; }

std::string word_json(const Word& w) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << ',';
        os << w[i];
    }
    os << ']';
    return os.str();
}

class PrefixImpl final : public DescriptorImpl {
public:
    explicit PrefixImpl(Word w) : word_(std::move(w)) {}

    std::optional<Word> block(long long k) const override {
        if (k == 1 && !word_.empty()) return word_;
        return std::nullopt;
    }
    Occurrence occurrences(Vertex v) const override {
        return {false, static_cast<long long>(std::count(word_.begin(), word_.end(), v))};
    }
    std::optional<long long> total_length() const override {
        return static_cast<long long>(word_.size());
    }
    std::optional<VertexSet> alphabet() const override {
        return VertexSet(word_.begin(), word_.end());
    }
    std::optional<Vertex> min_letter_at_or_after(long long pos) const override {
        if (pos < 1) pos = 1;
        if (static_cast<std::size_t>(pos) > word_.size()) return std::nullopt;
        return *std::min_element(word_.begin() + pos - 1, word_.end());
    }
    std::optional<bool> reduction_is_infinite() const override { return false; }
    std::string json() const override {
        return "{\"kind\":\"prefix\",\"word\":" + word_json(word_) + "}";
    }

private:
    Word word_;
};

class ShiftedRayImpl final : public DescriptorImpl {
public:
    explicit ShiftedRayImpl(Vertex k0) : k0_(k0) {}

    std::optional<Word> block(long long k) const override { return Word{static_cast<Vertex>(k0_ + k - 1)}; }
    Occurrence occurrences(Vertex v) const override { return {false, v >= k0_ ? 1LL : 0LL}; }
    std::optional<Vertex> min_letter_at_or_after(long long pos) const override {
        return static_cast<Vertex>(k0_ + std::max<long long>(pos, 1) - 1);
    }
    std::optional<bool> reduction_is_infinite() const override { return true; }
    std::string json() const override {
        if (k0_ == 1) return "{\"kind\":\"generator\",\"id\":\"identity_ray\",\"params\":{}}";
        return "{\"kind\":\"generator\",\"id\":\"shifted_ray\",\"params\":{\"k\":" +
               std::to_string(k0_) + "}}";
    }

private:
    Vertex k0_;
};

class PairBlocksImpl final : public DescriptorImpl {
public:
    std::optional<Word> block(long long k) const override {
        return Word{static_cast<Vertex>(k), static_cast<Vertex>(k)};
    }
    Occurrence occurrences(Vertex v) const override { return {false, v >= 1 ? 2LL : 0LL}; }
    std::optional<Vertex> min_letter_at_or_after(long long pos) const override {
        return static_cast<Vertex>((std::max<long long>(pos, 1) + 1) / 2);
    }
    std::optional<bool> reduction_is_infinite() const override { return false; }
    std::string json() const override {
        return "{\"kind\":\"generator\",\"id\":\"pair_blocks\",\"params\":{}}";
    }
};

// Block n is the palindrome pair over [tri(n-1)+1, tri(n)], ascending then
// descending; it occupies positions [2 tri(n-1)+1, 2 tri(n)].
class TriangularPalindromesImpl final : public DescriptorImpl {
public:
    std::optional<Word> block(long long n) const override {
        Word w;
        for (long long v = triangular(n - 1) + 1; v <= triangular(n); ++v)
            w.push_back(static_cast<Vertex>(v));
        for (long long v = triangular(n); v >= triangular(n - 1) + 1; --v)
            w.push_back(static_cast<Vertex>(v));
        return w;
    }
    Occurrence occurrences(Vertex v) const override { return {false, v >= 1 ? 2LL : 0LL}; }
    std::optional<Vertex> min_letter_at_or_after(long long pos) const override {
        pos = std::max<long long>(pos, 1);
        long long n = 1;
        while (2 * triangular(n) < pos) ++n;
        return static_cast<Vertex>(triangular(n - 1) + 1);
    }
    std::optional<bool> reduction_is_infinite() const override { return false; }
    std::string json() const override {
        return "{\"kind\":\"generator\",\"id\":\"triangular_palindromes\",\"params\":{}}";
    }
};

class RepeatImpl final : public DescriptorImpl {
public:
    explicit RepeatImpl(Vertex i) : i_(i) {}

    std::optional<Word> block(long long) const override { return Word{i_}; }
    Occurrence occurrences(Vertex v) const override {
        if (v == i_) return {true, 0};
        return {false, 0};
    }
    InfiniteLetterSet infinite_letters() const override { return {false, {i_}}; }
    std::optional<VertexSet> alphabet() const override { return VertexSet{i_}; }
    std::optional<Vertex> min_letter_at_or_after(long long) const override { return i_; }
    std::string json() const override {
        return "{\"kind\":\"generator\",\"id\":\"repeat\",\"params\":{\"i\":" + std::to_string(i_) +
               "}}";
    }

private:
    Vertex i_;
};

class InducedImpl final : public DescriptorImpl {
public:
    InducedImpl(std::shared_ptr<const DescriptorImpl> base, VertexSet keep)
        : base_(std::move(base)), keep_(std::move(keep)) {}

    std::optional<Word> block(long long k) const override {
        auto b = base_->block(k);
        if (!b) return std::nullopt;
        Word w;
        for (Vertex x : *b)
            if (keep_.count(x)) w.push_back(x);
        return w;
    }
    Occurrence occurrences(Vertex v) const override {
        return keep_.count(v) ? base_->occurrences(v) : Occurrence{false, 0};
    }
    InfiniteLetterSet infinite_letters() const override {
        InfiniteLetterSet base = base_->infinite_letters();
        InfiniteLetterSet out;
        for (Vertex v : keep_)
            if (base.members.count(v) || (base.is_infinite_set && base_->occurrences(v).infinite))
                out.members.insert(v);
        return out;
    }
    std::optional<long long> total_length() const override {
        long long total = 0;
        for (Vertex v : keep_) {
            Occurrence o = base_->occurrences(v);
            if (o.infinite) return std::nullopt;
            total += o.count;
        }
        return total;
    }
    std::optional<VertexSet> alphabet() const override { return keep_; }
    std::string json() const override {
        Word keep(keep_.begin(), keep_.end());
        return "{\"kind\":\"induced\",\"keep\":" + word_json(keep) + ",\"base\":" + base_->json() +
               "}";
    }

private:
    std::shared_ptr<const DescriptorImpl> base_;
    VertexSet keep_;
};

// Filter by complement of a finite set; only safe to stream when the base
// has a finite alphabet or genuinely infinite support outside `drop`.
class ComplementImpl final : public DescriptorImpl {
public:
    ComplementImpl(std::shared_ptr<const DescriptorImpl> base, VertexSet drop)
        : base_(std::move(base)), drop_(std::move(drop)) {}

    std::optional<Word> block(long long k) const override {
        auto b = base_->block(k);
        if (!b) return std::nullopt;
        Word w;
        for (Vertex x : *b)
            if (!drop_.count(x)) w.push_back(x);
        return w;
    }
    Occurrence occurrences(Vertex v) const override {
        return drop_.count(v) ? Occurrence{false, 0} : base_->occurrences(v);
    }
    InfiniteLetterSet infinite_letters() const override {
        InfiniteLetterSet base = base_->infinite_letters();
        InfiniteLetterSet out{base.is_infinite_set, {}};
        for (Vertex v : base.members)
            if (!drop_.count(v)) out.members.insert(v);
        return out;
    }
    std::optional<long long> total_length() const override {
        if (auto a = base_->alphabet()) {
            long long total = 0;
            for (Vertex v : *a) {
                if (drop_.count(v)) continue;
                Occurrence o = base_->occurrences(v);
                if (o.infinite) return std::nullopt;
                total += o.count;
            }
            return total;
        }
        return std::nullopt;
    }
    std::optional<VertexSet> alphabet() const override {
        if (auto a = base_->alphabet()) {
            VertexSet out;
            for (Vertex v : *a)
                if (!drop_.count(v)) out.insert(v);
            return out;
        }
        return std::nullopt;
    }
    std::string json() const override {
        Word drop(drop_.begin(), drop_.end());
        return "{\"kind\":\"complement\",\"drop\":" + word_json(drop) +
               ",\"base\":" + base_->json() + "}";
    }

private:
    std::shared_ptr<const DescriptorImpl> base_;
    VertexSet drop_;
};

class SuffixImpl final : public DescriptorImpl {
public:
    SuffixImpl(std::shared_ptr<const DescriptorImpl> base, long long start)
        : base_(std::move(base)), start_(std::max<long long>(start, 1)) {
        // Locate the base block containing position start_ and count the
        // dropped occurrences per letter.
        constexpr long long kBlockScanCap = 2000000;
        long long seen = 0;
        for (long long k = 1;; ++k) {
            if (k > kBlockScanCap)
                throw HorizonTooSmall("suffix start lies beyond the block scan budget");
            auto b = base_->block(k);
            if (!b) {
                first_block_ = k; // past the end; suffix is empty
                first_offset_ = 0;
                break;
            }
            if (seen + static_cast<long long>(b->size()) >= start_) {
                first_block_ = k;
                first_offset_ = static_cast<std::size_t>(start_ - 1 - seen);
                for (std::size_t i = 0; i < first_offset_; ++i) ++dropped_[(*b)[i]];
                break;
            }
            seen += static_cast<long long>(b->size());
            for (Vertex x : *b) ++dropped_[x];
        }
    }

    std::optional<Word> block(long long k) const override {
        auto b = base_->block(first_block_ + k - 1);
        if (!b) return std::nullopt;
        if (k == 1 && first_offset_ > 0)
            return Word(b->begin() + static_cast<long long>(first_offset_), b->end());
        return b;
    }
    Occurrence occurrences(Vertex v) const override {
        Occurrence o = base_->occurrences(v);
        if (o.infinite) return o;
        auto it = dropped_.find(v);
        if (it != dropped_.end()) o.count -= it->second;
        return o;
    }
    InfiniteLetterSet infinite_letters() const override { return base_->infinite_letters(); }
    std::optional<long long> total_length() const override {
        auto t = base_->total_length();
        if (!t) return std::nullopt;
        return std::max<long long>(0, *t - (start_ - 1));
    }
    std::optional<VertexSet> alphabet() const override { return base_->alphabet(); }
    std::optional<Vertex> min_letter_at_or_after(long long pos) const override {
        return base_->min_letter_at_or_after(start_ - 1 + std::max<long long>(pos, 1));
    }
    std::string json() const override {
        return "{\"kind\":\"suffix\",\"from\":" + std::to_string(start_) +
               ",\"base\":" + base_->json() + "}";
    }

private:
    std::shared_ptr<const DescriptorImpl> base_;
    long long start_;
    long long first_block_ = 1;
    std::size_t first_offset_ = 0;
    std::map<Vertex, long long> dropped_;
};

// Irreducible words strung together per the collision-avoiding schedule.
// Finite families are materialized eagerly (a stuck pending word is rebuilt
// with a different leading element); infinite families schedule lazily into
// a memoized cache, so descriptors sharing this impl are single-consumer.
class FamilyConcatImpl final : public DescriptorImpl {
public:
    explicit FamilyConcatImpl(Family family) : family_(std::move(family)) {
        if (!family_.is_infinite) {
            while (draw_one()) {
            }
            while (!pending_.empty()) schedule_next();
            materialized_ = true;
        }
    }

    std::optional<Word> block(long long k) const override {
        while (static_cast<long long>(blocks_.size()) < k) {
            if (materialized_ && pending_.empty()) return std::nullopt;
            schedule_next();
        }
        return blocks_[static_cast<std::size_t>(k - 1)];
    }

    Occurrence occurrences(Vertex v) const override {
        if (materialized_) {
            long long c = 0;
            for (const Word& b : blocks_) c += std::count(b.begin(), b.end(), v);
            return {false, c};
        }
        // Infinite family: every set containing v has index <= member_bound(v),
        // and lazily scheduled words use the deterministic ascending build.
        long long bound = family_.member_bound(v);
        long long c = 0;
        for (long long n = 1; n <= bound; ++n) {
            auto s = family_.set_at(n);
            if (!s || !s->count(v)) continue;
            Word j = irreducible_word_for(*s);
            c += std::count(j.begin(), j.end(), v);
        }
        return {false, c};
    }

    std::optional<long long> total_length() const override {
        if (!materialized_) return std::nullopt;
        long long t = 0;
        for (const Word& b : blocks_) t += static_cast<long long>(b.size());
        return t;
    }
    std::optional<VertexSet> alphabet() const override {
        if (!materialized_) return std::nullopt;
        VertexSet a;
        for (const Word& b : blocks_) a.insert(b.begin(), b.end());
        return a;
    }
    std::optional<Vertex> min_letter_at_or_after(long long pos) const override {
        if (!materialized_) return std::nullopt;
        pos = std::max<long long>(pos, 1);
        std::optional<Vertex> best;
        long long at = 0;
        for (const Word& b : blocks_)
            for (Vertex x : b) {
                ++at;
                if (at >= pos && (!best || x < *best)) best = x;
            }
        return best;
    }
    std::optional<bool> reduction_is_infinite() const override {
        // The schedule is reduced by construction, so R^omega is the word itself.
        return family_.is_infinite;
    }
    std::string json() const override {
        std::ostringstream os;
        os << "{\"kind\":\"generator\",\"id\":\"family_concat\",\"params\":{\"sets\":[";
        if (materialized_) {
            for (std::size_t i = 0; i < drawn_.size(); ++i) {
                if (i) os << ',';
                os << word_json(Word(drawn_[i].begin(), drawn_[i].end()));
            }
        } else {
            os << "\"infinite\"";
        }
        os << "]}}";
        return os.str();
    }

private:
    bool draw_one() const {
        auto s = family_.set_at(static_cast<long long>(drawn_.size()) + 1);
        if (!s) return false;
        if (s->empty()) throw NotAntichain("family sets must be nonempty");
        for (Vertex v : *s)
            if (static_cast<long long>(drawn_.size()) + 1 > family_.member_bound(v))
                throw InfiniteMembership("set index exceeds member_bound(" + std::to_string(v) + ")");
        for (const VertexSet& t : drawn_)
            if (std::includes(t.begin(), t.end(), s->begin(), s->end()) ||
                std::includes(s->begin(), s->end(), t.begin(), t.end()))
                throw NotAntichain("family sets must be pairwise incomparable");
        drawn_.push_back(*s);
        pending_.push_back(drawn_.size() - 1);
        return true;
    }

    void schedule_next() const {
        constexpr long long kDrawCap = 100000;
        while (true) {
            for (std::size_t p = 0; p < pending_.size(); ++p) {
                const VertexSet& s = drawn_[pending_[p]];
                Word j = irreducible_word_for(s);
                if (last_letter_ == 0 || j.front() != last_letter_) {
                    emit(j);
                    pending_.erase(pending_.begin() + static_cast<long long>(p));
                    return;
                }
            }
            if (!materialized_ && draw_one()) {
                if (static_cast<long long>(drawn_.size()) > kDrawCap)
                    throw InfiniteMembership("family scheduling stalled");
                continue;
            }
            // Family exhausted with every pending word colliding: rebuild one
            // with a different leading element. A colliding singleton would
            // contradict the antichain hypothesis.
            for (std::size_t p = 0; p < pending_.size(); ++p) {
                const VertexSet& s = drawn_[pending_[p]];
                if (s.size() < 2) continue;
                std::vector<Vertex> order(s.begin(), s.end());
                std::swap(order[0], order[1]);
                Word j = irreducible_word_for(order);
                assert(j.front() != last_letter_);
                emit(j);
                pending_.erase(pending_.begin() + static_cast<long long>(p));
                return;
            }
            throw NotAntichain("colliding singleton set");
        }
    }

    void emit(const Word& j) const {
        blocks_.push_back(j);
        last_letter_ = j.back();
    }

    Family family_;
    mutable std::vector<VertexSet> drawn_;
    mutable std::vector<std::size_t> pending_;
    mutable std::vector<Word> blocks_;
    mutable Vertex last_letter_ = 0;
    mutable bool materialized_ = false;
};

} // namespace
} // namespace detail

using detail::DescriptorImpl;

std::optional<Word> SequenceDescriptor::block(long long k) const { return impl_->block(k); }
Occurrence SequenceDescriptor::occurrences(Vertex v) const { return impl_->occurrences(v); }
InfiniteLetterSet SequenceDescriptor::infinite_letters() const { return impl_->infinite_letters(); }
bool SequenceDescriptor::has_infinite_letters() const {
    InfiniteLetterSet s = impl_->infinite_letters();
    return s.is_infinite_set || !s.members.empty();
}
std::optional<long long> SequenceDescriptor::total_length() const { return impl_->total_length(); }
std::optional<VertexSet> SequenceDescriptor::alphabet() const { return impl_->alphabet(); }
std::optional<Vertex> SequenceDescriptor::min_letter_at_or_after(long long pos) const {
    return impl_->min_letter_at_or_after(pos);
}
std::optional<bool> SequenceDescriptor::reduction_is_infinite() const {
    return impl_->reduction_is_infinite();
}
std::string SequenceDescriptor::to_json() const { return impl_->json(); }

SequenceDescriptor SequenceDescriptor::prefix(Word w) {
    return SequenceDescriptor(std::make_shared<detail::PrefixImpl>(std::move(w)));
}
SequenceDescriptor SequenceDescriptor::identity_ray() {
    return SequenceDescriptor(std::make_shared<detail::ShiftedRayImpl>(1));
}
SequenceDescriptor SequenceDescriptor::shifted_ray(Vertex k) {
    return SequenceDescriptor(std::make_shared<detail::ShiftedRayImpl>(k));
}
SequenceDescriptor SequenceDescriptor::pair_blocks() {
    return SequenceDescriptor(std::make_shared<detail::PairBlocksImpl>());
}
SequenceDescriptor SequenceDescriptor::triangular_palindromes() {
    return SequenceDescriptor(std::make_shared<detail::TriangularPalindromesImpl>());
}
SequenceDescriptor SequenceDescriptor::repeat(Vertex i) {
    return SequenceDescriptor(std::make_shared<detail::RepeatImpl>(i));
}
SequenceDescriptor SequenceDescriptor::induced(const VertexSet& keep) const {
    return SequenceDescriptor(std::make_shared<detail::InducedImpl>(impl_, keep));
}
SequenceDescriptor SequenceDescriptor::induced_complement(const VertexSet& drop) const {
    // Rewrite through the alphabet when it is finite so that streaming can
    // detect exhaustion.
    if (auto a = impl_->alphabet()) {
        VertexSet keep;
        for (Vertex v : *a)
            if (!drop.count(v)) keep.insert(v);
        return SequenceDescriptor(std::make_shared<detail::InducedImpl>(impl_, keep));
    }
    return SequenceDescriptor(std::make_shared<detail::ComplementImpl>(impl_, drop));
}
SequenceDescriptor SequenceDescriptor::suffix_from(long long pos) const {
    return SequenceDescriptor(std::make_shared<detail::SuffixImpl>(impl_, pos));
}

LetterStream::LetterStream(SequenceDescriptor d) : d_(std::move(d)) {
    remaining_ = d_.total_length();
}

std::optional<Vertex> LetterStream::next() {
    if (done_) return std::nullopt;
    if (remaining_ && *remaining_ <= 0) {
        done_ = true;
        return std::nullopt;
    }
    constexpr long long kEmptyBlockBudget = 2000000;
    long long scanned = 0;
    while (offset_ >= current_.size()) {
        auto b = d_.block(++block_index_);
        if (!b) {
            done_ = true;
            return std::nullopt;
        }
        current_ = std::move(*b);
        offset_ = 0;
        if (++scanned > kEmptyBlockBudget)
            throw HorizonTooSmall("filtered stream yielded no letters within the scan budget");
    }
    ++position_;
    if (remaining_) --*remaining_;
    return current_[offset_++];
}

TakenPrefix take(const SequenceDescriptor& d, long long n) {
    TakenPrefix out;
    LetterStream s(d);
    for (long long i = 0; i < n; ++i) {
        auto x = s.next();
        if (!x) {
            out.exhausted = true;
            return out;
        }
        out.letters.push_back(*x);
    }
    // Peek one further letter to learn whether the horizon covers everything.
    out.exhausted = !s.next().has_value();
    return out;
}

StreamReduction stream_reduce(const SequenceDescriptor& d, long long horizon) {
    if (d.has_infinite_letters())
        throw InfiniteOccurrence("reduction is defined only when every letter occurs finitely often");

    TakenPrefix prefix = take(d, horizon);
    std::map<Vertex, long long> consumed;
    Word stack;
    for (Vertex x : prefix.letters) {
        ++consumed[x];
        if (!stack.empty() && stack.back() == x)
            stack.pop_back();
        else
            stack.push_back(x);
    }

    StreamReduction out;
    out.exhausted = prefix.exhausted;
    out.letters_consumed = static_cast<long long>(prefix.letters.size());

    std::size_t frozen_len = 0;
    if (prefix.exhausted) {
        frozen_len = stack.size();
    } else {
        // Any position whose letter has no future occurrence can never be
        // cancelled, which pins everything below it as well.
        for (std::size_t p = stack.size(); p > 0; --p) {
            Occurrence o = d.occurrences(stack[p - 1]);
            long long remaining = o.count - consumed[stack[p - 1]];
            if (remaining == 0) {
                frozen_len = p;
                break;
            }
        }
    }
    out.frozen.assign(stack.begin(), stack.begin() + static_cast<long long>(frozen_len));
    out.live_suffix.assign(stack.begin() + static_cast<long long>(frozen_len), stack.end());
    out.certified_length = static_cast<long long>(out.frozen.size());
    return out;
}

VertexSet convex_hull(const SequenceDescriptor& d, Vertex i, long long horizon) {
    Occurrence o = d.occurrences(i);
    if (o.infinite) throw HorizonTooSmall("letter recurs infinitely often");
    if (o.count == 0) return {};

    TakenPrefix prefix = take(d, horizon);
    long long first = -1, last = -1, seen = 0;
    for (std::size_t p = 0; p < prefix.letters.size(); ++p)
        if (prefix.letters[p] == i) {
            if (first < 0) first = static_cast<long long>(p);
            last = static_cast<long long>(p);
            ++seen;
        }
    if (seen < o.count)
        throw HorizonTooSmall("last occurrence of " + std::to_string(i) + " lies beyond the horizon");
    VertexSet hull;
    for (long long p = first; p <= last; ++p)
        hull.insert(prefix.letters[static_cast<std::size_t>(p)]);
    return hull;
}

Tri is_linked(const SequenceDescriptor& d, const VertexSet& s, long long horizon) {
    StreamReduction r = stream_reduce(d.induced(s), horizon);
    if (!r.frozen.empty()) return Tri::Yes;
    if (r.exhausted) return Tri::No;
    return Tri::Unknown;
}

std::vector<VertexSet> minimal_linked_supersets(const SequenceDescriptor& d, Vertex i,
                                                long long horizon, std::size_t hull_cap) {
    VertexSet hull = convex_hull(d, i, horizon);
    if (hull.empty()) return {};
    if (hull.size() > hull_cap)
        throw HullTooLarge("hull has " + std::to_string(hull.size()) + " vertices, cap " +
                           std::to_string(hull_cap));

    std::vector<Vertex> others;
    for (Vertex v : hull)
        if (v != i) others.push_back(v);

    std::vector<VertexSet> linked;
    for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
        VertexSet s{i};
        for (std::size_t b = 0; b < others.size(); ++b)
            if (mask & (std::size_t{1} << b)) s.insert(others[b]);
        Tri verdict = is_linked(d, s, horizon);
        if (verdict == Tri::Unknown)
            throw HorizonTooSmall("linkedness of a hull subset is not certifiable");
        if (verdict == Tri::Yes) linked.push_back(std::move(s));
    }

    std::vector<VertexSet> minimal;
    for (const VertexSet& s : linked) {
        bool is_min = true;
        for (const VertexSet& t : linked)
            if (t != s && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                is_min = false;
                break;
            }
        if (is_min) minimal.push_back(s);
    }
    for (const VertexSet& s : minimal)
        assert(std::includes(hull.begin(), hull.end(), s.begin(), s.end()));
    return minimal;
}

Family Family::from_sets(std::vector<VertexSet> sets) {
    auto shared = std::make_shared<std::vector<VertexSet>>(std::move(sets));
    Family f;
    f.set_at = [shared](long long n) -> std::optional<VertexSet> {
        if (n < 1 || n > static_cast<long long>(shared->size())) return std::nullopt;
        return (*shared)[static_cast<std::size_t>(n - 1)];
    };
    f.member_bound = [shared](Vertex) { return static_cast<long long>(shared->size()); };
    f.is_infinite = false;
    return f;
}

SequenceDescriptor build_sequence_from_family(const Family& family) {
    return SequenceDescriptor(std::make_shared<detail::FamilyConcatImpl>(family));
}

SequenceDescriptor family_concat(std::vector<VertexSet> sets) {
    return build_sequence_from_family(Family::from_sets(std::move(sets)));
}

NormalFormResult normal_form_subset(const SequenceDescriptor& d, int count, long long horizon) {
    if (d.has_infinite_letters())
        throw InfiniteOccurrence("normal form requires finitely recurring letters");

    TakenPrefix prefix = take(d, horizon);
    const Word& w = prefix.letters;
    if (!is_reduced(w)) throw UnreducedWord("descriptor is not reduced on the inspected window");

    std::map<Vertex, long long> first_pos, last_pos, seen;
    for (std::size_t p = 0; p < w.size(); ++p) {
        if (!first_pos.count(w[p])) first_pos[w[p]] = static_cast<long long>(p) + 1;
        last_pos[w[p]] = static_cast<long long>(p) + 1;
        ++seen[w[p]];
    }
    auto exhausted_in_horizon = [&](Vertex v) {
        Occurrence o = d.occurrences(v);
        return !o.infinite && seen[v] == o.count;
    };

    NormalFormResult out;
    long long pos = 1;
    while (static_cast<int>(out.sets.size()) < count) {
        bool advanced = false;
        for (long long p = pos; p <= static_cast<long long>(w.size()) && !advanced; ++p) {
            Vertex i = w[static_cast<std::size_t>(p - 1)];
            if (first_pos[i] != p) continue; // consider each letter at its first occurrence
            std::vector<VertexSet> candidates;
            try {
                candidates = minimal_linked_supersets(d, i, horizon);
            } catch (const DomainError&) {
                continue; // not certifiable for this letter; try the next one
            }
            for (const VertexSet& s : candidates) {
                long long end = 0;
                bool ok = true;
                for (Vertex v : s) {
                    if (!exhausted_in_horizon(v) || first_pos[v] < pos) {
                        ok = false;
                        break;
                    }
                    end = std::max(end, last_pos[v]);
                }
                if (!ok) continue;
                StreamReduction r = stream_reduce(d.induced(s), horizon);
                if (r.frozen.empty()) continue;
                out.sets.push_back(s);
                out.segments.push_back(r.frozen);
                out.boundaries.push_back(end);
                out.s.insert(s.begin(), s.end());
                pos = end + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced)
            throw ExhaustedHorizon("only " + std::to_string(out.sets.size()) + " of " +
                                   std::to_string(count) + " disjoint minimal linked sets found");
    }

    // The chosen sets must be pairwise disjoint with nonempty segments.
    for (std::size_t a = 0; a < out.sets.size(); ++a) {
        assert(!out.segments[a].empty());
        for (std::size_t b = a + 1; b < out.sets.size(); ++b) {
            VertexSet inter;
            std::set_intersection(out.sets[a].begin(), out.sets[a].end(), out.sets[b].begin(),
                                  out.sets[b].end(), std::inserter(inter, inter.begin()));
            assert(inter.empty());
        }
    }
    return out;
}

namespace {

VertexSet set_from_json(const nlohmann::json& j) {
    VertexSet s;
    for (const auto& v : j) s.insert(v.get<Vertex>());
    return s;
}

} // namespace

SequenceDescriptor descriptor_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "prefix") {
        Word w;
        for (const auto& v : j.at("word")) w.push_back(v.get<Vertex>());
        return SequenceDescriptor::prefix(std::move(w));
    }
    if (kind != "generator") throw MalformedCode("unknown descriptor kind: " + kind);
    std::string id = j.at("id").get<std::string>();
    nlohmann::json params = j.value("params", nlohmann::json::object());
    if (id == "identity_ray") return SequenceDescriptor::identity_ray();
    if (id == "shifted_ray") return SequenceDescriptor::shifted_ray(params.at("k").get<Vertex>());
    if (id == "pair_blocks") return SequenceDescriptor::pair_blocks();
    if (id == "triangular_palindromes") return SequenceDescriptor::triangular_palindromes();
    if (id == "repeat") return SequenceDescriptor::repeat(params.at("i").get<Vertex>());
    if (id == "family_concat") {
        std::vector<VertexSet> sets;
        for (const auto& s : params.at("sets")) sets.push_back(set_from_json(s));
        return family_concat(std::move(sets));
    }
    throw MalformedCode("unknown generator id: " + id);
}

} // namespace qm
