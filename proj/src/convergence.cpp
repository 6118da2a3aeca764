#include "qm/convergence.hpp"
#include "qm/errors.hpp"
#include "qm/framing.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace qm {

Trajectory::Trajectory(Quiver initial, SequenceDescriptor d)
    : initial_(std::move(initial)), current_(initial_), desc_(std::move(d)), stream_(desc_) {}

void Trajectory::step(long long k) {
    for (long long i = 0; i < k; ++i) {
        auto x = stream_.next();
        if (!x) throw DescriptorExhausted("descriptor ended at step " + std::to_string(cursor_));
        current_ = mutate(current_, *x);
        ++cursor_;
    }
}

std::string Certificate::to_json() const {
    std::ostringstream os;
    os << "{\"mode\":\"" << (mode == CertMode::Weak ? "weak" : "strong") << "\",\"window\":[";
    bool first = true;
    for (Vertex v : window) {
        if (!first) os << ',';
        first = false;
        os << v;
    }
    os << "],\"status\":\"";
    switch (status) {
        case Status::StableSince: os << "stable_since\",\"since\":" << stable_since; break;
        case Status::OscillationWitness: os << "oscillation\",\"k1\":" << k1 << ",\"k2\":" << k2; break;
        case Status::Inconclusive: os << "inconclusive\""; break;
    }
    os << ",\"horizon\":" << horizon << "}";
    return os.str();
}

namespace {

Vertex max_support(const Quiver& q) {
    VertexSet s = q.support();
    return s.empty() ? 0 : *s.rbegin();
}

// True when every letter at positions > horizon provably cannot touch the
// trajectory: either there are none, or they all exceed the initial support
// (mutation never enlarges the support, so they stay isolated forever).
bool tail_certified(const SequenceDescriptor& d, long long horizon, Vertex support_bound) {
    if (auto t = d.total_length(); t && *t <= horizon) return true;
    if (auto ml = d.min_letter_at_or_after(horizon + 1)) return *ml > support_bound;
    return false;
}

Certificate run_certificate(const Trajectory& t, const VertexSet& window, long long horizon,
                            CertMode mode) {
    Certificate cert;
    cert.mode = mode;
    cert.window = window;
    cert.horizon = horizon;

    auto snapshot = [&](const Quiver& q) {
        return mode == CertMode::Weak ? restrict_to(q, window) : overfill(q, window);
    };

    Trajectory run(t.initial(), t.descriptor());
    Quiver prev = snapshot(run.current());
    long long last_change = 0;
    bool exhausted = false;
    for (long long j = 1; j <= horizon; ++j) {
        try {
            run.step();
        } catch (const DescriptorExhausted&) {
            exhausted = true;
            break;
        }
        Quiver cur = snapshot(run.current());
        if (cur != prev) last_change = j;
        prev = std::move(cur);
    }
    cert.limit_view = prev;

    if (exhausted || tail_certified(t.descriptor(), horizon, max_support(t.initial()))) {
        cert.status = Certificate::Status::StableSince;
        cert.stable_since = last_change;
    } else if (last_change > 0) {
        cert.status = Certificate::Status::OscillationWitness;
        cert.k1 = last_change - 1;
        cert.k2 = last_change;
    } else {
        cert.status = Certificate::Status::Inconclusive;
    }
    return cert;
}

} // namespace

Certificate weak_certificate(const Trajectory& t, const VertexSet& window, long long horizon) {
    return run_certificate(t, window, horizon, CertMode::Weak);
}

Certificate strong_certificate(const Trajectory& t, const VertexSet& window, long long horizon) {
    // Finite-support initial quivers keep every overfill finite; a window
    // generator whose overfill were infinite would have to fail here.
    return run_certificate(t, window, horizon, CertMode::Strong);
}

const char* to_string(LfVerdict v) {
    switch (v) {
        case LfVerdict::AllConverge: return "all_converge";
        case LfVerdict::BothDense: return "both_dense";
        case LfVerdict::CNotDense: return "c_not_dense";
        default: return "unknown";
    }
}

std::string LfClassification::to_json() const {
    std::ostringstream os;
    os << "{\"verdict\":\"" << to_string(verdict) << "\"";
    if (verdict == LfVerdict::CNotDense)
        os << ",\"divergence_dense\":\"" << to_string(divergence_dense) << "\"";
    if (!note.empty()) os << ",\"note\":\"" << note << "\"";
    os << "}";
    return os.str();
}

LfClassification classify_lf(const SequenceDescriptor& d, long long horizon) {
    LfClassification out;
    InfiniteLetterSet s_inf = d.infinite_letters();

    if (s_inf.is_infinite_set || !s_inf.members.empty()) {
        out.verdict = LfVerdict::CNotDense;
        if (s_inf.is_infinite_set) {
            out.divergence_dense = Tri::Yes;
            out.note = "infinitely many vertices recur infinitely often";
            return out;
        }
        SequenceDescriptor comp = d.induced_complement(s_inf.members);
        if (auto t = comp.total_length()) {
            out.divergence_dense = Tri::No;
            out.note = "complement subsequence is finite (" + std::to_string(*t) + " letters)";
        } else if (auto r = comp.reduction_is_infinite()) {
            out.divergence_dense = *r ? Tri::Yes : Tri::No;
        } else {
            out.divergence_dense = Tri::Unknown;
            out.note = "complement reduction cardinality not certified";
        }
        return out;
    }

    out.reduction_sample = stream_reduce(d, horizon);
    if (auto r = d.reduction_is_infinite()) {
        out.verdict = *r ? LfVerdict::BothDense : LfVerdict::AllConverge;
        out.note = *r ? "reduction certified infinite" : "reduction certified finite";
    } else {
        out.verdict = LfVerdict::Unknown;
        out.note = "reduction cardinality not certified within the horizon";
    }
    return out;
}

// --- gadgets -------------------------------------------------------------------

AfGadgetReport af_divergence_gadget(const Quiver& q, const VertexSet& v,
                                    const SequenceDescriptor& d, long long run_steps) {
    AfGadgetReport rep;
    Vertex window_max = v.empty() ? 0 : *v.rbegin();
    Vertex base_max = std::max(window_max, max_support(q));

    InfiniteLetterSet s_inf = d.infinite_letters();
    if (s_inf.is_infinite_set || !s_inf.members.empty()) {
        // Easy branch: make an infinitely-mutated vertex non-isolated.
        if (s_inf.members.empty())
            throw GadgetInapplicable("infinitely recurring letters are not identified");
        rep.easy_branch = true;
        Vertex i = *s_inf.members.begin();
        rep.extended = q;
        if (q.is_isolated(i)) {
            Vertex j = std::max(base_max, i) + 1;
            if (auto a = d.alphabet()) j = std::max(j, a->empty() ? j : *a->rbegin() + 1);
            rep.extended.set(i, j, 1);
            rep.probe_a = std::min(i, j);
            rep.probe_b = std::max(i, j);
        } else {
            VertexSet nb;
            for (const auto& [k, m] : q.entries()) {
                if (k.first == i) nb.insert(k.second);
                if (k.second == i) nb.insert(k.first);
            }
            rep.probe_a = std::min(i, *nb.begin());
            rep.probe_b = std::max(i, *nb.begin());
        }
    } else {
        // Star battery: find the tail whose letters exceed N + 2, then place
        // the battery with probes N+1, N+2 and one star vertex per tail
        // letter met inside the verification run.
        if (auto t = d.total_length())
            throw GadgetInapplicable("finite sequences converge on every quiver");
        Vertex N = base_max;
        long long tail = -1;
        for (long long pos = 1; pos <= 1 << 20; pos = pos < 16 ? pos + 1 : pos * 2) {
            auto ml = d.min_letter_at_or_after(pos);
            if (!ml) break;
            if (*ml > N + 2) {
                tail = pos;
                break;
            }
        }
        if (tail < 0) throw GadgetInapplicable("no certified tail beyond the window");
        rep.tail_start = tail;
        rep.probe_a = N + 1;
        rep.probe_b = N + 2;

        TakenPrefix prefix = take(d, tail - 1 + run_steps);
        Quiver star;
        for (long long p = tail - 1; p < static_cast<long long>(prefix.letters.size()); ++p) {
            Vertex u = prefix.letters[static_cast<std::size_t>(p)];
            star.set(rep.probe_a, u, 1);
            star.set(u, rep.probe_b, 1);
        }
        if (star.is_empty()) throw GadgetInapplicable("verification run meets no tail letters");
        // Pre-mutate by the reversed prefix so the battery is intact when the
        // tail begins.
        Word pre(prefix.letters.begin(), prefix.letters.begin() + (tail - 1));
        std::reverse(pre.begin(), pre.end());
        Quiver star_pre = mutate_word(star, pre);
        rep.extended = q;
        for (const auto& [k, m] : star_pre.entries()) rep.extended.set(k.first, k.second, m);
    }

    // Construction-time window agreement, then the oscillation run.
    assert(restrict_to(rep.extended, v) == restrict_to(q, v));

    Trajectory t(rep.extended, d);
    if (rep.tail_start > 1) t.step(rep.tail_start - 1);
    VertexSet probes{rep.probe_a, rep.probe_b};
    Quiver prev = restrict_to(t.current(), probes);
    Quiver prev_window = restrict_to(t.current(), v);
    for (long long j = 0; j < run_steps; ++j) {
        try {
            t.step();
        } catch (const DescriptorExhausted&) {
            break;
        }
        Quiver cur = restrict_to(t.current(), probes);
        if (rep.easy_branch) {
            if (cur != prev) ++rep.verified_steps;
        } else {
            if (cur == prev)
                throw GadgetInapplicable("probe restriction failed to move at a tail step");
            ++rep.verified_steps;
            if (restrict_to(t.current(), v) != prev_window)
                throw GadgetInapplicable("protected restriction moved during the tail");
        }
        prev = std::move(cur);
    }
    if (rep.verified_steps == 0)
        throw GadgetInapplicable("no oscillation observed within the verification run");
    return rep;
}

LfGadgetReport lf_divergence_gadget(const SequenceDescriptor& d, const VertexSet& v,
                                    int segment_count, long long horizon) {
    if (d.has_infinite_letters())
        throw GadgetInapplicable("some letter recurs infinitely often");
    if (segment_count < 1) throw InsufficientSegments("need at least one segment");

    LfGadgetReport rep;
    Vertex N = v.empty() ? 0 : *v.rbegin();

    // Tail whose letters all exceed the protected window.
    long long tail = -1;
    if (auto ml = d.min_letter_at_or_after(1); ml && *ml > N) {
        tail = 1;
    } else {
        for (long long pos = 2; pos <= 1 << 20; pos = pos < 16 ? pos + 1 : pos * 2) {
            auto ml = d.min_letter_at_or_after(pos);
            if (!ml) break;
            if (*ml > N) {
                tail = pos;
                break;
            }
        }
    }
    if (tail < 0) throw GadgetInapplicable("no certified tail beyond the window");
    rep.tail_start = tail;

    SequenceDescriptor dtail = tail == 1 ? d : d.suffix_from(tail);
    NormalFormResult nf;
    try {
        nf = normal_form_subset(dtail, segment_count, horizon);
    } catch (const ExhaustedHorizon& e) {
        throw InsufficientSegments(e.what());
    }
    rep.sets = nf.sets;
    rep.segments = nf.segments;
    rep.boundaries = nf.boundaries;

    // Anchor and final junction above everything the run can meet.
    TakenPrefix prefix = take(dtail, std::max(horizon, nf.boundaries.back()));
    Vertex top = N;
    for (Vertex x : prefix.letters) top = std::max(top, x);
    for (Vertex x : nf.s) top = std::max(top, x);
    rep.anchor = top + 1;
    rep.tail_junction = top + 2;

    // One witness per segment; junction of segment k is the first letter of
    // segment k+1, so consecutive witnesses share exactly that vertex.
    Quiver g;
    Vertex p1 = 0;
    for (std::size_t k = 0; k < nf.segments.size(); ++k) {
        Vertex junction = (k + 1 < nf.segments.size()) ? nf.segments[k + 1].front() : rep.tail_junction;
        OffdiagWitness w = offdiag_witness_over(nf.segments[k], junction);
        for (const auto& [key, m] : w.quiver.entries()) g.add(key.first, key.second, m);
        if (k == 0) p1 = nf.segments[0].front();
    }
    g.set(p1, rep.anchor, 1);
    rep.gadget = g;

    // Postcondition run: the anchor's overfill changes across every segment
    // boundary, with strictly positive arrow counts into the anchor.
    Trajectory t(g, dtail);
    Quiver prev_overfill = overfill(t.current(), {rep.anchor});
    for (std::size_t k = 0; k < nf.boundaries.size(); ++k) {
        t.step(nf.boundaries[k] - t.cursor());
        Quiver cur_overfill = overfill(t.current(), {rep.anchor});
        if (cur_overfill == prev_overfill)
            throw GadgetInapplicable("anchor overfill failed to change at a segment boundary");
        Vertex next_tip = (k + 1 < nf.segments.size()) ? nf.segments[k + 1].front() : rep.tail_junction;
        Int into_anchor = t.current().count(next_tip, rep.anchor);
        if (into_anchor <= 0)
            throw GadgetInapplicable("anchor arrow count lost positivity at a boundary");
        rep.anchor_counts.push_back(into_anchor);
        prev_overfill = std::move(cur_overfill);
    }
    return rep;
}

} // namespace qm
