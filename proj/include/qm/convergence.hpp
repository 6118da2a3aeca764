#ifndef QM_CONVERGENCE_HPP
#define QM_CONVERGENCE_HPP

#include "qm/descriptors.hpp"
#include "qm/quiver.hpp"

#include <string>
#include <vector>

namespace qm {

// Finite prefix of an infinite mutation sequence applied to a (window of a)
// quiver; current == the composite mutation of the consumed letters applied
// to the initial quiver.
class Trajectory {
public:
    Trajectory(Quiver initial, SequenceDescriptor d);

    // Apply k further mutations. DescriptorExhausted when the descriptor
    // runs out of letters.
    void step(long long k = 1);

    const Quiver& initial() const { return initial_; }
    const Quiver& current() const { return current_; }
    const SequenceDescriptor& descriptor() const { return desc_; }
    long long cursor() const { return cursor_; }

private:
    Quiver initial_;
    Quiver current_;
    SequenceDescriptor desc_;
    LetterStream stream_;
    long long cursor_ = 0;
};

enum class CertMode { Weak, Strong };

// Stabilization evidence for the window's restriction (weak) or overfill
// (strong) along a trajectory. StableSince requires a freeze justification:
// either the descriptor is exhausted within the horizon or every future
// letter provably exceeds the initial support (mutation never enlarges the
// support, so such letters stay isolated forever). OscillationWitness
// records observed non-stabilization; Inconclusive means no change was seen
// but the tail could not be certified.
struct Certificate {
    enum class Status { StableSince, OscillationWitness, Inconclusive };

    CertMode mode = CertMode::Weak;
    VertexSet window;
    Status status = Status::Inconclusive;
    long long stable_since = 0; // StableSince only
    long long k1 = -1, k2 = -1; // OscillationWitness: witness steps, snapshots differ
    long long horizon = 0;
    Quiver limit_view; // window restriction/overfill at the horizon

    std::string to_json() const;
};

Certificate weak_certificate(const Trajectory& t, const VertexSet& window, long long horizon);

// NotLocallyFiniteWindow when the window's overfill is not finite.
Certificate strong_certificate(const Trajectory& t, const VertexSet& window, long long horizon);

// --- the LF convergence/divergence classifier ----------------------------------

enum class LfVerdict { AllConverge, BothDense, CNotDense, Unknown };

const char* to_string(LfVerdict v);

struct LfClassification {
    LfVerdict verdict = LfVerdict::Unknown;
    Tri divergence_dense = Tri::Unknown; // meaningful for CNotDense only
    StreamReduction reduction_sample;    // present when no letter recurs infinitely
    std::string note;

    std::string to_json() const;
};

// Trichotomy on the descriptor: every quiver converges iff the reduction is
// finite and no letter recurs infinitely; convergence and divergence are
// both dense iff the reduction is infinite; convergence fails to be dense
// iff some letter recurs infinitely (divergence density then governed by
// the complement subsequence). Unknown when the registry metadata cannot
// certify the reduction's cardinality.
LfClassification classify_lf(const SequenceDescriptor& d, long long horizon);

// --- divergence gadgets ----------------------------------------------------------

struct AfGadgetReport {
    Quiver extended;   // Q' agreeing with q on the protected window
    Vertex probe_a = 0, probe_b = 0;
    bool easy_branch = false; // some letter recurs infinitely often
    long long tail_start = 1; // position from which the star battery is hit
    long long verified_steps = 0;
};

// A quiver agreeing with q on v whose window restriction provably fails to
// stabilize under d: either an arrow making an infinitely-mutated vertex
// non-isolated, or the star battery whose probes {N+1, N+2} change at every
// tail mutation. The star is materialized for the letters inside the
// verification run, which also asserts the oscillation.
AfGadgetReport af_divergence_gadget(const Quiver& q, const VertexSet& v,
                                    const SequenceDescriptor& d, long long run_steps = 50);

struct LfGadgetReport {
    Quiver gadget; // locally finite witness, disjoint from the protected window
    Vertex anchor = 0;
    Vertex tail_junction = 0;
    long long tail_start = 1;
    std::vector<VertexSet> sets;
    std::vector<Word> segments;
    std::vector<long long> boundaries; // tail positions where each set is exhausted
    std::vector<Int> anchor_counts;    // arrows into the anchor after each boundary
};

// Chained off-diagonal witnesses glued through junction vertices; mutating
// through d's tail changes the anchor's overfill across every segment
// boundary with strictly positive arrow counts into the anchor. Requires d
// reduced with no infinitely recurring letters; InsufficientSegments when
// fewer than segment_count disjoint minimal linked sets are certifiable.
LfGadgetReport lf_divergence_gadget(const SequenceDescriptor& d, const VertexSet& v,
                                    int segment_count, long long horizon);

} // namespace qm

#endif // QM_CONVERGENCE_HPP
