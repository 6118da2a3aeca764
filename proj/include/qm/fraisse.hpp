#ifndef QM_FRAISSE_HPP
#define QM_FRAISSE_HPP

#include "qm/quiver.hpp"
#include "qm/words.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace qm {

// Arrow counts of one fresh vertex relative to the base set and to earlier
// slots of the same extension.
struct ExtensionSlot {
    std::map<Vertex, Int> to_base;       // signed counts fresh -> base vertex
    std::map<std::size_t, Int> to_slot;  // signed counts fresh -> earlier slot
};

struct ExtensionSpec {
    std::vector<ExtensionSlot> slots;
    // Expected committed values on base pairs; a mismatch is a SpecConflict.
    std::map<std::pair<Vertex, Vertex>, Int> require_base;
};

// A lazily-committed fragment of the generic (homogeneous) quiver. Arrow
// counts are decided on demand: by realize_extension specs, or by seeded
// defaults when a pair is first inspected. Once decided, a pair's count
// never changes; realize_extension only ever extends the fragment.
class GenericQuiver {
public:
    explicit GenericQuiver(std::uint64_t seed, Vertex first_fresh = 1)
        : seed_(seed), next_fresh_(first_fresh) {}

    // The value of a pair, deciding it via the seeded default if needed.
    Int value(Vertex i, Vertex j);

    // Every decided pair among vertices < next_fresh().
    const Quiver& committed() const { return committed_; }
    Vertex next_fresh() const { return next_fresh_; }
    std::uint64_t seed() const { return seed_; }

    // Decide every pair inside [1..n] and return the committed restriction.
    Quiver window(Vertex n);

    // Allocate one fresh vertex per slot, realizing the given counts against
    // the committed values on base; arrows from fresh vertices to any other
    // existing vertex default to 0.
    std::vector<Vertex> realize_extension(const VertexSet& base, const ExtensionSpec& spec);

private:
    std::uint64_t seed_;
    Vertex next_fresh_;
    Quiver committed_;
    std::set<std::pair<Vertex, Vertex>> decided_;

    void decide(Vertex i, Vertex j, Int m);
};

struct PartialIso {
    std::vector<std::pair<Vertex, Vertex>> pairs; // sorted by source vertex
    int stage = 0;
};

// Nested partial isomorphisms f_1 c f_2 c ... c f_n between the generic
// fragment and its mutation at i, built back-and-forth: even stages extend
// the image side by the least unused vertex, odd stages the domain side,
// with the matching partner realized as a fresh vertex.
std::vector<PartialIso> back_and_forth(GenericQuiver& g, Vertex i, int stages);

struct SteerReport {
    Word word;
    std::vector<long long> stage_ends; // word length after each stage
    std::vector<bool> correction_stage;
};

// The steering word: after applying it to the fragment, the restriction to
// [1..n] equals the target's, and once a stage completes its window never
// moves again. Correction vertices are allocated strictly above everything
// previously touched.
SteerReport steer_toward(GenericQuiver& g, const Quiver& target, int radius);

// Replays a steering word against the committed fragment, checking exact
// window agreement and the monotone-agreement condition.
bool verify_steering(const GenericQuiver& g, const SteerReport& report, const Quiver& target,
                     int radius);

} // namespace qm

#endif // QM_FRAISSE_HPP
