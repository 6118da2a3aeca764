#include "qm/fraisse.hpp"
#include "qm/errors.hpp"

#include <algorithm>
#include <cassert>

namespace qm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Int pos_part(const Int& a) { return a > 0 ? a : Int(0); }

} // namespace

void GenericQuiver::decide(Vertex i, Vertex j, Int m) {
    auto key = i < j ? std::pair{i, j} : std::pair{j, i};
    assert(!decided_.count(key));
    decided_.insert(key);
    committed_.set(i, j, std::move(m));
    next_fresh_ = std::max(next_fresh_, std::max(i, j) + 1);
}

Int GenericQuiver::value(Vertex i, Vertex j) {
    if (i == j) return 0;
    auto key = i < j ? std::pair{i, j} : std::pair{j, i};
    if (!decided_.count(key)) {
        // Seeded default in [-2, 2], independent of query order.
        std::uint64_t h = splitmix64(seed_ ^ splitmix64((std::uint64_t(std::uint32_t(key.first)) << 32) |
                                                        std::uint64_t(std::uint32_t(key.second))));
        decide(key.first, key.second, Int(static_cast<long long>(h % 5) - 2));
    }
    return committed_.count(i, j);
}

Quiver GenericQuiver::window(Vertex n) {
    for (Vertex i = 1; i <= n; ++i)
        for (Vertex j = i + 1; j <= n; ++j) value(i, j);
    VertexSet w;
    for (Vertex i = 1; i <= n; ++i) w.insert(i);
    return restrict_to(committed_, w);
}

std::vector<Vertex> GenericQuiver::realize_extension(const VertexSet& base,
                                                     const ExtensionSpec& spec) {
    for (const auto& [pair, expected] : spec.require_base) {
        if (!base.count(pair.first) || !base.count(pair.second))
            throw SpecConflict("required pair lies outside the base");
        if (value(pair.first, pair.second) != expected)
            throw SpecConflict("committed value differs from the spec on a base pair");
    }
    for (const auto& slot : spec.slots) {
        for (const auto& [b, m] : slot.to_base)
            if (!base.count(b)) throw SpecConflict("slot references a vertex outside base");
        for (const auto& [s, m] : slot.to_slot)
            if (s >= spec.slots.size()) throw SpecConflict("slot references a later slot");
    }
    for (Vertex b : base) next_fresh_ = std::max(next_fresh_, b + 1);

    std::vector<Vertex> fresh;
    Vertex first = next_fresh_;
    for (std::size_t s = 0; s < spec.slots.size(); ++s) fresh.push_back(first + static_cast<Vertex>(s));

    for (std::size_t s = 0; s < spec.slots.size(); ++s) {
        Vertex f = fresh[s];
        for (Vertex u = 1; u < first; ++u) {
            auto it = spec.slots[s].to_base.find(u);
            decide(f, u, it != spec.slots[s].to_base.end() ? it->second : Int(0));
        }
        for (std::size_t tgt = 0; tgt < s; ++tgt) {
            auto it = spec.slots[s].to_slot.find(tgt);
            decide(f, fresh[tgt], it != spec.slots[s].to_slot.end() ? it->second : Int(0));
        }
    }
    return fresh;
}

namespace {

// mu_i of the fragment, computed pointwise against lazily decided values.
Int mu_value(GenericQuiver& g, Vertex i, Vertex x, Vertex y) {
    if (x == y) return 0;
    if (x == i || y == i) return -g.value(x, y);
    Int xv = g.value(x, i), vy = g.value(i, y);
    return g.value(x, y) + xv * pos_part(vy) + pos_part(-xv) * vy;
}

Vertex least_not_in(const VertexSet& s) {
    Vertex v = 1;
    while (s.count(v)) ++v;
    return v;
}

} // namespace

std::vector<PartialIso> back_and_forth(GenericQuiver& g, Vertex i, int stages) {
    std::vector<PartialIso> out;
    std::vector<Vertex> a_side{i}, b_side{i}; // f maps a_side[k] -> b_side[k]
    VertexSet a_set{i}, b_set{i};

    auto record = [&](int stage) {
        PartialIso iso;
        iso.stage = stage;
        for (std::size_t k = 0; k < a_side.size(); ++k) iso.pairs.push_back({a_side[k], b_side[k]});
        std::sort(iso.pairs.begin(), iso.pairs.end());
        out.push_back(std::move(iso));
    };
    auto verify = [&]() {
        for (std::size_t p = 0; p < a_side.size(); ++p)
            for (std::size_t q = 0; q < a_side.size(); ++q)
                assert(mu_value(g, i, b_side[p], b_side[q]) == g.value(a_side[p], a_side[q]));
    };

    record(1);
    for (int stage = 2; stage <= stages; ++stage) {
        if (stage % 2 == 0) {
            // back: adjoin the least unused image vertex, realize its partner
            Vertex b = least_not_in(b_set);
            ExtensionSpec spec;
            ExtensionSlot slot;
            for (std::size_t k = 0; k < a_side.size(); ++k)
                slot.to_base[a_side[k]] = mu_value(g, i, b, b_side[k]);
            spec.slots.push_back(std::move(slot));
            Vertex a = g.realize_extension(a_set, spec).front();
            a_side.push_back(a);
            b_side.push_back(b);
            a_set.insert(a);
            b_set.insert(b);
        } else {
            // forth: adjoin the least unused domain vertex; its partner is a
            // fresh vertex whose committed row is the mu_i-preimage of the
            // desired row.
            Vertex a = least_not_in(a_set);
            std::map<Vertex, Int> desired; // mu-frame row of the partner over b_set
            for (std::size_t k = 0; k < a_side.size(); ++k)
                desired[b_side[k]] = g.value(a, a_side[k]);
            ExtensionSpec spec;
            ExtensionSlot slot;
            for (std::size_t k = 0; k < a_side.size(); ++k) {
                Vertex w = b_side[k];
                Int r_i = desired.count(i) ? desired[i] : Int(0);
                Int kv;
                if (w == i) {
                    kv = -r_i;
                } else {
                    Int miw = -g.value(i, w); // mu-frame value at (i, w)
                    kv = desired[w] + r_i * pos_part(miw) + pos_part(-r_i) * miw;
                }
                slot.to_base[w] = kv;
            }
            spec.slots.push_back(std::move(slot));
            Vertex b = g.realize_extension(b_set, spec).front();
            a_side.push_back(a);
            b_side.push_back(b);
            a_set.insert(a);
            b_set.insert(b);
        }
        verify();
        record(stage);
    }
    return out;
}

SteerReport steer_toward(GenericQuiver& g, const Quiver& target, int radius) {
    SteerReport rep;
    g.window(radius);
    Quiver cur = g.committed();

    for (Vertex m = 1; m <= radius; ++m) {
        std::vector<Vertex> bad;
        for (Vertex v = 1; v < m; ++v)
            if (cur.count(v, m) != target.count(v, m)) bad.push_back(v);

        if (bad.empty()) {
            // Advance the stage with a vertex isolated from everything decided.
            ExtensionSpec spec;
            spec.slots.push_back({});
            Vertex w = g.realize_extension({}, spec).front();
            rep.word.push_back(w);
            rep.correction_stage.push_back(false);
            cur = mutate(cur, w); // identity: w is isolated
        } else {
            ExtensionSpec spec;
            VertexSet base(bad.begin(), bad.end());
            base.insert(m);
            for (Vertex v : bad) {
                Int defect = target.count(v, m) - cur.count(v, m);
                ExtensionSlot slot;
                // one arrow v -> w_r carrying the defect's sign, defect arrows w_r -> m
                slot.to_base[v] = defect > 0 ? -1 : 1;
                slot.to_base[m] = defect;
                spec.slots.push_back(std::move(slot));
            }
            std::vector<Vertex> ws = g.realize_extension(base, spec);
            // The correction rows are untouched by the earlier word: every
            // letter so far is a fresh vertex never adjacent to them, so the
            // committed rows equal the current-frame rows.
            for (std::size_t r = 0; r < ws.size(); ++r) {
                Int defect = target.count(bad[r], m) - cur.count(bad[r], m);
                cur.set(bad[r], ws[r], defect > 0 ? 1 : -1);
                cur.set(ws[r], m, defect);
            }
            for (Vertex w : ws) {
                cur = mutate(cur, w);
                rep.word.push_back(w);
            }
            rep.correction_stage.push_back(true);
            for (Vertex v : bad) assert(cur.count(v, m) == target.count(v, m));
        }
        rep.stage_ends.push_back(static_cast<long long>(rep.word.size()));

        VertexSet window;
        for (Vertex v = 1; v <= m; ++v) window.insert(v);
        assert(restrict_to(cur, window) == restrict_to(target, window));
    }
    return rep;
}

bool verify_steering(const GenericQuiver& g, const SteerReport& report, const Quiver& target,
                     int radius) {
    Quiver cur = g.committed();
    std::vector<Quiver> states{cur};
    for (Vertex w : report.word) {
        cur = mutate(cur, w);
        states.push_back(cur);
    }

    VertexSet full_window;
    for (Vertex v = 1; v <= radius; ++v) full_window.insert(v);
    if (restrict_to(states.back(), full_window) != restrict_to(target, full_window)) return false;

    // Monotone agreement: once stage m completes, the [1..m] restriction is final.
    for (std::size_t m = 0; m < report.stage_ends.size(); ++m) {
        VertexSet window;
        for (Vertex v = 1; v <= static_cast<Vertex>(m + 1); ++v) window.insert(v);
        std::size_t from = static_cast<std::size_t>(report.stage_ends[m]);
        Quiver fixed = restrict_to(states[from], window);
        if (fixed != restrict_to(target, window)) return false;
        for (std::size_t p = from; p < states.size(); ++p)
            if (restrict_to(states[p], window) != fixed) return false;
    }
    return true;
}

} // namespace qm
