#include "qm/mutclass.hpp"
#include "qm/errors.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace qm {

std::string canonical_form(const Quiver& q) {
    VertexSet supp = q.support();
    if (supp.size() > 9) throw HullTooLarge("canonical form capped at 9 support vertices");
    std::vector<Vertex> verts(supp.begin(), supp.end());
    std::vector<int> perm(verts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);

    std::string best;
    do {
        Quiver relabeled;
        for (const auto& [k, m] : q.entries()) {
            auto pos = [&](Vertex v) {
                return static_cast<Vertex>(
                    perm[static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), v) -
                                                  verts.begin())] +
                    1);
            };
            relabeled.set(pos(k.first), pos(k.second), m);
        }
        std::string s = relabeled.serialize();
        if (best.empty() || s < best) best = std::move(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best.empty() ? q.serialize() : best;
}

std::string MutationClassNode::to_json() const {
    std::ostringstream os;
    os << "{\"members_found\":" << members_found
       << ",\"frontier_exhausted\":" << (frontier_exhausted ? "true" : "false")
       << ",\"weight_bound_hit\":" << (weight_bound_hit ? "true" : "false")
       << ",\"max_weight\":" << max_weight << ",\"max_nodes\":" << max_nodes
       << ",\"representative\":" << representative.serialize() << "}";
    return os.str();
}

std::string MutationClassNode::to_dot() const {
    std::ostringstream os;
    os << "graph mutation_class {\n";
    for (std::size_t i = 0; i < members.size(); ++i)
        os << "  n" << i << " [label=\"" << i << "\"];\n";
    for (const auto& [a, b] : edges) os << "  n" << a << " -- n" << b << ";\n";
    os << "}\n";
    return os.str();
}

MutationClassNode explore_class(const Quiver& q, long long max_weight, long long max_nodes) {
    MutationClassNode node;
    node.max_weight = max_weight;
    node.max_nodes = max_nodes;

    std::map<std::string, std::size_t> seen;
    std::deque<std::size_t> frontier;

    auto admit = [&](const Quiver& cand) -> std::optional<std::size_t> {
        std::string key = canonical_form(cand);
        auto it = seen.find(key);
        if (it != seen.end()) return it->second;
        if (static_cast<long long>(node.members.size()) >= max_nodes) return std::nullopt;
        std::size_t idx = node.members.size();
        seen.emplace(std::move(key), idx);
        node.members.push_back(cand);
        frontier.push_back(idx);
        return idx;
    };

    bool node_bound_hit = false;
    admit(q);
    while (!frontier.empty()) {
        std::size_t idx = frontier.front();
        frontier.pop_front();
        Quiver cur = node.members[idx];
        for (Vertex x : cur.support()) {
            Quiver m = mutate(cur, x);
            if (m.max_weight() > max_weight) {
                node.weight_bound_hit = true;
                continue;
            }
            auto other = admit(m);
            if (!other) {
                node_bound_hit = true;
                continue;
            }
            if (*other != idx) {
                auto e = std::minmax(idx, *other);
                if (std::find(node.edges.begin(), node.edges.end(),
                              std::pair<std::size_t, std::size_t>(e.first, e.second)) ==
                    node.edges.end())
                    node.edges.push_back({e.first, e.second});
            }
        }
    }

    node.members_found = static_cast<long long>(node.members.size());
    node.frontier_exhausted = !node.weight_bound_hit && !node_bound_hit;
    node.representative = node.members.empty() ? q : node.members.front();
    std::string best = canonical_form(node.representative);
    for (const Quiver& m : node.members) {
        std::string s = canonical_form(m);
        if (s < best) {
            best = std::move(s);
            node.representative = m;
        }
    }
    return node;
}

namespace {

// Induced copy of p inside m up to isomorphism: try every support subset of
// the right size.
bool contains_induced(const Quiver& m, const Quiver& p) {
    VertexSet ms = m.support(), ps = p.support();
    if (ps.empty()) return true;
    if (ps.size() > ms.size()) return false;
    std::vector<Vertex> verts(ms.begin(), ms.end());
    std::vector<bool> pick(verts.size(), false);
    std::fill(pick.end() - static_cast<long long>(ps.size()), pick.end(), true);
    do {
        VertexSet subset;
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (pick[i]) subset.insert(verts[i]);
        Quiver sub = restrict_to(m, subset);
        if (sub.support().size() == ps.size() && is_isomorphic(sub, p)) return true;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return false;
}

} // namespace

Tri class_embeds(const Quiver& p, const MutationClassNode& node, bool p_one_vertex) {
    if (p_one_vertex) {
        // Every stripped class carries at least the designated single vertex,
        // so the one-vertex class embeds anywhere in the poset.
        return Tri::Yes;
    }
    for (const Quiver& m : node.members)
        if (contains_induced(m, p)) return Tri::Yes;
    return node.frontier_exhausted ? Tri::No : Tri::Unknown;
}

StrippedQuiver strip_isolated(const Quiver& q) {
    // Isolated vertices are never stored, so the map only has to collapse
    // the arrowless quiver onto the designated one-vertex class.
    StrippedQuiver out;
    out.quiver = q;
    out.one_vertex = q.is_empty();
    return out;
}

PosetCheckReport poset_order_check(const std::vector<std::pair<Quiver, Quiver>>& samples,
                                   long long max_weight, long long max_nodes) {
    PosetCheckReport rep;
    for (const auto& [small, big] : samples) {
        ++rep.pairs_checked;
        StrippedQuiver p = strip_isolated(small);
        StrippedQuiver q = strip_isolated(big);
        MutationClassNode node = explore_class(q.quiver, max_weight, max_nodes);
        Tri verdict = class_embeds(p.quiver, node, p.one_vertex);
        if (verdict == Tri::No)
            rep.violations.push_back("embedding failed: " + small.serialize() + " into class of " +
                                     big.serialize());
        else
            ++rep.consistent;
    }
    return rep;
}

} // namespace qm
