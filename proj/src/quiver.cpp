#include "qm/quiver.hpp"
#include "qm/errors.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

namespace qm {

namespace {

Quiver::Key ordered(Vertex i, Vertex j) { return i < j ? Quiver::Key{i, j} : Quiver::Key{j, i}; }

Int pos_part(const Int& a) { return a > 0 ? a : Int(0); }

} // namespace

Quiver Quiver::from_arrows(const std::vector<std::tuple<Vertex, Vertex, long long>>& arrows) {
    Quiver q;
    for (const auto& [i, j, m] : arrows) q.add(i, j, Int(m));
    return q;
}

Int Quiver::count(Vertex i, Vertex j) const {
    if (i == j) return 0;
    auto it = arrows_.find(ordered(i, j));
    if (it == arrows_.end()) return 0;
    return i < j ? it->second : -it->second;
}

void Quiver::set(Vertex i, Vertex j, Int m) {
    if (i == j) throw std::invalid_argument("quiver loops are structurally excluded");
    if (i > j) {
        std::swap(i, j);
        m = -m;
    }
    if (m == 0)
        arrows_.erase({i, j});
    else
        arrows_[{i, j}] = std::move(m);
}

void Quiver::add(Vertex i, Vertex j, const Int& dm) {
    if (dm == 0) return;
    set(i, j, count(i, j) + dm);
}

VertexSet Quiver::support() const {
    VertexSet s;
    for (const auto& [k, m] : arrows_) {
        s.insert(k.first);
        s.insert(k.second);
    }
    return s;
}

bool Quiver::is_isolated(Vertex v) const {
    for (const auto& [k, m] : arrows_)
        if (k.first == v || k.second == v) return false;
    return true;
}

Int Quiver::total_arrows() const {
    Int t = 0;
    for (const auto& [k, m] : arrows_) t += abs(m);
    return t;
}

Int Quiver::max_weight() const {
    Int w = 0;
    for (const auto& [k, m] : arrows_) w = std::max(w, Int(abs(m)));
    return w;
}

std::string Quiver::serialize() const {
    std::ostringstream os;
    os << "{\"arrows\":[";
    bool first = true;
    for (const auto& [k, m] : arrows_) {
        if (!first) os << ',';
        first = false;
        os << '[' << k.first << ',' << k.second << ',' << m << ']';
    }
    os << "]}";
    return os.str();
}

Quiver mutate(const Quiver& q, Vertex v) {
    // Neighbors of v; the composite term only involves pairs among them.
    std::vector<Vertex> nb;
    std::vector<Int> via; // count(u, v) for u in nb
    for (const auto& [k, m] : q.entries()) {
        if (k.first == v) {
            nb.push_back(k.second);
            via.push_back(-m); // count(second, v)
        } else if (k.second == v) {
            nb.push_back(k.first);
            via.push_back(m);
        }
    }

    Quiver out = q;
    for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = 0; b < nb.size(); ++b) {
            if (a == b) continue;
            // count(nb[a], v) = via[a]; count(v, nb[b]) = -via[b]
            const Int from_a = via[a];
            const Int to_b = -via[b];
            Int delta = from_a * pos_part(to_b) + pos_part(-from_a) * to_b;
            // each unordered pair is visited twice (once per orientation)
            if (nb[a] < nb[b]) out.add(nb[a], nb[b], delta);
        }
    for (std::size_t a = 0; a < nb.size(); ++a) out.set(v, nb[a], -q.count(v, nb[a]));
    return out;
}

Quiver mutate_word(const Quiver& q, const std::vector<Vertex>& word) {
    Quiver cur = q;
    for (Vertex v : word) cur = mutate(cur, v);
    return cur;
}

Quiver restrict_to(const Quiver& q, const VertexSet& v) {
    Quiver out;
    for (const auto& [k, m] : q.entries())
        if (v.count(k.first) && v.count(k.second)) out.set(k.first, k.second, m);
    return out;
}

Quiver overfill(const Quiver& q, const VertexSet& v) {
    Quiver out;
    for (const auto& [k, m] : q.entries())
        if (v.count(k.first) || v.count(k.second)) out.set(k.first, k.second, m);
    return out;
}

VertexSet support(const Quiver& q) { return q.support(); }

const char* to_string(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        default: return "unknown";
    }
}

bool is_connected(const Quiver& q) {
    VertexSet supp = q.support();
    if (supp.empty()) return true;
    std::map<Vertex, std::vector<Vertex>> adj;
    for (const auto& [k, m] : q.entries()) {
        adj[k.first].push_back(k.second);
        adj[k.second].push_back(k.first);
    }
    std::deque<Vertex> todo{*supp.begin()};
    VertexSet seen{*supp.begin()};
    while (!todo.empty()) {
        Vertex x = todo.front();
        todo.pop_front();
        for (Vertex y : adj[x])
            if (seen.insert(y).second) todo.push_back(y);
    }
    return seen == supp;
}

bool is_acyclic(const Quiver& q) {
    // DFS over positive arrows with tricolor marking.
    std::map<Vertex, std::vector<Vertex>> succ;
    for (const auto& [k, m] : q.entries()) {
        if (m > 0)
            succ[k.first].push_back(k.second);
        else
            succ[k.second].push_back(k.first);
    }
    std::map<Vertex, int> color; // 0 unseen, 1 active, 2 done
    std::vector<std::pair<Vertex, std::size_t>> stack;
    for (const auto& [root, _] : succ) {
        if (color[root]) continue;
        stack.push_back({root, 0});
        color[root] = 1;
        while (!stack.empty()) {
            auto& [x, idx] = stack.back();
            auto& out = succ[x];
            if (idx == out.size()) {
                color[x] = 2;
                stack.pop_back();
                continue;
            }
            Vertex y = out[idx++];
            if (color[y] == 1) return false;
            if (color[y] == 0) {
                color[y] = 1;
                stack.push_back({y, 0});
            }
        }
    }
    return true;
}

bool is_abundant_on_support(const Quiver& q) {
    VertexSet supp = q.support();
    for (auto it = supp.begin(); it != supp.end(); ++it)
        for (auto jt = std::next(it); jt != supp.end(); ++jt)
            if (abs(q.count(*it, *jt)) < 2) return false;
    return true;
}

namespace {

// Layered search over mutation words of length <= depth from the evolving
// support, deduplicated by labeled serialization.
template <typename Visit>
void bounded_mutation_search(const Quiver& q, int depth, Visit&& visit) {
    std::set<std::string> seen{q.serialize()};
    std::vector<Quiver> layer{q};
    if (!visit(q)) return;
    for (int d = 0; d < depth && !layer.empty(); ++d) {
        std::vector<Quiver> next;
        for (const Quiver& cur : layer)
            for (Vertex x : cur.support()) {
                Quiver m = mutate(cur, x);
                if (!seen.insert(m.serialize()).second) continue;
                if (!visit(m)) return;
                next.push_back(std::move(m));
            }
        layer = std::move(next);
    }
}

} // namespace

Tri check_property(const Quiver& q, const PropertyKind& p) {
    using Tag = PropertyKind::Tag;
    switch (p.tag) {
        case Tag::Finite:
            return Tri::Yes; // finite support is structural here
        case Tag::Connected:
            return is_connected(q) ? Tri::Yes : Tri::No;
        case Tag::Acyclic:
            return is_acyclic(q) ? Tri::Yes : Tri::No;
        case Tag::Abundant:
            return is_abundant_on_support(q) ? Tri::Yes : Tri::No;
        case Tag::HasWeightIn: {
            if (p.weights.empty()) throw std::invalid_argument("HasWeightIn needs a nonempty set");
            // Any pair of fresh vertices realizes weight 0 on an infinite vertex set.
            if (p.weights.count(0)) return Tri::Yes;
            for (const auto& [k, m] : q.entries()) {
                Int w = abs(m);
                if (w <= Int(std::numeric_limits<long long>::max()) &&
                    p.weights.count(static_cast<long long>(w)))
                    return Tri::Yes;
            }
            return Tri::No;
        }
        case Tag::MutationAcyclicWithin: {
            bool found = false;
            bounded_mutation_search(q, p.depth, [&](const Quiver& m) {
                if (is_acyclic(m)) {
                    found = true;
                    return false;
                }
                return true;
            });
            return found ? Tri::Yes : Tri::Unknown;
        }
        case Tag::TameWithin: {
            bool wild = false;
            bounded_mutation_search(q, p.depth, [&](const Quiver& m) {
                if (m.max_weight() > 2) {
                    wild = true;
                    return false;
                }
                return true;
            });
            return wild ? Tri::No : Tri::Unknown;
        }
    }
    return Tri::Unknown;
}

namespace {

// Sorted multiset of signed counts toward the rest of the support; an
// isomorphism must preserve it, so it prunes the backtracking.
std::vector<Int> degree_profile(const Quiver& q, Vertex v, const VertexSet& supp) {
    std::vector<Int> prof;
    for (Vertex u : supp)
        if (u != v) {
            Int c = q.count(v, u);
            if (c != 0) prof.push_back(c);
        }
    std::sort(prof.begin(), prof.end());
    return prof;
}

bool extend_bijection(const Quiver& a, const Quiver& b, const std::vector<Vertex>& av,
                      const std::vector<Vertex>& bv,
                      const std::map<Vertex, std::vector<Int>>& aprof,
                      const std::map<Vertex, std::vector<Int>>& bprof, std::size_t pos,
                      std::vector<Vertex>& image, std::vector<bool>& used) {
    if (pos == av.size()) return true;
    Vertex x = av[pos];
    for (std::size_t j = 0; j < bv.size(); ++j) {
        if (used[j]) continue;
        Vertex y = bv[j];
        if (aprof.at(x) != bprof.at(y)) continue;
        bool ok = true;
        for (std::size_t k = 0; k < pos && ok; ++k)
            if (b.count(image[k], y) != a.count(av[k], x)) ok = false;
        if (!ok) continue;
        image[pos] = y;
        used[j] = true;
        if (extend_bijection(a, b, av, bv, aprof, bprof, pos + 1, image, used)) return true;
        used[j] = false;
    }
    return false;
}

} // namespace

std::optional<VertexBijection> is_isomorphic(const Quiver& a, const Quiver& b) {
    VertexSet sa = a.support(), sb = b.support();
    if (sa.size() != sb.size()) return std::nullopt;
    std::vector<Vertex> av(sa.begin(), sa.end()), bv(sb.begin(), sb.end());

    std::map<Vertex, std::vector<Int>> aprof, bprof;
    std::vector<std::vector<Int>> amulti, bmulti;
    for (Vertex v : av) amulti.push_back(aprof[v] = degree_profile(a, v, sa));
    for (Vertex v : bv) bmulti.push_back(bprof[v] = degree_profile(b, v, sb));
    std::sort(amulti.begin(), amulti.end());
    std::sort(bmulti.begin(), bmulti.end());
    if (amulti != bmulti) return std::nullopt;

    std::vector<Vertex> image(av.size());
    std::vector<bool> used(bv.size(), false);
    if (!extend_bijection(a, b, av, bv, aprof, bprof, 0, image, used)) return std::nullopt;
    VertexBijection f;
    for (std::size_t k = 0; k < av.size(); ++k) f[av[k]] = image[k];
    return f;
}

std::optional<Vertex> fork_point(const Quiver& q) {
    VertexSet supp = q.support();
    if (supp.size() < 3) return std::nullopt;
    if (!is_abundant_on_support(q) || is_acyclic(q)) return std::nullopt;

    std::optional<Vertex> found;
    for (Vertex r : supp) {
        VertexSet in, out;
        for (Vertex x : supp) {
            if (x == r) continue;
            Int c = q.count(x, r);
            (c > 0 ? in : out).insert(x); // abundance: c != 0
        }
        bool ok = true;
        for (Vertex i : in)
            for (Vertex j : out) {
                if (!(q.count(j, i) > q.count(i, r) && q.count(j, i) > q.count(r, j))) {
                    ok = false;
                    break;
                }
            }
        if (!ok) continue;
        VertexSet rest = supp;
        rest.erase(r);
        if (!is_acyclic(restrict_to(q, rest))) continue;
        if (found) throw std::logic_error("fork point of return is not unique");
        found = r;
    }
    return found;
}

std::optional<std::vector<Vertex>> acyclic_order(const Quiver& q, const VertexSet& v) {
    for (auto it = v.begin(); it != v.end(); ++it)
        for (auto jt = std::next(it); jt != v.end(); ++jt)
            if (abs(q.count(*it, *jt)) <= 1)
                throw AbundanceViolation("pair (" + std::to_string(*it) + "," +
                                         std::to_string(*jt) + ") carries fewer than 2 arrows");
    Quiver r = restrict_to(q, v);
    if (!is_acyclic(r)) return std::nullopt;
    // Acyclic tournament: sorting by arrow direction is a strict weak order.
    std::vector<Vertex> order(v.begin(), v.end());
    std::sort(order.begin(), order.end(), [&](Vertex x, Vertex y) { return q.count(x, y) > 0; });
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            assert(q.count(order[i], order[j]) > 0);
    return order;
}

// --- encoding ----------------------------------------------------------------

namespace {

// Incrementally extended prime table; p(1) = 2.
std::vector<long long>& prime_table() {
    static std::vector<long long> primes{2, 3, 5, 7, 11, 13};
    return primes;
}

long long prime_at(std::size_t k) { // 1-based
    auto& primes = prime_table();
    while (primes.size() < k) {
        long long c = primes.back() + 2;
        for (;; c += 2) {
            bool comp = false;
            for (long long p : primes) {
                if (p * p > c) break;
                if (c % p == 0) {
                    comp = true;
                    break;
                }
            }
            if (!comp) break;
        }
        primes.push_back(c);
    }
    return primes[k - 1];
}

Int int_pow(long long base, const Int& exp) {
    Int result = 1, b = base, e = exp;
    while (e > 0) {
        if ((e & 1) != 0) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

} // namespace

Int h_fold(const Int& t) { return t >= 0 ? Int(2 * t) : Int(-2 * t - 1); }

Int h_unfold(const Int& u) {
    if (u < 0) throw MalformedCode("h is valued in nonnegative integers");
    return (u % 2 == 0) ? Int(u / 2) : Int(-(u + 1) / 2);
}

std::vector<Int> lf_encode(const Quiver& q, int n) {
    std::vector<Int> code(static_cast<std::size_t>(n), Int(1));
    for (const auto& [k, m] : q.entries()) {
        Vertex i = k.first;
        if (i > n) continue;
        std::size_t gap = static_cast<std::size_t>(k.second - k.first);
        code[static_cast<std::size_t>(i - 1)] *= int_pow(prime_at(gap), h_fold(m));
    }
    return code;
}

Quiver lf_decode(const std::vector<Int>& prefix) {
    constexpr std::size_t kMaxPrimeIndex = 100000;
    Quiver q;
    for (std::size_t idx = 0; idx < prefix.size(); ++idx) {
        Int e = prefix[idx];
        if (e <= 0) throw MalformedCode("entries must be positive integers");
        for (std::size_t k = 1; e > 1; ++k) {
            if (k > kMaxPrimeIndex) throw MalformedCode("entry has a factor beyond the prime table");
            long long p = prime_at(k);
            Int mult = 0;
            while (e % p == 0) {
                e /= p;
                ++mult;
            }
            if (mult > 0)
                q.set(static_cast<Vertex>(idx + 1), static_cast<Vertex>(idx + 1 + k), h_unfold(mult));
        }
    }
    return q;
}

Quiver a_infinity_window(int n) {
    Quiver q;
    for (int k = 1; k < n; ++k) q.set(k, k + 1, 1);
    return q;
}

Quiver two_sided_ray_window(int n, int center) {
    Quiver q;
    for (int k = 1; k <= n; ++k)
        if (k != center) q.set(center, k, 1);
    for (int k = center + 1; k < n; ++k) q.set(k, k + 1, 1);
    for (int k = center - 1; k > 1; --k) q.set(k, k - 1, 1);
    return q;
}

std::string to_dot(const Quiver& q) {
    std::ostringstream os;
    os << "digraph quiver {\n";
    for (Vertex v : q.support()) os << "  " << v << ";\n";
    for (const auto& [k, m] : q.entries()) {
        Vertex from = m > 0 ? k.first : k.second;
        Vertex to = m > 0 ? k.second : k.first;
        os << "  " << from << " -> " << to << " [label=\"" << abs(m) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace qm
