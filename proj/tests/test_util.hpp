#ifndef QM_TEST_UTIL_HPP
#define QM_TEST_UTIL_HPP

#include "qm/quiver.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace qmtest {

using qm::Quiver;
using qm::Vertex;
using qm::VertexSet;

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random quiver on vertices [1..max_vertex], each pair present with the
// given density and |count| <= max_weight.
inline Quiver random_quiver(Rng& rng, int max_vertex, int max_weight, double density = 0.5) {
    Quiver q;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (Vertex i = 1; i <= max_vertex; ++i)
        for (Vertex j = i + 1; j <= max_vertex; ++j) {
            if (coin(rng) > density) continue;
            int m = rand_int(rng, 1, max_weight);
            q.set(i, j, rand_int(rng, 0, 1) ? m : -m);
        }
    return q;
}

// Random abundant acyclic quiver on [1..n] with weights in [2..max_weight]:
// a random linear order with every pair doubled at least.
inline Quiver random_abundant_acyclic(Rng& rng, int n, int max_weight = 4) {
    std::vector<Vertex> order;
    for (Vertex v = 1; v <= n; ++v) order.push_back(v);
    std::shuffle(order.begin(), order.end(), rng);
    Quiver q;
    for (std::size_t a = 0; a < order.size(); ++a)
        for (std::size_t b = a + 1; b < order.size(); ++b)
            q.set(order[a], order[b], rand_int(rng, 2, max_weight));
    return q;
}

// Dense-matrix mutation oracle (the standard sgn/max form), independent of
// the sparse implementation.
inline Quiver matrix_mutate_oracle(const Quiver& q, Vertex k, int max_vertex) {
    const int n = max_vertex;
    std::vector<std::vector<long long>> b(static_cast<std::size_t>(n + 1),
                                          std::vector<long long>(static_cast<std::size_t>(n + 1), 0));
    for (Vertex i = 1; i <= n; ++i)
        for (Vertex j = 1; j <= n; ++j)
            b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                static_cast<long long>(q.count(i, j));
    std::vector<std::vector<long long>> nb = b;
    for (Vertex i = 1; i <= n; ++i)
        for (Vertex j = 1; j <= n; ++j) {
            auto& out = nb[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (i == k || j == k) {
                out = -b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            } else {
                long long bik = b[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                long long bkj = b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                long long sgn = bik > 0 ? 1 : (bik < 0 ? -1 : 0);
                out = b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                      sgn * std::max(0LL, bik * bkj);
            }
        }
    Quiver result;
    for (Vertex i = 1; i <= n; ++i)
        for (Vertex j = i + 1; j <= n; ++j)
            result.set(i, j, qm::Int(nb[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    return result;
}

inline VertexSet range_set(Vertex lo, Vertex hi) {
    VertexSet s;
    for (Vertex v = lo; v <= hi; ++v) s.insert(v);
    return s;
}

} // namespace qmtest

#endif // QM_TEST_UTIL_HPP
