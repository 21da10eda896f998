#pragma once

// Test-only reference implementations. Nothing here calls the tracer or the
// decomposer; they work from has_edge alone.

#include <hitomezashi/pattern.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace hitomezashi::oracle {

struct NaiveLoop {
    Vertex least;
    std::uint64_t length = 0;

    friend auto operator<=>(const NaiveLoop&, const NaiveLoop&) = default;
};

// Materializes every edge of `box` through has_edge and returns the cycles
// (components whose vertices all have degree 2 inside the box) that contain
// a vertex of `window`, sorted by least vertex. Components that meet the
// window but run out of the box are counted in *open, when given.
inline std::vector<NaiveLoop> naive_loops(const Pattern& p, const Window& box, const Window& window,
                                          std::size_t* open = nullptr) {
    const auto w = static_cast<std::size_t>(box.width());
    const auto h = static_cast<std::size_t>(box.height());
    auto id = [&](std::int64_t x, std::int64_t y) {
        return static_cast<std::size_t>(x - box.x0) * h + static_cast<std::size_t>(y - box.y0);
    };
    std::vector<std::array<std::size_t, 4>> adj(w * h);
    std::vector<std::uint8_t> degree(w * h, 0);
    auto link = [&](std::size_t a, std::size_t b) {
        adj[a][degree[a]++] = b;
        adj[b][degree[b]++] = a;
    };
    for (std::int64_t x = box.x0; x <= box.x1; ++x) {
        for (std::int64_t y = box.y0; y <= box.y1; ++y) {
            if (x < box.x1 && p.has_edge(Edge{Vertex{x, y}, Vertex{x + 1, y}})) {
                link(id(x, y), id(x + 1, y));
            }
            if (y < box.y1 && p.has_edge(Edge{Vertex{x, y}, Vertex{x, y + 1}})) {
                link(id(x, y), id(x, y + 1));
            }
        }
    }

    std::vector<NaiveLoop> out;
    std::vector<bool> done(w * h, false);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < w * h; ++start) {
        if (done[start]) {
            continue;
        }
        bool cycle = true;
        bool touches = false;
        std::uint64_t degree_sum = 0;
        std::size_t least = start;
        stack.assign(1, start);
        done[start] = true;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            const Vertex vv{box.x0 + static_cast<std::int64_t>(v / h), box.y0 + static_cast<std::int64_t>(v % h)};
            touches = touches || window.contains(vv);
            cycle = cycle && degree[v] == 2;
            degree_sum += degree[v];
            least = std::min(least, v);
            for (std::uint8_t k = 0; k < degree[v]; ++k) {
                if (!done[adj[v][k]]) {
                    done[adj[v][k]] = true;
                    stack.push_back(adj[v][k]);
                }
            }
        }
        if (!cycle && touches && open) {
            ++*open;
        }
        if (cycle && touches) {
            out.push_back({Vertex{box.x0 + static_cast<std::int64_t>(least / h),
                                  box.y0 + static_cast<std::int64_t>(least % h)},
                           degree_sum / 2});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Window grown by `margin` on every side.
inline Window grow(const Window& w, std::int64_t margin) {
    return {w.x0 - margin, w.y0 - margin, w.x1 + margin, w.y1 + margin};
}

// Random sequence spec covering every extension policy.
inline SequenceSpec random_spec(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<int> len(1, 9);
    std::uniform_int_distribution<std::int64_t> offset(-20, 20);
    std::vector<Bit> bits(static_cast<std::size_t>(len(rng)));
    for (auto& b : bits) {
        b = static_cast<Bit>(rng() & 1U);
    }
    switch (kind(rng)) {
    case 0: return {bits, offset(rng), ConstantExtension{static_cast<Bit>(rng() & 1U)}};
    case 1: return {bits, offset(rng), PeriodicExtension{}};
    case 2: return {bits, offset(rng), SeededExtension{rng()}};
    default: return SequenceSpec::seeded(rng());
    }
}

inline Pattern random_pattern(std::mt19937_64& rng) { return {random_spec(rng), random_spec(rng)}; }

} // namespace hitomezashi::oracle
