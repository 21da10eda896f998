#pragma once

// Walking the degree-2 structure of a pattern: successors, single components,
// and every loop meeting a window.

#include <hitomezashi/pattern.hpp>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace hitomezashi {

inline constexpr std::int64_t kDefaultBudget = 1'000'000;

enum class ComponentKind : std::uint8_t { Loop, Unresolved };

struct TracedComponent {
    ComponentKind kind = ComponentKind::Unresolved;
    std::vector<OrientedEdge> edges;
    std::uint64_t length = 0;

    bool is_loop() const noexcept { return kind == ComponentKind::Loop; }
};

/// The unique continuation of a walk arriving along `incoming`.
inline OrientedEdge next_edge(const Pattern& p, const OrientedEdge& incoming) {
    if (!p.has_oriented(incoming)) {
        throw ContractViolation("edge " + to_string(incoming) + " is not in the pattern");
    }
    const Vertex v = incoming.end();
    return {v, is_vertical(incoming.dir) ? p.horizontal_at(v) : p.vertical_at(v)};
}

namespace detail {

inline void check_budget(std::int64_t budget) {
    if (budget <= 0) {
        throw ContractViolation("step budget must be positive, got " + std::to_string(budget));
    }
}

// Bits of one sequence over a fixed index range, computed a block at a time
// on first use. Long walks stay within budget steps of their seed, so this
// turns most lookups into a byte load. Indices outside the range fall back
// to SequenceSpec::bit_at.
class BitCache {
public:
    static constexpr int kBlockBits = 10;

    BitCache(const SequenceSpec& spec, std::int64_t lo, std::int64_t hi)
        : spec_(&spec), lo_(lo), size_(((hi - lo) >> kBlockBits) + 1), filled_(static_cast<std::size_t>(size_), 0),
          bits_(new Bit[static_cast<std::size_t>(size_) << kBlockBits]) {}

    Bit operator()(std::int64_t index) {
        const std::int64_t r = index - lo_;
        const std::int64_t block = r >> kBlockBits;
        if (r < 0 || block >= size_) {
            return spec_->bit_at(index);
        }
        const auto b = static_cast<std::size_t>(block);
        if (!filled_[b]) {
            const std::int64_t first = lo_ + (block << kBlockBits);
            Bit* out = bits_.get() + (b << kBlockBits);
            for (std::int64_t k = 0; k < (std::int64_t{1} << kBlockBits); ++k) {
                out[k] = spec_->bit_at(first + k);
            }
            filled_[b] = 1;
        }
        return bits_[static_cast<std::size_t>(r)];
    }

private:
    const SequenceSpec* spec_;
    std::int64_t lo_;
    std::int64_t size_; // in blocks
    std::vector<std::uint8_t> filled_;
    std::unique_ptr<Bit[]> bits_;
};

// Pattern view with cached sequences, for walks of up to `budget` steps
// that start near `area`.
class CachedPattern {
public:
    static constexpr std::int64_t kMaxReach = std::int64_t{1} << 21;

    CachedPattern(const Pattern& p, const Window& area, std::int64_t budget)
        : eps_(p.eps(), area.x0 - reach(budget), area.x1 + reach(budget)),
          eta_(p.eta(), area.y0 - reach(budget), area.y1 + reach(budget)) {}

    Direction horizontal_at(Vertex v) { return floor_mod(v.x - eta_(v.y), 2) == 0 ? Direction::PosX : Direction::NegX; }
    Direction vertical_at(Vertex v) { return floor_mod(v.y - eps_(v.x), 2) == 0 ? Direction::PosY : Direction::NegY; }

    OrientedEdge advance(const OrientedEdge& incoming) {
        const Vertex v = incoming.end();
        return {v, is_vertical(incoming.dir) ? horizontal_at(v) : vertical_at(v)};
    }

private:
    static std::int64_t reach(std::int64_t budget) { return std::min(budget, kMaxReach); }

    BitCache eps_;
    BitCache eta_;
};

} // namespace detail

/// Follows next_edge from `seed` until the walk returns to seed.start (Loop)
/// or `budget` edges have been taken without closing (Unresolved).
inline TracedComponent trace_from(const Pattern& p, const OrientedEdge& seed, std::int64_t budget = kDefaultBudget) {
    detail::check_budget(budget);
    if (!p.has_oriented(seed)) {
        throw ContractViolation("seed edge " + to_string(seed) + " is not in the pattern");
    }
    detail::CachedPattern cp(p, {seed.start.x, seed.start.y, seed.start.x, seed.start.y}, budget);
    TracedComponent out;
    out.edges.push_back(seed);
    while (out.edges.back().end() != seed.start) {
        if (static_cast<std::int64_t>(out.edges.size()) >= budget) {
            out.kind = ComponentKind::Unresolved;
            out.length = out.edges.size();
            return out;
        }
        out.edges.push_back(cp.advance(out.edges.back()));
    }
    out.kind = ComponentKind::Loop;
    out.length = out.edges.size();
    return out;
}

/// Same cycle traversed the other way round, starting at the old end vertex.
inline std::vector<OrientedEdge> reverse_walk(const std::vector<OrientedEdge>& edges) {
    std::vector<OrientedEdge> out;
    out.reserve(edges.size());
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        out.push_back(it->reversed());
    }
    return out;
}

/// Rotate to the lexicographically least vertex and orient so the first step
/// is +y (at the least vertex both +x and +y edges are present).
inline TracedComponent canonical_loop(const TracedComponent& loop) {
    if (!loop.is_loop()) {
        throw ContractViolation("canonical_loop needs a closed loop");
    }
    auto rotate_to_least = [](std::vector<OrientedEdge>& edges) {
        const auto least = std::min_element(edges.begin(), edges.end(),
                                            [](const auto& a, const auto& b) { return a.start < b.start; });
        std::rotate(edges.begin(), least, edges.end());
    };
    TracedComponent out = loop;
    rotate_to_least(out.edges);
    if (out.edges.front().dir != Direction::PosY) {
        out.edges = reverse_walk(out.edges);
        rotate_to_least(out.edges);
    }
    return out;
}

/// Orientation used by loop decomposition: with a = min x, every vertical
/// edge on x = a points in -y, and the walk starts with the one whose
/// starting y is largest.
inline TracedComponent orient_loop_for_decomposition(const TracedComponent& loop) {
    if (!loop.is_loop() || loop.edges.empty()) {
        throw ContractViolation("orient_loop_for_decomposition needs a closed loop");
    }
    std::int64_t a = loop.edges.front().start.x;
    for (const auto& e : loop.edges) {
        a = std::min(a, e.start.x);
    }

    std::optional<Direction> dir;
    for (const auto& e : loop.edges) {
        if (e.start.x == a && is_vertical(e.dir)) {
            if (dir && *dir != e.dir) {
                throw InternalContradiction("leftmost-column-direction",
                                            "edges on x=" + std::to_string(a) + " point both ways");
            }
            dir = e.dir;
        }
    }
    if (!dir) {
        throw InternalContradiction("leftmost-column-empty", "no vertical edge on x=" + std::to_string(a));
    }

    TracedComponent out = loop;
    if (*dir == Direction::PosY) {
        out.edges = reverse_walk(out.edges);
    }
    auto top = out.edges.end();
    for (auto it = out.edges.begin(); it != out.edges.end(); ++it) {
        if (it->start.x == a && is_vertical(it->dir) && (top == out.edges.end() || it->start.y > top->start.y)) {
            top = it;
        }
    }
    std::rotate(out.edges.begin(), top, out.edges.end());
    return out;
}

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
    const std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) noexcept { return -floor_div(-a, b); }

// Integers n with [lo + n*d, hi + n*d] meeting [w0, w1]. For d == 0 the
// answer is all n or none, reported through `all`.
struct ShiftRange {
    bool all = false;
    std::int64_t first = 0;
    std::int64_t last = -1;
};

inline ShiftRange overlap_range(std::int64_t lo, std::int64_t hi, std::int64_t d, std::int64_t w0, std::int64_t w1) {
    if (d == 0) {
        return {hi >= w0 && lo <= w1, 0, -1};
    }
    if (d > 0) {
        return {false, ceil_div(w0 - hi, d), floor_div(w1 - lo, d)};
    }
    return {false, ceil_div(w1 - lo, d), floor_div(w0 - hi, d)};
}

class VisitMap {
public:
    explicit VisitMap(const Window& w)
        : window_(w), seen_(static_cast<std::size_t>(w.width() * w.height()), false) {}

    void mark(Vertex v) {
        if (window_.contains(v)) {
            seen_[index(v)] = true;
        }
    }
    bool seen(Vertex v) const { return seen_[index(v)]; }
    // v inside the window and already visited
    bool hit(Vertex v) const { return window_.contains(v) && seen_[index(v)]; }

private:
    std::size_t index(Vertex v) const {
        return static_cast<std::size_t>((v.x - window_.x0) * window_.height() + (v.y - window_.y0));
    }

    Window window_;
    std::vector<bool> seen_;
};

// Edges of a walk stored as its first vertex plus one direction per step.
struct WalkView {
    Vertex start;
    std::span<const Direction> dirs;

    template <typename F>
    void for_each_edge(F&& f) const {
        Vertex v = start;
        for (Direction d : dirs) {
            f(OrientedEdge{v, d});
            v = step(v, d);
        }
    }

    std::vector<OrientedEdge> edges() const {
        std::vector<OrientedEdge> out;
        out.reserve(dirs.size());
        for_each_edge([&](const OrientedEdge& e) { out.push_back(e); });
        return out;
    }
};

inline void mark_drifting(VisitMap& visited, const Window& w, const WalkView& segment, Vertex shift) {
    std::int64_t bx0 = segment.start.x, bx1 = bx0;
    std::int64_t by0 = segment.start.y, by1 = by0;
    segment.for_each_edge([&](const OrientedEdge& e) {
        bx0 = std::min(bx0, e.start.x);
        bx1 = std::max(bx1, e.start.x);
        by0 = std::min(by0, e.start.y);
        by1 = std::max(by1, e.start.y);
    });
    const ShiftRange rx = overlap_range(bx0, bx1, shift.x, w.x0, w.x1);
    const ShiftRange ry = overlap_range(by0, by1, shift.y, w.y0, w.y1);
    if ((shift.x == 0 && !rx.all) || (shift.y == 0 && !ry.all)) {
        return;
    }
    // shift != 0, so at least one range is bounded
    std::int64_t first = rx.all ? ry.first : rx.first;
    std::int64_t last = rx.all ? ry.last : rx.last;
    if (!rx.all && !ry.all) {
        first = std::max(rx.first, ry.first);
        last = std::min(rx.last, ry.last);
    }
    for (std::int64_t n = first; n <= last; ++n) {
        segment.for_each_edge(
            [&](const OrientedEdge& e) { visited.mark({e.start.x + n * shift.x, e.start.y + n * shift.y}); });
    }
}

enum class WalkEnd : std::uint8_t { Closed, Budget, Drifting, Merged };

// Visits every component meeting a window once. Seeds are oriented so that
// edges leaving a vertex with x + y even are vertical: by the alternation of
// horizontal and vertical steps this is one consistent direction along each
// component, so a walk that runs into a vertex marked by an earlier walk has
// found an already reported component and stops there.
//
// on_loop(TracedComponent&&) receives each loop (not yet canonical);
// on_open(const WalkView&, WalkEnd) each unresolved component, either the
// `budget` edges walked from its seed or, on periodic patterns, one period of
// a walk shown never to close: it reaches its seed state translated by a
// period vector, and from there repeats the same segment shifted forever.
template <typename OnLoop, typename OnOpen>
void for_each_component(const Pattern& p, const Window& window, std::int64_t budget, OnLoop&& on_loop,
                        OnOpen&& on_open) {
    if (!window.well_ordered()) {
        throw ContractViolation("window must satisfy x0 <= x1 and y0 <= y1");
    }
    check_budget(budget);
    const auto periods = p.translation_periods();
    CachedPattern cp(p, window, budget);
    VisitMap visited(window);
    std::vector<Direction> dirs;

    for (std::int64_t x = window.x0; x <= window.x1; ++x) {
        for (std::int64_t y = window.y0; y <= window.y1; ++y) {
            const Vertex seed_vertex{x, y};
            if (visited.seen(seed_vertex)) {
                continue;
            }
            const OrientedEdge seed{seed_vertex, floor_mod(x + y, 2) == 0 ? cp.vertical_at(seed_vertex)
                                                                         : cp.horizontal_at(seed_vertex)};
            dirs.clear();
            visited.mark(seed_vertex);
            OrientedEdge e = seed;
            WalkEnd end = WalkEnd::Budget;
            Vertex shift{};
            for (;;) {
                dirs.push_back(e.dir);
                const Vertex v = e.end();
                if (v == seed.start) {
                    end = WalkEnd::Closed;
                    break;
                }
                if (visited.hit(v)) {
                    end = WalkEnd::Merged;
                    break;
                }
                visited.mark(v);
                const OrientedEdge next = cp.advance(e);
                if (periods && next.dir == seed.dir) {
                    const Vertex d{next.start.x - seed.start.x, next.start.y - seed.start.y};
                    if (floor_mod(d.x, periods->first) == 0 && floor_mod(d.y, periods->second) == 0) {
                        end = WalkEnd::Drifting;
                        shift = d;
                        break;
                    }
                }
                if (static_cast<std::int64_t>(dirs.size()) >= budget) {
                    break;
                }
                e = next;
            }

            const WalkView walk{seed.start, dirs};
            switch (end) {
            case WalkEnd::Closed: {
                TracedComponent loop{ComponentKind::Loop, walk.edges(), dirs.size()};
                on_loop(std::move(loop));
                break;
            }
            case WalkEnd::Drifting:
                mark_drifting(visited, window, walk, shift);
                on_open(walk, end);
                break;
            case WalkEnd::Budget:
                on_open(walk, end);
                break;
            case WalkEnd::Merged:
                break;
            }
        }
    }
}

} // namespace detail

/// Every component meeting `window`, each traced in full. Loops come first,
/// in canonical form and sorted by their least vertex; Unresolved components
/// follow in discovery order. An Unresolved component holds either the
/// `budget` edges walked from its seed or, on periodic patterns, one period
/// of a walk proven never to close.
inline std::vector<TracedComponent> enumerate_loops(const Pattern& p, const Window& window,
                                                    std::int64_t budget = kDefaultBudget) {
    std::vector<TracedComponent> loops;
    std::vector<TracedComponent> unresolved;
    detail::for_each_component(
        p, window, budget, [&](TracedComponent&& loop) { loops.push_back(canonical_loop(loop)); },
        [&](const detail::WalkView& walk, detail::WalkEnd) {
            unresolved.push_back({ComponentKind::Unresolved, walk.edges(), walk.dirs.size()});
        });
    std::sort(loops.begin(), loops.end(),
              [](const auto& a, const auto& b) { return a.edges.front().start < b.edges.front().start; });
    for (auto& u : unresolved) {
        loops.push_back(std::move(u));
    }
    return loops;
}

} // namespace hitomezashi
