#pragma once

// Hitomezashi pattern on Z x Z defined by two bi-infinite sequences:
//   horizontal {(i,j),(i+1,j)} present  <=>  i = eta_j (mod 2)
//   vertical   {(i,j),(i,j+1)} present  <=>  j = eps_i (mod 2)
// Edges are answered on demand; nothing is materialized.

#include <hitomezashi/geometry.hpp>
#include <hitomezashi/sequence.hpp>

#include <array>
#include <numeric>
#include <optional>
#include <utility>

namespace hitomezashi {

class Pattern {
public:
    Pattern(SequenceSpec eps, SequenceSpec eta) : eps_(std::move(eps)), eta_(std::move(eta)) {}

    const SequenceSpec& eps() const noexcept { return eps_; }
    const SequenceSpec& eta() const noexcept { return eta_; }

    bool has_edge(const Edge& e) const noexcept {
        const Vertex& u = e.lo();
        if (e.horizontal()) {
            return floor_mod(u.x - eta_.bit_at(u.y), 2) == 0;
        }
        return floor_mod(u.y - eps_.bit_at(u.x), 2) == 0;
    }

    /// Direction of the horizontal edge present at `v` (exactly one of +x, -x).
    Direction horizontal_at(Vertex v) const noexcept {
        return floor_mod(v.x - eta_.bit_at(v.y), 2) == 0 ? Direction::PosX : Direction::NegX;
    }

    /// Direction of the vertical edge present at `v` (exactly one of +y, -y).
    Direction vertical_at(Vertex v) const noexcept {
        return floor_mod(v.y - eps_.bit_at(v.x), 2) == 0 ? Direction::PosY : Direction::NegY;
    }

    bool has_oriented(const OrientedEdge& e) const noexcept {
        return is_vertical(e.dir) ? vertical_at(e.start) == e.dir : horizontal_at(e.start) == e.dir;
    }

    /// The two present edges at `v`: horizontal first, vertical second.
    std::array<Edge, 2> incident_edges(Vertex v) const {
        return {Edge{v, step(v, horizontal_at(v))}, Edge{v, step(v, vertical_at(v))}};
    }

    /// Translation periods (px, py) under which the whole pattern is invariant,
    /// when both sequences are periodic. Translations must also preserve the
    /// parity of i and j, so each period is lcm(2, sequence period).
    std::optional<std::pair<std::int64_t, std::int64_t>> translation_periods() const noexcept {
        const auto pe = eps_.period();
        const auto ph = eta_.period();
        if (!pe || !ph) {
            return std::nullopt;
        }
        return std::pair{std::lcm<std::int64_t>(2, *pe), std::lcm<std::int64_t>(2, *ph)};
    }

private:
    SequenceSpec eps_;
    SequenceSpec eta_;
};

inline bool has_edge(const Pattern& p, const Edge& e) noexcept { return p.has_edge(e); }
inline std::array<Edge, 2> incident_edges(const Pattern& p, Vertex v) { return p.incident_edges(v); }

} // namespace hitomezashi
