#pragma once

#include <hitomezashi/errors.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace hitomezashi {

struct Vertex {
    std::int64_t x = 0;
    std::int64_t y = 0;

    // Lexicographic: x first, then y.
    friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

inline std::string to_string(const Vertex& v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

enum class Direction : std::uint8_t { PosX, NegX, PosY, NegY };

constexpr bool is_vertical(Direction d) noexcept { return d == Direction::PosY || d == Direction::NegY; }

constexpr Direction opposite(Direction d) noexcept {
    switch (d) {
    case Direction::PosX: return Direction::NegX;
    case Direction::NegX: return Direction::PosX;
    case Direction::PosY: return Direction::NegY;
    default: return Direction::PosY;
    }
}

constexpr Vertex step(Vertex v, Direction d) noexcept {
    switch (d) {
    case Direction::PosX: return {v.x + 1, v.y};
    case Direction::NegX: return {v.x - 1, v.y};
    case Direction::PosY: return {v.x, v.y + 1};
    default: return {v.x, v.y - 1};
    }
}

inline const char* to_string(Direction d) noexcept {
    switch (d) {
    case Direction::PosX: return "+x";
    case Direction::NegX: return "-x";
    case Direction::PosY: return "+y";
    default: return "-y";
    }
}

/// Undirected grid edge, endpoints kept in lexicographic order.
class Edge {
public:
    Edge(Vertex u, Vertex v) {
        const auto dx = u.x - v.x;
        const auto dy = u.y - v.y;
        const bool adjacent = (dy == 0 && (dx == 1 || dx == -1)) || (dx == 0 && (dy == 1 || dy == -1));
        if (!adjacent) {
            throw ContractViolation("edge endpoints " + to_string(u) + " and " + to_string(v) +
                                    " are not grid-adjacent");
        }
        if (v < u) {
            std::swap(u, v);
        }
        lo_ = u;
        hi_ = v;
    }

    const Vertex& lo() const noexcept { return lo_; }
    const Vertex& hi() const noexcept { return hi_; }
    bool horizontal() const noexcept { return lo_.y == hi_.y; }

    friend auto operator<=>(const Edge&, const Edge&) = default;

private:
    Vertex lo_;
    Vertex hi_;
};

inline std::string to_string(const Edge& e) { return "{" + to_string(e.lo()) + "," + to_string(e.hi()) + "}"; }

struct OrientedEdge {
    Vertex start;
    Direction dir = Direction::PosX;

    constexpr Vertex end() const noexcept { return step(start, dir); }
    constexpr OrientedEdge reversed() const noexcept { return {end(), opposite(dir)}; }
    Edge undirected() const { return {start, end()}; }

    friend constexpr bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
};

inline std::string to_string(const OrientedEdge& e) {
    return to_string(e.start) + "->" + to_string(e.end());
}

/// Closed rectangle [x0..x1] x [y0..y1] of grid vertices.
struct Window {
    std::int64_t x0 = 0;
    std::int64_t y0 = 0;
    std::int64_t x1 = 0;
    std::int64_t y1 = 0;

    constexpr bool well_ordered() const noexcept { return x0 <= x1 && y0 <= y1; }
    constexpr bool contains(Vertex v) const noexcept { return v.x >= x0 && v.x <= x1 && v.y >= y0 && v.y <= y1; }
    constexpr std::int64_t width() const noexcept { return x1 - x0 + 1; }
    constexpr std::int64_t height() const noexcept { return y1 - y0 + 1; }

    friend constexpr bool operator==(const Window&, const Window&) = default;
};

} // namespace hitomezashi

template <>
struct std::hash<hitomezashi::Vertex> {
    std::size_t operator()(const hitomezashi::Vertex& v) const noexcept {
        const auto h = static_cast<std::uint64_t>(v.x) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(v.y);
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};
