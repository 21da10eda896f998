#pragma once

// Certificates for the length of Hitomezashi loops modulo 8.
//
// An a-excursion is a path whose two end vertices lie on x = a - 1 and whose
// other vertices lie in the half plane x >= a. A loop with leftmost column
// x = a splits, after removing its t vertical edges on that column, into t
// (a+1)-excursions. An a-excursion from (a-1, i) to (a-1, j) splits, after
// removing its entry edge, exit edge and its t+1 vertical edges on x = a,
// into t (a+1)-excursions. Applied recursively this yields a tree whose
// local identities
//
//   |C| = 3 + t + sum |C_l|,       |C| = 2|j - i| + 1  (mod 8)
//   |L| = t + sum |C_i|,           |L| = 4             (mod 8)
//
// are each checked exactly. Any failed ordering, parity or length check
// raises InternalContradiction.

#include <hitomezashi/large_stack.hpp>
#include <hitomezashi/trace.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

namespace hitomezashi {

enum class CaseTag : std::uint8_t { Base, Case1, Case2 };

inline const char* to_string(CaseTag c) noexcept {
    switch (c) {
    case CaseTag::Base: return "base";
    case CaseTag::Case1: return "case1";
    default: return "case2";
    }
}

struct ExcursionCertificate {
    std::int64_t level = 0;
    // Normalized so that start_y < end_y; `reversed` records that the
    // excursion was traversed from end_y to start_y.
    std::int64_t start_y = 0;
    std::int64_t end_y = 0;
    bool reversed = false;
    CaseTag case_tag = CaseTag::Base;
    // Starting y of each vertical edge on x = level, in traversal order.
    std::vector<std::int64_t> crossings;
    // Case2 only: smallest s >= 1 with crossings[s-1] < crossings[s].
    std::optional<std::size_t> pivot;
    std::vector<ExcursionCertificate> children;
    std::uint64_t length = 0;

    friend bool operator==(const ExcursionCertificate&, const ExcursionCertificate&) = default;
};

struct LoopCertificate {
    std::int64_t level = 0; // min x over the loop
    // Starting y of each vertical edge on x = level (all pointing -y),
    // largest first and strictly decreasing.
    std::vector<std::int64_t> crossings;
    // children[i] runs from (level, crossings[i] - 1) to (level, crossings[i+1]),
    // wrapping around to crossings[0] for the last child.
    std::vector<ExcursionCertificate> children;
    std::uint64_t length = 0;

    int residue() const noexcept { return static_cast<int>(length % 8); }

    friend bool operator==(const LoopCertificate&, const LoopCertificate&) = default;
};

struct Excursion {
    std::int64_t level = 0;
    std::vector<OrientedEdge> edges;
    Vertex start;
    Vertex end;
};

inline Excursion make_excursion(std::int64_t level, std::vector<OrientedEdge> edges) {
    if (edges.empty()) {
        throw ContractViolation("excursion needs at least one edge");
    }
    const Vertex start = edges.front().start;
    const Vertex end = edges.back().end();
    return {level, std::move(edges), start, end};
}

/// (2|end_y - start_y| + 1) mod 8.
constexpr int predicted_mod8(std::int64_t start_y, std::int64_t end_y) noexcept {
    const std::int64_t d = end_y >= start_y ? end_y - start_y : start_y - end_y;
    return static_cast<int>(floor_mod(2 * floor_mod(d, 8) + 1, 8));
}

namespace detail {

// The walk being decomposed, with its vertical edges indexed by column so
// that a sub-run's crossings are found by binary search instead of a scan.
class WalkIndex {
public:
    explicit WalkIndex(std::span<const OrientedEdge> edges) : edges_(edges) {
        x0_ = x1_ = edges.empty() ? 0 : edges.front().start.x;
        for (const auto& e : edges) {
            x0_ = std::min(x0_, e.start.x);
            x1_ = std::max(x1_, e.start.x);
        }
        offsets_.assign(static_cast<std::size_t>(x1_ - x0_ + 2), 0);
        for (const auto& e : edges) {
            if (is_vertical(e.dir)) {
                ++offsets_[static_cast<std::size_t>(e.start.x - x0_ + 1)];
            }
        }
        for (std::size_t c = 1; c < offsets_.size(); ++c) {
            offsets_[c] += offsets_[c - 1];
        }
        vertical_.resize(offsets_.back());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (is_vertical(edges[k].dir)) {
                vertical_[fill[static_cast<std::size_t>(edges[k].start.x - x0_)]++] = k;
            }
        }
    }

    const OrientedEdge& operator[](std::size_t k) const noexcept { return edges_[k]; }

    // Ascending indices in [first, last] of vertical edges starting on column x.
    std::span<const std::size_t> vertical_on(std::int64_t x, std::size_t first, std::size_t last) const {
        if (x < x0_ || x > x1_ || first > last) {
            return {};
        }
        const auto c = static_cast<std::size_t>(x - x0_);
        const auto begin = vertical_.begin() + static_cast<std::ptrdiff_t>(offsets_[c]);
        const auto end = vertical_.begin() + static_cast<std::ptrdiff_t>(offsets_[c + 1]);
        const auto lo = std::lower_bound(begin, end, first);
        const auto hi = std::upper_bound(lo, end, last);
        return {lo, hi};
    }

private:
    std::span<const OrientedEdge> edges_;
    std::int64_t x0_ = 0;
    std::int64_t x1_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> vertical_;
};

// Edges [lo, lo + size) of the indexed walk, optionally traversed backwards.
struct EdgeRun {
    const WalkIndex* walk;
    std::size_t lo;
    std::size_t size;
    bool reversed;

    std::size_t global(std::size_t k) const noexcept { return reversed ? lo + size - 1 - k : lo + k; }
    std::size_t local(std::size_t g) const noexcept { return reversed ? lo + size - 1 - g : g - lo; }

    OrientedEdge operator[](std::size_t k) const noexcept {
        const OrientedEdge& e = (*walk)[global(k)];
        return reversed ? e.reversed() : e;
    }

    EdgeRun sub(std::size_t first, std::size_t count) const noexcept {
        return {walk, reversed ? lo + size - first - count : lo + first, count, reversed};
    }

    EdgeRun flipped() const noexcept { return {walk, lo, size, !reversed}; }

    // Local positions, in traversal order, of vertical edges on column x
    // strictly inside the run.
    class Positions {
    public:
        Positions(std::size_t lo, std::size_t last, bool reversed, std::span<const std::size_t> found)
            : lo_(lo), last_(last), reversed_(reversed), found_(found) {}
        std::size_t size() const noexcept { return found_.size(); }
        bool empty() const noexcept { return found_.empty(); }
        std::size_t operator[](std::size_t k) const noexcept {
            return reversed_ ? last_ - found_[found_.size() - 1 - k] : found_[k] - lo_;
        }
        std::size_t front() const noexcept { return (*this)[0]; }
        std::size_t back() const noexcept { return (*this)[size() - 1]; }

    private:
        std::size_t lo_;
        std::size_t last_;
        bool reversed_;
        std::span<const std::size_t> found_;
    };

    Positions inner_vertical(std::int64_t x) const {
        if (size < 3) {
            return {lo, lo + size - 1, reversed, {}};
        }
        return {lo, lo + size - 1, reversed, walk->vertical_on(x, lo + 1, lo + size - 2)};
    }
};

inline std::string join(const std::vector<std::int64_t>& ys) {
    std::ostringstream os;
    os << '[';
    for (std::size_t k = 0; k < ys.size(); ++k) {
        os << (k ? "," : "") << ys[k];
    }
    os << ']';
    return os.str();
}

[[noreturn]] inline void contradiction(const char* check, std::int64_t level, std::int64_t i, std::int64_t j,
                                       const std::vector<std::int64_t>& ys, const std::string& what) {
    std::ostringstream os;
    os << what << " (level " << level << ", i=" << i << ", j=" << j << ", crossings=" << join(ys) << ")";
    throw InternalContradiction(check, os.str());
}

// Consecutive edges (cyclically for loops) alternate horizontal/vertical.
inline void check_alternation(std::span<const OrientedEdge> edges, bool cyclic, std::int64_t a) {
    const std::size_t n = edges.size();
    for (std::size_t k = 1; k < n + (cyclic ? 1 : 0); ++k) {
        if (is_vertical(edges[k - 1].dir) == is_vertical(edges[k % n].dir)) {
            contradiction("alternation", a, 0, 0, {}, "edges " + std::to_string(k - 1) + " and " +
                                                          std::to_string(k % n) + " are parallel");
        }
    }
}

// Deep trees go to a large stack; the recursion depth is the width.
inline bool needs_large_stack(std::span<const OrientedEdge> edges) {
    if (edges.size() < 4096) {
        return false;
    }
    std::int64_t x0 = edges.front().start.x, x1 = x0;
    for (const auto& e : edges) {
        x0 = std::min(x0, e.start.x);
        x1 = std::max(x1, e.start.x);
    }
    return x1 - x0 > 1000;
}

inline bool strictly_increasing(const std::vector<std::int64_t>& ys, std::size_t first, std::size_t last) {
    for (std::size_t k = first + 1; k <= last; ++k) {
        if (!(ys[k - 1] < ys[k])) {
            return false;
        }
    }
    return true;
}

inline bool strictly_decreasing(const std::vector<std::int64_t>& ys, std::size_t first, std::size_t last) {
    for (std::size_t k = first + 1; k <= last; ++k) {
        if (!(ys[k - 1] > ys[k])) {
            return false;
        }
    }
    return true;
}

// Only the root's vertices are checked against the half plane. Below it the
// walk alternates horizontal and vertical steps, so an interior vertex of a
// child on x = a would carry a vertical edge on x = a inside the parent's
// run, and that edge would have been one of the parent's crossings.
inline ExcursionCertificate decompose_run(EdgeRun run, std::int64_t a) {
    const std::size_t n = run.size;
    if (n < 3) {
        contradiction("excursion-length", a, 0, 0, {}, "excursion with " + std::to_string(n) + " edges");
    }
    const OrientedEdge entry = run[0];
    const OrientedEdge exit = run[n - 1];
    std::int64_t i = entry.start.y;
    std::int64_t j = exit.end().y;
    if (entry.start.x != a - 1 || entry.dir != Direction::PosX || exit.start.x != a || exit.dir != Direction::NegX) {
        contradiction("excursion-endpoints", a, i, j, {}, "entry " + to_string(entry) + ", exit " + to_string(exit));
    }
    if (i == j) {
        contradiction("excursion-endpoints", a, i, j, {}, "start and end coincide");
    }

    ExcursionCertificate cert;
    cert.level = a;
    if (i > j) {
        run = run.flipped();
        std::swap(i, j);
        cert.reversed = true;
    }
    cert.start_y = i;
    cert.end_y = j;
    cert.length = n;

    const auto at = run.inner_vertical(a);
    cert.crossings.reserve(at.size());
    for (std::size_t k = 0; k < at.size(); ++k) {
        cert.crossings.push_back(run[at[k]].start.y);
    }
    const auto& ys = cert.crossings;
    if (at.empty() || at.front() != 1 || at.back() != n - 2) {
        contradiction("crossing-placement", a, i, j, ys, "entry/exit not adjacent to a crossing");
    }

    const Direction dir = run[1].dir;
    for (std::size_t k = 0; k < at.size(); ++k) {
        if (run[at[k]].dir != dir) {
            contradiction("crossing-direction", a, i, j, ys, "crossings on x=a point both ways");
        }
    }
    for (std::int64_t y : ys) {
        if (floor_mod(y - i, 2) != 0 || floor_mod(y - j - 1, 2) != 0) {
            contradiction("crossing-parity", a, i, j, ys, "expected i = y = j+1 (mod 2)");
        }
    }

    const std::size_t t = ys.size() - 1;
    if (t == 0) {
        if (n != 3 || j - i != 1 || ys[0] != i) {
            contradiction("base-case", a, i, j, ys, "length " + std::to_string(n));
        }
        cert.case_tag = CaseTag::Base;
        return cert;
    }

    if (dir == Direction::PosY) {
        cert.case_tag = CaseTag::Case1;
        if (ys.front() != i || ys.back() != j - 1 || !strictly_increasing(ys, 0, t)) {
            contradiction("case1-order", a, i, j, ys, "expected i = y_0 < ... < y_t = j-1");
        }
    } else {
        cert.case_tag = CaseTag::Case2;
        std::size_t s = 1;
        while (s <= t && !(ys[s - 1] < ys[s])) {
            ++s;
        }
        if (s > t) {
            contradiction("case2-pivot", a, i, j, ys, "no s with y_{s-1} < y_s");
        }
        cert.pivot = s;
        if (ys.front() != i || ys.back() != j + 1 || !strictly_decreasing(ys, 0, s - 1) ||
            !strictly_decreasing(ys, s, t) || !(ys.front() < ys.back())) {
            contradiction("case2-order", a, i, j, ys,
                          "expected y_{s-1} < ... < y_0 = i < y_t = j+1 < ... < y_s with s=" + std::to_string(s));
        }
    }

    const std::int64_t step_back = cert.case_tag == CaseTag::Case1 ? 1 : -1;
    std::uint64_t total = 3 + t;
    cert.children.reserve(t);
    for (std::size_t l = 1; l <= t; ++l) {
        const std::size_t first = at[l - 1] + 1;
        ExcursionCertificate child = decompose_run(run.sub(first, at[l] - first), a + 1);
        const std::int64_t from = ys[l - 1] + step_back;
        const std::int64_t to = ys[l];
        const bool ok = child.reversed ? (child.end_y == from && child.start_y == to)
                                       : (child.start_y == from && child.end_y == to);
        if (!ok) {
            contradiction("child-endpoints", a, i, j, ys, "child " + std::to_string(l));
        }
        total += child.length;
        cert.children.push_back(std::move(child));
    }

    if (total != n) {
        contradiction("length-identity", a, i, j, ys,
                      "|C| = " + std::to_string(n) + " but 3 + t + sum = " + std::to_string(total));
    }

    const int expected = predicted_mod8(i, j);
    std::int64_t algebra = 0;
    if (cert.case_tag == CaseTag::Case1) {
        algebra = 3 + static_cast<std::int64_t>(t);
        for (std::size_t l = 1; l <= t; ++l) {
            algebra += 2 * (ys[l] - ys[l - 1]) - 1;
        }
    } else {
        const std::size_t s = *cert.pivot;
        algebra = 4 * ys[s] - 4 * ys[s - 1] - 2 * j + 2 * i + 5;
    }
    if (floor_mod(algebra, 8) != expected) {
        contradiction("residue-algebra", a, i, j, ys, "crossing-list residue " + std::to_string(floor_mod(algebra, 8)));
    }
    if (static_cast<int>(n % 8) != expected) {
        contradiction("excursion-residue", a, i, j, ys,
                      "|C| = " + std::to_string(n) + " but 2|j-i|+1 = " + std::to_string(expected) + " (mod 8)");
    }
    return cert;
}

} // namespace detail

/// Recursive certificate for one a-excursion.
inline ExcursionCertificate decompose_excursion(const Excursion& exc) {
    if (exc.edges.empty() || exc.edges.front().start != exc.start || exc.edges.back().end() != exc.end) {
        throw ContractViolation("excursion start/end do not match its edges");
    }
    std::unordered_set<Vertex> seen;
    seen.insert(exc.start);
    for (std::size_t k = 0; k < exc.edges.size(); ++k) {
        if (k > 0 && exc.edges[k].start != exc.edges[k - 1].end()) {
            throw ContractViolation("excursion edges do not form a walk at edge " + std::to_string(k));
        }
        if (!seen.insert(exc.edges[k].end()).second) {
            throw ContractViolation("excursion revisits vertex " + to_string(exc.edges[k].end()));
        }
    }
    for (std::size_t k = 1; k < exc.edges.size(); ++k) {
        if (exc.edges[k].start.x < exc.level) {
            detail::contradiction("excursion-half-plane", exc.level, exc.start.y, exc.end.y, {},
                                  "vertex " + to_string(exc.edges[k].start) + " left of x=a");
        }
    }
    detail::check_alternation(exc.edges, false, exc.level);
    const detail::WalkIndex index(exc.edges);
    auto run = [&] { return detail::decompose_run({&index, 0, exc.edges.size(), false}, exc.level); };
    return detail::needs_large_stack(exc.edges) ? detail::on_large_stack(run) : run();
}

namespace detail {

inline LoopCertificate decompose_oriented(const TracedComponent& oriented) {
    const auto& edges = oriented.edges;
    const std::size_t n = edges.size();
    const std::int64_t a = edges.front().start.x;
    check_alternation(edges, true, a);

    LoopCertificate cert;
    cert.level = a;
    cert.length = n;
    std::vector<std::size_t> at;
    for (std::size_t k = 0; k < n; ++k) {
        if (edges[k].start.x == a && is_vertical(edges[k].dir)) {
            at.push_back(k);
            cert.crossings.push_back(edges[k].start.y);
        }
    }
    const auto& ys = cert.crossings;
    const std::size_t t = ys.size();
    for (std::int64_t y : ys) {
        if (floor_mod(y - ys.front(), 2) != 0) {
            detail::contradiction("loop-crossing-parity", a, 0, 0, ys, "crossings of mixed parity");
        }
    }
    if (!detail::strictly_decreasing(ys, 0, t - 1)) {
        detail::contradiction("loop-crossing-order", a, 0, 0, ys, "expected y_0 > y_1 > ... > y_{t-1}");
    }

    const WalkIndex index(edges);
    const EdgeRun run{&index, 0, n, false};
    std::uint64_t total = t;
    cert.children.reserve(t);
    for (std::size_t l = 1; l <= t; ++l) {
        const std::size_t first = at[l - 1] + 1;
        const std::size_t stop = l < t ? at[l] : n;
        ExcursionCertificate child = decompose_run(run.sub(first, stop - first), a + 1);
        const std::int64_t from = ys[l - 1] - 1;
        const std::int64_t to = ys[l % t];
        const bool ok = child.reversed ? (child.end_y == from && child.start_y == to)
                                       : (child.start_y == from && child.end_y == to);
        if (!ok) {
            detail::contradiction("loop-child-endpoints", a, 0, 0, ys, "child " + std::to_string(l));
        }
        total += child.length;
        cert.children.push_back(std::move(child));
    }

    if (total != n) {
        detail::contradiction("loop-length-identity", a, 0, 0, ys,
                              "|L| = " + std::to_string(n) + " but t + sum = " + std::to_string(total));
    }
    if (floor_mod(4 * (ys.front() - ys.back()) + 4, 8) != 4 || n % 8 != 4) {
        detail::contradiction("loop-residue", a, 0, 0, ys, "|L| = " + std::to_string(n));
    }
    return cert;
}

} // namespace detail

/// Recursive certificate for a loop; lengths and ordering checked on the way.
inline LoopCertificate decompose_loop(const TracedComponent& loop) {
    if (!loop.is_loop()) {
        throw ContractViolation("decompose_loop needs a closed loop");
    }
    const std::size_t n = loop.edges.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (loop.edges[k].end() != loop.edges[(k + 1) % n].start) {
            throw ContractViolation("loop edges do not form a closed walk at edge " + std::to_string(k));
        }
    }
    if (detail::needs_large_stack(loop.edges)) {
        return detail::on_large_stack([&] { return detail::decompose_oriented(orient_loop_for_decomposition(loop)); });
    }
    return detail::decompose_oriented(orient_loop_for_decomposition(loop));
}

} // namespace hitomezashi
