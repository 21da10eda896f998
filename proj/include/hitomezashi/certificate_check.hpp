#pragma once

// Independent checker for loop certificates. It never re-runs the
// decomposition: every node is checked against its parent's crossings, the
// length identities and residues are recomputed from the stored numbers, and
// the edges implied by the tree are rebuilt and compared with the loop.

#include <hitomezashi/decompose.hpp>

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace hitomezashi {

struct VerificationReport {
    bool ok = true;
    std::string path;   // location of the first failure, e.g. "loop.children[2].children[0]"
    std::string check;  // name of the failed check
    std::string detail;

    std::uint64_t excursion_nodes = 0;
    std::uint64_t base_nodes = 0;
    std::uint64_t case1_nodes = 0;
    std::uint64_t case2_nodes = 0;

    explicit operator bool() const noexcept { return ok; }
};

namespace detail {

// Sorts keys: std::sort for short inputs, else LSD radix sort with 11-bit
// digits and as many passes as the largest key needs.
inline void sort_keys(std::vector<std::uint64_t>& keys) {
    constexpr int kDigit = 11;
    constexpr std::size_t kBuckets = std::size_t{1} << kDigit;
    if (keys.size() < 2 * kBuckets) {
        std::sort(keys.begin(), keys.end());
        return;
    }
    std::uint64_t top = 0;
    for (std::uint64_t k : keys) {
        top |= k;
    }
    std::vector<std::uint64_t> buffer(keys.size());
    std::vector<std::size_t> count(kBuckets);
    for (int shift = 0; shift < 64 && (top >> shift) != 0; shift += kDigit) {
        std::fill(count.begin(), count.end(), 0);
        for (std::uint64_t k : keys) {
            ++count[(k >> shift) & (kBuckets - 1)];
        }
        std::size_t sum = 0;
        for (auto& c : count) {
            sum += std::exchange(c, sum);
        }
        for (std::uint64_t k : keys) {
            buffer[count[(k >> shift) & (kBuckets - 1)]++] = k;
        }
        keys.swap(buffer);
    }
}

// Edges encoded as integers relative to a bounding box: an edge maps to its
// lower-left endpoint and orientation, so distinct edges get distinct keys.
class EdgeKeys {
public:
    EdgeKeys(const Window& box, std::size_t expected) : box_(box) { keys_.reserve(expected); }

    void add(const Edge& e) { add_from(e.lo(), e.horizontal()); }
    void add_horizontal(std::int64_t x_left, std::int64_t y) { add_from({x_left, y}, true); }
    void add_vertical(std::int64_t x, std::int64_t y_low) { add_from({x, y_low}, false); }
    void add(const OrientedEdge& e) {
        switch (e.dir) {
        case Direction::PosX: add_horizontal(e.start.x, e.start.y); break;
        case Direction::NegX: add_horizontal(e.start.x - 1, e.start.y); break;
        case Direction::PosY: add_vertical(e.start.x, e.start.y); break;
        case Direction::NegY: add_vertical(e.start.x, e.start.y - 1); break;
        }
    }

    bool outside() const noexcept { return outside_; }
    std::vector<std::uint64_t>& keys() noexcept { return keys_; }

private:
    void add_from(Vertex v, bool horizontal) {
        if (!box_.contains(v)) {
            outside_ = true;
            return;
        }
        const auto col = static_cast<std::uint64_t>(v.x - box_.x0);
        const auto row = static_cast<std::uint64_t>(v.y - box_.y0);
        keys_.push_back(((col * static_cast<std::uint64_t>(box_.height()) + row) << 1) | (horizontal ? 1U : 0U));
    }

    Window box_;
    std::vector<std::uint64_t> keys_;
    bool outside_ = false;
};

class CertificateChecker {
public:
    CertificateChecker(VerificationReport& report, const Window& box, std::size_t expected_edges)
        : report_(report), box_(box), rebuilt_(box, expected_edges) {}

    // Failure at the node currently being visited.
    bool fail(std::string check, std::string detail) {
        report_.ok = false;
        report_.path = path();
        report_.check = std::move(check);
        report_.detail = std::move(detail);
        return false;
    }

    std::string path() const {
        std::string out = "loop";
        for (std::size_t k : trail_) {
            out += ".children[" + std::to_string(k) + "]";
        }
        return out;
    }

    // Checks child `index` of the current node.
    bool child(std::size_t index, const ExcursionCertificate& c, std::int64_t level, std::int64_t from,
               std::int64_t to) {
        trail_.push_back(index);
        if (!node(c, level, from, to)) {
            return false;
        }
        trail_.pop_back();
        return true;
    }

    // `from`/`to`: the endpoint y values the parent says this node runs
    // between, in traversal order.
    bool node(const ExcursionCertificate& c, std::int64_t level, std::int64_t from, std::int64_t to) {
        const std::int64_t a = c.level;
        const std::int64_t i = c.start_y;
        const std::int64_t j = c.end_y;
        const auto& ys = c.crossings;

        if (a != level) {
            return fail("level", "level " + std::to_string(a) + ", parent expects " + std::to_string(level));
        }
        if (a > box_.x1) {
            return fail("level", "level " + std::to_string(a) + " right of the loop's last column " +
                                     std::to_string(box_.x1));
        }
        const bool endpoints_ok = c.reversed ? (i == to && j == from) : (i == from && j == to);
        if (!endpoints_ok || !(i < j)) {
            return fail("endpoints",
                        "start " + std::to_string(i) + ", end " + std::to_string(j) + ", reversed " +
                            (c.reversed ? "true" : "false") + "; parent expects " + std::to_string(from) + " -> " +
                            std::to_string(to));
        }
        if (ys.empty()) {
            return fail("crossings", "no crossings");
        }
        const std::size_t t = ys.size() - 1;
        if ((t == 0) != (c.case_tag == CaseTag::Base)) {
            return fail("case", std::string(to_string(c.case_tag)) + " with t=" + std::to_string(t));
        }
        if (c.children.size() != t) {
            return fail("children", std::to_string(c.children.size()) + " children for t=" + std::to_string(t));
        }
        if (c.pivot.has_value() != (c.case_tag == CaseTag::Case2)) {
            return fail("pivot", "pivot present only for case2");
        }
        for (std::size_t k = 0; k < ys.size(); ++k) {
            if (floor_mod(ys[k] - i, 2) != 0 || floor_mod(ys[k] - j - 1, 2) != 0) {
                return fail("parity", "crossing[" + std::to_string(k) + "] = " + std::to_string(ys[k]));
            }
        }

        ++report_.excursion_nodes;
        std::int64_t step_back = 1;
        switch (c.case_tag) {
        case CaseTag::Base:
            ++report_.base_nodes;
            if (ys[0] != i || j != i + 1 || c.length != 3) {
                return fail("base", "expected crossing at i, j = i+1 and length 3");
            }
            break;
        case CaseTag::Case1:
            ++report_.case1_nodes;
            if (ys.front() != i || ys.back() != j - 1 || !strictly_increasing(ys, 0, t)) {
                return fail("case1-order", "crossings " + join(ys));
            }
            break;
        case CaseTag::Case2: {
            ++report_.case2_nodes;
            step_back = -1;
            std::size_t s = 1;
            while (s <= t && !(ys[s - 1] < ys[s])) {
                ++s;
            }
            if (s > t || *c.pivot != s) {
                return fail("pivot", "stored " + std::to_string(*c.pivot) + ", crossings " + join(ys));
            }
            if (ys.front() != i || ys.back() != j + 1 || !strictly_decreasing(ys, 0, s - 1) ||
                !strictly_decreasing(ys, s, t) || !(ys.front() < ys.back())) {
                return fail("case2-order", "crossings " + join(ys));
            }
            break;
        }
        }

        std::uint64_t total = 3 + t;
        for (std::size_t l = 1; l <= t; ++l) {
            const auto& child = c.children[l - 1];
            if (!this->child(l - 1, child, a + 1, ys[l - 1] + step_back, ys[l])) {
                return false;
            }
            total += child.length;
        }
        if (total != c.length) {
            return fail("length-identity",
                        "length " + std::to_string(c.length) + " but 3 + t + sum = " + std::to_string(total));
        }

        const int expected = predicted_mod8(i, j);
        if (c.case_tag != CaseTag::Base) {
            std::int64_t algebra = 0;
            if (c.case_tag == CaseTag::Case1) {
                algebra = 3 + static_cast<std::int64_t>(t);
                for (std::size_t l = 1; l <= t; ++l) {
                    algebra += 2 * (ys[l] - ys[l - 1]) - 1;
                }
            } else {
                const std::size_t s = *c.pivot;
                algebra = 4 * ys[s] - 4 * ys[s - 1] - 2 * j + 2 * i + 5;
            }
            if (floor_mod(algebra, 8) != expected) {
                return fail("residue-algebra", "crossing-list residue " + std::to_string(floor_mod(algebra, 8)));
            }
        }
        if (static_cast<int>(c.length % 8) != expected) {
            return fail("excursion-residue",
                        "length " + std::to_string(c.length) + " vs 2|j-i|+1 = " + std::to_string(expected) +
                            " (mod 8)");
        }

        rebuilt_.add_horizontal(a - 1, i);
        rebuilt_.add_horizontal(a - 1, j);
        const std::int64_t low = c.case_tag == CaseTag::Case2 ? -1 : 0;
        for (std::int64_t y : ys) {
            rebuilt_.add_vertical(a, y + low);
        }
        return true;
    }

    EdgeKeys& rebuilt() noexcept { return rebuilt_; }

private:
    VerificationReport& report_;
    Window box_;
    EdgeKeys rebuilt_;
    std::vector<std::size_t> trail_;
};


} // namespace detail

namespace detail {

inline VerificationReport verify_loop_certificate(const TracedComponent& loop, const LoopCertificate& cert) {
    Window box{loop.edges.front().start.x, loop.edges.front().start.y, loop.edges.front().start.x,
               loop.edges.front().start.y};
    for (const auto& e : loop.edges) {
        box = {std::min(box.x0, e.start.x), std::min(box.y0, e.start.y), std::max(box.x1, e.start.x),
               std::max(box.y1, e.start.y)};
    }
    VerificationReport report;
    CertificateChecker check(report, box, loop.edges.size());
    const std::int64_t a = box.x0;
    if (cert.level != a) {
        check.fail("level", "level " + std::to_string(cert.level) + ", loop min x " + std::to_string(a));
        return report;
    }
    const auto& ys = cert.crossings;
    const std::size_t t = ys.size();
    if (t == 0 || cert.children.size() != t) {
        check.fail("children", std::to_string(cert.children.size()) + " children for t=" + std::to_string(t));
        return report;
    }
    if (!strictly_decreasing(ys, 0, t - 1)) {
        check.fail("loop-crossing-order", "crossings " + join(ys));
        return report;
    }
    for (std::int64_t y : ys) {
        if (floor_mod(y - ys.front(), 2) != 0) {
            check.fail("loop-crossing-parity", "crossings " + join(ys));
            return report;
        }
    }

    std::uint64_t total = t;
    for (std::size_t l = 1; l <= t; ++l) {
        const auto& child = cert.children[l - 1];
        if (!check.child(l - 1, child, a + 1, ys[l - 1] - 1, ys[l % t])) {
            return report;
        }
        total += child.length;
    }
    if (total != cert.length) {
        check.fail("loop-length-identity",
                   "length " + std::to_string(cert.length) + " but t + sum = " + std::to_string(total));
        return report;
    }
    if (cert.length != loop.length || cert.length != loop.edges.size()) {
        check.fail("loop-length", "certificate total " + std::to_string(cert.length) + ", traced length " +
                                            std::to_string(loop.length));
        return report;
    }
    if (floor_mod(4 * (ys.front() - ys.back()) + 4, 8) != 4) {
        check.fail("loop-residue-algebra", "crossings " + join(ys));
        return report;
    }
    if (cert.length % 8 != 4) {
        check.fail("loop-residue", "length " + std::to_string(cert.length) + " is not 4 (mod 8)");
        return report;
    }

    auto& rebuilt = check.rebuilt();
    for (std::int64_t y : ys) {
        rebuilt.add_vertical(a, y - 1);
    }
    EdgeKeys actual(box, loop.edges.size());
    for (const auto& e : loop.edges) {
        actual.add(e);
    }
    sort_keys(rebuilt.keys());
    sort_keys(actual.keys());
    if (rebuilt.outside() || rebuilt.keys() != actual.keys()) {
        check.fail("edge-cover", "edges implied by the certificate differ from the loop's edges");
    }
    return report;
}

} // namespace detail

/// Checks `cert` against `loop`; on failure the report names the first
/// failing node and check.
inline VerificationReport verify_certificate(const TracedComponent& loop, const LoopCertificate& cert) {
    if (!loop.is_loop() || loop.edges.empty()) {
        VerificationReport report;
        report.ok = false;
        report.path = "loop";
        report.check = "component";
        report.detail = "not a closed loop";
        return report;
    }
    if (detail::needs_large_stack(loop.edges)) {
        return detail::on_large_stack([&] { return detail::verify_loop_certificate(loop, cert); });
    }
    return detail::verify_loop_certificate(loop, cert);
}

} // namespace hitomezashi
