#pragma once

// Structural checks on traced components and the verification campaigns
// (exhaustive over small periodic patterns, randomized over seeded ones).

#include <hitomezashi/certificate_check.hpp>
#include <hitomezashi/certificate_io.hpp>

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace hitomezashi {

namespace detail {

// The lemma checks take any callable that feeds every edge of a walk to
// its argument, so stored components and compact walks share one code path.

template <typename ForEachEdge>
bool parity_direction_holds(ForEachEdge&& for_each_edge) {
    std::optional<bool> vertical_for[2];
    bool ok = true;
    for_each_edge([&](const OrientedEdge& e) {
        const auto parity = static_cast<std::size_t>(floor_mod(e.start.x + e.start.y, 2));
        const bool v = is_vertical(e.dir);
        if (vertical_for[parity] && *vertical_for[parity] != v) {
            ok = false;
        }
        vertical_for[parity] = v;
    });
    return ok && !(vertical_for[0] && vertical_for[1] && *vertical_for[0] == *vertical_for[1]);
}

template <typename ForEachEdge>
std::optional<std::int64_t> bad_column(ForEachEdge&& for_each_edge) {
    bool any = false;
    std::int64_t x0 = 0, x1 = 0;
    for_each_edge([&](const OrientedEdge& e) {
        x0 = any ? std::min(x0, e.start.x) : e.start.x;
        x1 = any ? std::max(x1, e.start.x) : e.start.x;
        any = true;
    });
    if (!any) {
        return std::nullopt;
    }
    struct Seen {
        bool any = false;
        Direction dir{};
        std::int64_t parity = 0;
    };
    std::vector<Seen> columns(static_cast<std::size_t>(x1 - x0 + 1));
    std::optional<std::int64_t> bad;
    for_each_edge([&](const OrientedEdge& e) {
        if (!is_vertical(e.dir)) {
            return;
        }
        auto& c = columns[static_cast<std::size_t>(e.start.x - x0)];
        const std::int64_t p = floor_mod(e.start.y, 2);
        if (c.any && (c.dir != e.dir || c.parity != p) && (!bad || e.start.x < *bad)) {
            bad = e.start.x;
        }
        c = {true, e.dir, p};
    });
    return bad;
}

inline auto edges_of(const TracedComponent& comp) {
    return [&comp](auto&& f) {
        for (const auto& e : comp.edges) {
            f(e);
        }
    };
}

} // namespace detail

/// Edges are parallel exactly when the coordinate sums of their starting
/// vertices have equal parity.
inline bool check_parity_direction(const TracedComponent& comp) {
    return detail::parity_direction_holds(detail::edges_of(comp));
}

/// All vertical edges on x = a share one direction and one starting-y parity.
inline bool check_vertical_direction(const TracedComponent& comp, std::int64_t a) {
    std::optional<Direction> dir;
    std::optional<std::int64_t> parity;
    for (const auto& e : comp.edges) {
        if (e.start.x != a || !is_vertical(e.dir)) {
            continue;
        }
        const std::int64_t p = floor_mod(e.start.y, 2);
        if ((dir && *dir != e.dir) || (parity && *parity != p)) {
            return false;
        }
        dir = e.dir;
        parity = p;
    }
    return true;
}

/// check_vertical_direction for every column in one pass; returns the first
/// failing column, if any.
inline std::optional<std::int64_t> first_bad_column(const TracedComponent& comp) {
    return detail::bad_column(detail::edges_of(comp));
}

/// Everything needed to replay a failure.
struct Violation {
    std::string kind;
    std::string eps;
    std::string eta;
    Vertex seed;
    std::uint64_t length = 0;
    std::string path;
    std::string detail;
};

struct CampaignReport {
    std::uint64_t patterns_examined = 0;
    std::uint64_t loops_found = 0;
    std::map<int, std::uint64_t> loops_by_residue;
    std::uint64_t unresolved = 0;
    std::uint64_t certificates_verified = 0;
    std::uint64_t excursion_nodes = 0;
    std::uint64_t base_nodes = 0;
    std::uint64_t case1_nodes = 0;
    std::uint64_t case2_nodes = 0;
    std::uint64_t max_loop_length = 0;
    std::vector<Violation> lemma_violations;
    double duration_seconds = 0.0;

    bool success() const {
        if (!lemma_violations.empty()) {
            return false;
        }
        for (const auto& [residue, count] : loops_by_residue) {
            if (residue != 4 && count != 0) {
                return false;
            }
        }
        return true;
    }

    void merge(const CampaignReport& o) {
        patterns_examined += o.patterns_examined;
        loops_found += o.loops_found;
        for (const auto& [residue, count] : o.loops_by_residue) {
            loops_by_residue[residue] += count;
        }
        unresolved += o.unresolved;
        certificates_verified += o.certificates_verified;
        excursion_nodes += o.excursion_nodes;
        base_nodes += o.base_nodes;
        case1_nodes += o.case1_nodes;
        case2_nodes += o.case2_nodes;
        max_loop_length = std::max(max_loop_length, o.max_loop_length);
        lemma_violations.insert(lemma_violations.end(), o.lemma_violations.begin(), o.lemma_violations.end());
    }
};

/// Called for every certified loop. Must be thread-safe when workers > 1.
using LoopObserver = std::function<void(const Pattern&, const TracedComponent&, const LoopCertificate&)>;

/// Enumerate, check, decompose and verify every component of `p` meeting `window`.
inline CampaignReport examine_pattern(const Pattern& p, const Window& window, std::int64_t budget,
                                      const LoopObserver& observer = {}) {
    CampaignReport r;
    r.patterns_examined = 1;
    auto violation = [&](Vertex seed, std::uint64_t length, std::string kind, std::string path, std::string detail) {
        r.lemma_violations.push_back({std::move(kind), format_spec(p.eps()), format_spec(p.eta()), seed, length,
                                      std::move(path), std::move(detail)});
    };
    auto lemmas = [&](Vertex seed, std::uint64_t length, const auto& for_each_edge) {
        if (!detail::parity_direction_holds(for_each_edge)) {
            violation(seed, length, "parity-direction", "", "parallel edges with different coordinate-sum parity");
        }
        if (const auto col = detail::bad_column(for_each_edge)) {
            violation(seed, length, "vertical-direction", "", "column x=" + std::to_string(*col));
        }
    };

    std::vector<TracedComponent> loops;
    detail::for_each_component(
        p, window, budget, [&](TracedComponent&& loop) { loops.push_back(canonical_loop(loop)); },
        [&](const detail::WalkView& walk, detail::WalkEnd) {
            ++r.unresolved;
            lemmas(walk.start, walk.dirs.size(), [&](auto&& f) { walk.for_each_edge(f); });
        });
    // same order as enumerate_loops, so reports do not depend on discovery order
    std::sort(loops.begin(), loops.end(),
              [](const auto& a, const auto& b) { return a.edges.front().start < b.edges.front().start; });

    for (const auto& comp : loops) {
        const Vertex seed = comp.edges.front().start;
        lemmas(seed, comp.length, detail::edges_of(comp));
        ++r.loops_found;
        ++r.loops_by_residue[static_cast<int>(comp.length % 8)];
        r.max_loop_length = std::max(r.max_loop_length, comp.length);
        if (comp.length % 8 != 4) {
            violation(seed, comp.length, "residue", "", "length " + std::to_string(comp.length));
        }
        try {
            const LoopCertificate cert = decompose_loop(comp);
            const VerificationReport check = verify_certificate(comp, cert);
            if (!check) {
                violation(seed, comp.length, "certificate", check.path, check.check + ": " + check.detail);
                continue;
            }
            ++r.certificates_verified;
            r.excursion_nodes += check.excursion_nodes;
            r.base_nodes += check.base_nodes;
            r.case1_nodes += check.case1_nodes;
            r.case2_nodes += check.case2_nodes;
            if (observer) {
                observer(p, comp, cert);
            }
        } catch (const InternalContradiction& e) {
            violation(seed, comp.length, "decomposition", e.check(), e.detail());
        }
    }
    return r;
}

namespace detail {

// Runs unit(k) for k in [0, count) on `workers` threads and merges the
// results in index order, so the outcome does not depend on scheduling.
template <typename Unit>
CampaignReport run_units(std::uint64_t count, unsigned workers, Unit unit) {
    std::vector<CampaignReport> parts(count);
    std::atomic<std::uint64_t> next{0};
    auto drain = [&] {
        for (std::uint64_t k = next++; k < count; k = next++) {
            parts[k] = unit(k);
        }
    };
    {
        std::vector<std::unique_ptr<LargeStackThread>> pool;
        const auto n = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(count, 1)));
        for (unsigned w = 0; w < n; ++w) {
            pool.push_back(std::make_unique<LargeStackThread>(drain));
        }
        for (auto& th : pool) {
            th->join();
        }
    }
    CampaignReport total;
    for (const auto& part : parts) {
        total.merge(part);
    }
    return total;
}

inline std::vector<Bit> bits_of(std::uint64_t mask, unsigned count) {
    std::vector<Bit> out(count);
    for (unsigned k = 0; k < count; ++k) {
        out[k] = static_cast<Bit>((mask >> k) & 1U);
    }
    return out;
}

} // namespace detail

inline constexpr unsigned kMaxExhaustiveBits = 16;

/// Every pattern whose eps and eta are periodic repetitions of an n_eps-bit
/// and an n_eta-bit window. Pattern k takes eps bits from the low n_eps bits
/// of k and eta bits from the next n_eta bits.
inline CampaignReport exhaustive_verify(unsigned n_eps, unsigned n_eta, const Window& window,
                                        std::int64_t budget = kDefaultBudget, unsigned workers = 1,
                                        const LoopObserver& observer = {}) {
    if (n_eps == 0 || n_eta == 0 || n_eps > kMaxExhaustiveBits || n_eta > kMaxExhaustiveBits) {
        throw ContractViolation("exhaustive_verify needs 1 <= n_eps, n_eta <= 16");
    }
    if (!window.well_ordered()) {
        throw ContractViolation("window must satisfy x0 <= x1 and y0 <= y1");
    }
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t count = std::uint64_t{1} << (n_eps + n_eta);
    CampaignReport r = detail::run_units(count, workers, [&](std::uint64_t mask) {
        const Pattern p(SequenceSpec::periodic(detail::bits_of(mask, n_eps)),
                        SequenceSpec::periodic(detail::bits_of(mask >> n_eps, n_eta)));
        return examine_pattern(p, window, budget, observer);
    });
    r.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Pattern used by trial `trial` of a random campaign.
inline Pattern random_trial_pattern(std::uint64_t seed, std::uint64_t trial) {
    return {SequenceSpec::seeded(derive_seed(seed, 2 * trial)), SequenceSpec::seeded(derive_seed(seed, 2 * trial + 1))};
}

/// `trials` seeded patterns, each examined on [0..window_size-1]^2.
inline CampaignReport random_verify(std::uint64_t seed, std::uint64_t trials, std::int64_t window_size,
                                    std::int64_t budget = kDefaultBudget, unsigned workers = 1,
                                    const LoopObserver& observer = {}) {
    if (trials < 1) {
        throw ContractViolation("random_verify needs at least one trial");
    }
    if (window_size < 1) {
        throw ContractViolation("window size must be positive");
    }
    const auto start = std::chrono::steady_clock::now();
    const Window window{0, 0, window_size - 1, window_size - 1};
    CampaignReport r = detail::run_units(trials, workers, [&](std::uint64_t trial) {
        return examine_pattern(random_trial_pattern(seed, trial), window, budget, observer);
    });
    r.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Deterministic JSON form; wall-clock duration is left out so equal inputs
/// give byte-identical output.
inline Json to_json(const CampaignReport& r) {
    Json j;
    j["patterns_examined"] = r.patterns_examined;
    j["loops_found"] = r.loops_found;
    Json residues = Json::object();
    for (const auto& [residue, count] : r.loops_by_residue) {
        residues[std::to_string(residue)] = count;
    }
    j["loops_by_residue"] = residues;
    j["unresolved"] = r.unresolved;
    j["certificates_verified"] = r.certificates_verified;
    j["excursion_nodes"] = r.excursion_nodes;
    j["base_nodes"] = r.base_nodes;
    j["case1_nodes"] = r.case1_nodes;
    j["case2_nodes"] = r.case2_nodes;
    j["max_loop_length"] = r.max_loop_length;
    j["lemma_violations"] = Json::array();
    for (const auto& v : r.lemma_violations) {
        Json jv;
        jv["kind"] = v.kind;
        jv["eps"] = v.eps;
        jv["eta"] = v.eta;
        jv["seed_vertex"] = {v.seed.x, v.seed.y};
        jv["length"] = v.length;
        jv["path"] = v.path;
        jv["detail"] = v.detail;
        j["lemma_violations"].push_back(jv);
    }
    j["success"] = r.success();
    return j;
}

} // namespace hitomezashi
