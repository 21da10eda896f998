// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "oracle.hpp"
#include "tamper.hpp"

#include <cli.hpp>
#include <hitomezashi/hitomezashi.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>

using namespace hitomezashi;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << what << "  [" << detail << "]"
              << std::endl;
    failures += ok ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// Per-node checks shared by the two campaigns. Edge counts are taken from
// where the node's endpoints sit on the traced loop, not from the certificate.
class NodeAudit {
public:
    std::uint64_t nodes = 0;
    std::uint64_t residue_mismatches = 0;
    std::uint64_t identity_failures = 0;
    std::uint64_t loops = 0;
    std::uint64_t total_mismatches = 0;
    double seconds = 0;
    std::string first_problem;

    void operator()(const TracedComponent& loop, const LoopCertificate& cert) {
        const std::lock_guard<std::mutex> lock(mu_);
        const auto start = std::chrono::steady_clock::now();
        ++loops;
        index(loop);
        std::uint64_t sum = 0;
        for (const auto& child : cert.children) {
            sum += child.length;
        }
        if (cert.children.size() != cert.crossings.size() || cert.length != cert.crossings.size() + sum) {
            ++identity_failures;
            note("loop identity");
        }
        if (cert.crossings.size() + sum != loop.length || loop.edges.size() != loop.length) {
            ++total_mismatches;
            note("loop total");
        }
        // explicit stack: trees are as deep as the loop is wide
        std::vector<const ExcursionCertificate*> todo;
        for (const auto& child : cert.children) {
            todo.push_back(&child);
        }
        while (!todo.empty()) {
            const ExcursionCertificate& c = *todo.back();
            todo.pop_back();
            excursion(loop, c);
            for (const auto& child : c.children) {
                todo.push_back(&child);
            }
        }
        seconds += seconds_since(start);
    }

private:
    void note(const std::string& what) {
        if (first_problem.empty()) {
            first_problem = what;
        }
    }

    // Vertex -> position on the loop, and a min-x segment tree over positions.
    void index(const TracedComponent& loop) {
        const std::size_t n = loop.edges.size();
        at_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            at_[k] = {loop.edges[k].start, k};
        }
        std::sort(at_.begin(), at_.end());
        tree_.assign(2 * n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            tree_[n + k] = loop.edges[k].start.x;
        }
        for (std::size_t k = n - 1; k >= 1; --k) {
            tree_[k] = std::min(tree_[2 * k], tree_[2 * k + 1]);
        }
    }

    std::optional<std::size_t> position(Vertex v) const {
        const auto it = std::lower_bound(at_.begin(), at_.end(), std::pair<Vertex, std::size_t>{v, 0});
        if (it == at_.end() || it->first != v) {
            return std::nullopt;
        }
        return it->second;
    }

    // min x over positions [lo, hi)
    std::int64_t min_x(std::size_t lo, std::size_t hi) const {
        const std::size_t n = tree_.size() / 2;
        std::int64_t out = std::numeric_limits<std::int64_t>::max();
        for (lo += n, hi += n; lo < hi; lo >>= 1, hi >>= 1) {
            if (lo & 1) {
                out = std::min(out, tree_[lo++]);
            }
            if (hi & 1) {
                out = std::min(out, tree_[--hi]);
            }
        }
        return out;
    }

    // min x over the `count` positions following `from` cyclically
    std::int64_t min_x_after(std::size_t from, std::size_t count) const {
        const std::size_t n = tree_.size() / 2;
        const std::size_t lo = (from + 1) % n;
        if (count == 0) {
            return std::numeric_limits<std::int64_t>::max();
        }
        if (lo + count <= n) {
            return min_x(lo, lo + count);
        }
        return std::min(min_x(lo, n), min_x(0, lo + count - n));
    }

    // Edges from (level-1, start_y) to (level-1, end_y) along the loop on
    // the side that leaves towards +x, if every vertex between lies in x >= level.
    std::optional<std::uint64_t> count_edges(const TracedComponent& loop, const ExcursionCertificate& c) const {
        const auto from = position({c.level - 1, c.start_y});
        const auto to = position({c.level - 1, c.end_y});
        if (!from || !to) {
            return std::nullopt;
        }
        const std::size_t n = loop.edges.size();
        std::size_t count = 0;
        std::size_t first = 0;
        if (loop.edges[*from].dir == Direction::PosX) {
            count = (*to + n - *from) % n;
            first = *from;
        } else if (loop.edges[(*from + n - 1) % n].dir == Direction::NegX) {
            count = (*from + n - *to) % n;
            first = *to;
        } else {
            return std::nullopt;
        }
        if (count < 3 || min_x_after(first, count - 1) < c.level) {
            return std::nullopt;
        }
        return count;
    }

    void excursion(const TracedComponent& loop, const ExcursionCertificate& c) {
        ++nodes;
        const auto actual = count_edges(loop, c);
        const std::int64_t gap = c.end_y > c.start_y ? c.end_y - c.start_y : c.start_y - c.end_y;
        const std::uint64_t predicted = static_cast<std::uint64_t>(2 * gap + 1) % 8;
        if (!actual || *actual % 8 != predicted || *actual != c.length) {
            ++residue_mismatches;
            note("excursion level " + std::to_string(c.level) + " y " + std::to_string(c.start_y) + ".." +
                 std::to_string(c.end_y));
        }
        std::uint64_t sum = 0;
        for (const auto& child : c.children) {
            sum += child.length;
        }
        if (c.crossings.empty() || c.children.size() + 1 != c.crossings.size() ||
            c.length != 3 + (c.crossings.size() - 1) + sum) {
            ++identity_failures;
            note("excursion identity at level " + std::to_string(c.level));
        }
    }

    std::mutex mu_;
    std::vector<std::pair<Vertex, std::size_t>> at_;
    std::vector<std::int64_t> tree_;
};

struct Campaigns {
    CampaignReport exhaustive;
    CampaignReport random;
    double exhaustive_seconds = 0;
    double random_seconds = 0;
};

std::string summary(const CampaignReport& r) {
    std::ostringstream os;
    os << r.patterns_examined << " patterns, " << r.loops_found << " loops, " << r.unresolved << " unresolved, "
       << r.certificates_verified << " certificates, residues";
    for (const auto& [residue, count] : r.loops_by_residue) {
        os << ' ' << residue << ':' << count;
    }
    os << ", max length " << r.max_loop_length << ", " << r.lemma_violations.size() << " violations";
    return os.str();
}

Campaigns criteria_1_to_4() {
    NodeAudit audit;
    LoopObserver observer = [&](const Pattern&, const TracedComponent& l, const LoopCertificate& c) { audit(l, c); };
    Campaigns out;

    auto t = std::chrono::steady_clock::now();
    out.exhaustive = exhaustive_verify(5, 5, {0, 0, 9, 9}, 1'000'000, 1, observer);
    out.exhaustive_seconds = seconds_since(t) - audit.seconds;
    {
        const auto& r = out.exhaustive;
        const bool ok = r.success() && r.patterns_examined == 1024 && r.loops_found > 0 &&
                        r.certificates_verified == r.loops_found && out.exhaustive_seconds < 30.0;
        std::ostringstream d;
        d << summary(r) << ", " << out.exhaustive_seconds << " s single worker (audit time excluded)";
        report(1, ok, "exhaustive 5+5 bits on [0..9]^2: every loop length is 4 mod 8", d.str());
    }

    const double audited_before = audit.seconds;
    t = std::chrono::steady_clock::now();
    out.random = random_verify(42, 10'000, 32, 1'000'000, 1, observer);
    out.random_seconds = seconds_since(t) - (audit.seconds - audited_before);
    {
        const auto& r = out.random;
        const bool ok = r.success() && r.patterns_examined == 10'000 && r.certificates_verified == r.loops_found &&
                        out.random_seconds < 120.0;
        std::ostringstream d;
        d << summary(r) << ", " << out.random_seconds << " s single worker (audit time excluded), limit 120 s";
        report(2, ok, "random seed 42, 10^4 patterns on [0..31]^2: no violations, under 2 min", d.str());
    }

    const std::uint64_t certified = out.exhaustive.certificates_verified + out.random.certificates_verified;
    {
        const bool ok = audit.nodes > 0 && audit.residue_mismatches == 0 && audit.loops == certified;
        std::ostringstream d;
        d << audit.nodes << " excursion nodes recounted on their loops, " << audit.residue_mismatches
          << " mismatches";
        if (!audit.first_problem.empty()) {
            d << ", first: " << audit.first_problem;
        }
        report(3, ok, "every excursion's edge count = 2|j-i|+1 mod 8", d.str());
    }
    {
        const bool ok = audit.loops == certified && audit.identity_failures == 0 && audit.total_mismatches == 0;
        std::ostringstream d;
        d << audit.loops << " certificates, " << audit.identity_failures << " identity failures, "
          << audit.total_mismatches << " totals differing from the traced length";
        report(4, ok, "length identities hold exactly and totals match traced loops", d.str());
    }
    return out;
}

void criterion_5() {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> coord(-1'000'000, 1'000'000);
    int bad = 0;
    for (int k = 0; k < 10'000; ++k) {
        const Pattern p = oracle::random_pattern(rng);
        const Vertex v{coord(rng), coord(rng)};
        const int horizontal = (p.has_edge(Edge{v, {v.x + 1, v.y}}) ? 1 : 0) + (p.has_edge(Edge{v, {v.x - 1, v.y}}) ? 1 : 0);
        const int vertical = (p.has_edge(Edge{v, {v.x, v.y + 1}}) ? 1 : 0) + (p.has_edge(Edge{v, {v.x, v.y - 1}}) ? 1 : 0);
        bad += (horizontal == 1 && vertical == 1) ? 0 : 1;
    }
    report(5, bad == 0, "degree-2 law on 10^4 random probes", std::to_string(bad) + " probes off");
}

// The oracle box grows until no component meeting the window leaves it
// (up to a margin of 1024). Loops of enumerate_loops lying inside the box
// must be exactly the oracle's cycles, matched by least vertex and length;
// components leaving the box are beyond any finite oracle and only counted.
void criterion_6() {
    const Window w{0, 0, 15, 15};
    int mismatched = 0;
    std::uint64_t compared = 0, beyond = 0;
    int fully_resolved = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Pattern p = random_trial_pattern(606, s);
        std::vector<oracle::NaiveLoop> naive;
        Window box = w;
        std::size_t escaping = 0;
        for (std::int64_t margin = 16;; margin *= 2) {
            escaping = 0;
            box = oracle::grow(w, margin);
            naive = oracle::naive_loops(p, box, w, &escaping);
            if (escaping == 0 || margin >= 1024) {
                break;
            }
        }
        std::vector<oracle::NaiveLoop> inside;
        std::uint64_t outside = 0;
        for (const auto& c : enumerate_loops(p, w)) {
            const bool contained = c.is_loop() && std::all_of(c.edges.begin(), c.edges.end(), [&](const auto& e) {
                                       return box.contains(e.start);
                                   });
            if (contained) {
                inside.push_back({c.edges.front().start, c.length});
            } else {
                ++outside;
            }
        }
        std::sort(inside.begin(), inside.end());
        compared += naive.size();
        beyond += outside;
        fully_resolved += (escaping == 0 && outside == 0) ? 1 : 0;
        mismatched += (inside == naive && (escaping == 0) == (outside == 0)) ? 0 : 1;
    }
    report(6, mismatched == 0, "enumerate_loops matches the naive oracle on 100 seeded patterns",
           std::to_string(compared) + " loops matched exactly, " + std::to_string(mismatched) + " patterns differ, " +
               std::to_string(fully_resolved) + " patterns fully inside the oracle box, " + std::to_string(beyond) +
               " components beyond a 1024 margin counted only");
}

void criterion_7() {
    std::set<std::uint64_t> lengths;
    std::uint64_t observed = 0, off = 0, trials = 0;
    for (; trials < 2000; ++trials) {
        for (const auto& c : enumerate_loops(random_trial_pattern(7, trials), {0, 0, 15, 15})) {
            if (c.is_loop()) {
                ++observed;
                off += c.length % 8 == 4 ? 0 : 1;
                lengths.insert(c.length);
            }
        }
        if (lengths.count(4) && lengths.count(12) && lengths.count(20) && trials >= 20) {
            ++trials;
            break;
        }
    }
    const bool ok = lengths.count(4) && lengths.count(12) && lengths.count(20) && off == 0;
    report(7, ok, "loops of lengths 4, 12 and 20 found; every length is 4 mod 8",
           std::to_string(observed) + " loops in " + std::to_string(trials) + " patterns, " +
               std::to_string(lengths.size()) + " distinct lengths, " + std::to_string(off) + " off residue");
}

void criterion_8() {
    std::mt19937_64 rng(8);
    int tried = 0, missed = 0;
    std::uint64_t trial = 0;
    while (tried < 100) {
        for (const auto& loop : enumerate_loops(random_trial_pattern(808, trial++), {0, 0, 11, 11})) {
            if (!loop.is_loop() || tried >= 100) {
                continue;
            }
            const Json good = to_json(decompose_loop(loop));
            const auto field = static_cast<tamper::Field>(tried % 3);
            const auto m = tamper::mutate(good, field, rng);
            try {
                const auto r = verify_certificate(loop, loop_certificate_from_json(m.mutated));
                missed += (!r && !r.path.empty() && !r.check.empty()) ? 0 : 1;
            } catch (const ParseError&) {
                ++missed; // mutations keep values well-formed; a parse failure is not a located check
            }
            ++tried;
        }
    }
    report(8, missed == 0, "single-field certificate tampering is detected and located",
           std::to_string(tried) + " mutations, " + std::to_string(missed) + " undetected");
}

std::string run_cli(const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = cli::run_command_line(args, out, err);
    return out.str();
}

// The 10^4-pattern campaign is repeated once, with 4 workers, and compared
// with the single-worker run of criterion 2; the cheaper campaigns are run
// through the command line with 1 and 4 workers and compared in full.
void criterion_9(const Campaigns& first) {
    const std::vector<std::string> ex{"verify-exhaustive", "--n-eps", "5", "--n-eta", "5", "--window", "0", "0", "9",
                                      "9", "--budget", "1000000", "--format", "structured"};
    const std::vector<std::string> short_rn{"verify-random", "--seed", "42", "--trials", "200", "--size", "32",
                                            "--budget", "1000000", "--format", "structured"};
    const std::vector<std::string> rn{"verify-random", "--seed", "42", "--trials", "10000", "--size", "32",
                                      "--budget", "1000000", "--format", "structured", "--workers", "4"};
    auto with_workers = [](std::vector<std::string> args, const char* n) {
        args.insert(args.end(), {"--workers", n});
        return args;
    };
    bool ok = true;
    std::string detail;
    for (const auto* base : {&ex, &short_rn}) {
        int c1 = 0, c4 = 0;
        const std::string a = run_cli(with_workers(*base, "1"), c1);
        const std::string b = run_cli(with_workers(*base, "4"), c4);
        bool same = c1 == 0 && c4 == 0 && a == b;
        if (base == &ex) {
            same = same && Json::parse(a)["report"].dump() == to_json(first.exhaustive).dump();
        }
        ok = ok && same;
        detail += (*base)[0] + " " + (*base)[4] + (same ? " identical" : " DIFFERS") + "; ";
    }
    int code = 0;
    const std::string full = run_cli(rn, code);
    const bool same = code == 0 && Json::parse(full)["report"].dump() == to_json(first.random).dump();
    ok = ok && same;
    detail += std::string("verify-random 10000 with 4 workers ") + (same ? "identical" : "DIFFERS") +
              " to the single-worker run";
    report(9, ok, "structured reports are byte-identical across runs and worker counts", detail);
}

} // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const Campaigns first = criteria_1_to_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(first);
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << " in " << seconds_since(start)
              << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
