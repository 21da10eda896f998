#include "tamper.hpp"

#include <hitomezashi/certificate_check.hpp>
#include <hitomezashi/certificate_io.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace hitomezashi;

namespace {

TracedComponent unit_square() {
    const Pattern p(SequenceSpec::constant(0), SequenceSpec::constant(0));
    return canonical_loop(trace_from(p, {{0, 0}, Direction::PosX}));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<TracedComponent> seeded_loops(std::uint64_t seed) {
    std::vector<TracedComponent> out;
    const Pattern p(SequenceSpec::seeded(seed), SequenceSpec::seeded(seed ^ 0xABCDEFULL));
    for (auto& c : enumerate_loops(p, {0, 0, 15, 15})) {
        if (c.is_loop()) {
            out.push_back(std::move(c));
        }
    }
    return out;
}

} // namespace

TEST(Certificate, UnitSquareVerifies) {
    const auto loop = unit_square();
    const auto report = verify_certificate(loop, decompose_loop(loop));
    EXPECT_TRUE(report);
    EXPECT_EQ(report.excursion_nodes, 1U);
    EXPECT_EQ(report.base_nodes, 1U);
}

TEST(Certificate, TamperedCrossingIsLocated) {
    const auto loop = unit_square();
    auto cert = decompose_loop(loop);
    cert.crossings = {3};
    const auto report = verify_certificate(loop, cert);
    EXPECT_FALSE(report);
    EXPECT_EQ(report.path, "loop.children[0]");
    EXPECT_EQ(report.check, "endpoints");
}

TEST(Certificate, ChecksEachIdentity) {
    const auto loop = unit_square();
    const auto good = decompose_loop(loop);

    auto wrong_total = good;
    wrong_total.length = 12;
    EXPECT_EQ(verify_certificate(loop, wrong_total).check, "loop-length-identity");

    auto wrong_child = good;
    wrong_child.children[0].length = 11;
    EXPECT_EQ(verify_certificate(loop, wrong_child).check, "base");

    auto wrong_level = good;
    wrong_level.level = -1;
    EXPECT_EQ(verify_certificate(loop, wrong_level).check, "level");

    auto no_children = good;
    no_children.children.clear();
    EXPECT_EQ(verify_certificate(loop, no_children).check, "children");

    // A certificate for a different loop of the same shape: identities hold
    // but the rebuilt edges do not match.
    const Pattern p(SequenceSpec::constant(0), SequenceSpec::constant(0));
    const auto other = canonical_loop(trace_from(p, {{2, 0}, Direction::PosX}));
    const auto moved = verify_certificate(other, good);
    EXPECT_FALSE(moved);
    EXPECT_EQ(moved.check, "level");

    TracedComponent open = loop;
    open.kind = ComponentKind::Unresolved;
    EXPECT_EQ(verify_certificate(open, good).check, "component");
}

TEST(Certificate, EdgeCoverCatchesShiftedCrossings) {
    // Shift every y in the certificate by 2: all local identities still hold,
    // only the rebuilt edge set gives it away.
    const auto loop = unit_square();
    auto cert = decompose_loop(loop);
    cert.crossings[0] += 2;
    cert.children[0].start_y += 2;
    cert.children[0].end_y += 2;
    cert.children[0].crossings[0] += 2;
    const auto report = verify_certificate(loop, cert);
    EXPECT_FALSE(report);
    EXPECT_EQ(report.check, "edge-cover");
}

TEST(CertificateIo, GoldenUnitSquare) {
    const auto cert = decompose_loop(unit_square());
    const std::string golden = read_file(std::string(HITOMEZASHI_GOLDEN_DIR) + "/unit_square_certificate.json");
    EXPECT_EQ(serialize(cert), golden);
    EXPECT_EQ(parse_loop_certificate(golden), cert);
}

TEST(CertificateIo, RoundTripAndStability) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (const auto& loop : seeded_loops(seed)) {
            const auto cert = decompose_loop(loop);
            const std::string text = serialize(cert);
            const auto back = parse_loop_certificate(text);
            EXPECT_EQ(back, cert);
            EXPECT_EQ(serialize(back), text);
            EXPECT_TRUE(verify_certificate(loop, back));
        }
    }
}

TEST(CertificateIo, ParseErrors) {
    EXPECT_THROW(parse_loop_certificate("not json"), ParseError);
    EXPECT_THROW(parse_loop_certificate("{}"), ParseError);
    auto j = to_json(decompose_loop(unit_square()));
    j["children"][0]["case"] = "case3";
    EXPECT_THROW(loop_certificate_from_json(j), ParseError);
    j = to_json(decompose_loop(unit_square()));
    j["residue"] = 3;
    EXPECT_THROW(loop_certificate_from_json(j), ParseError);
    j = to_json(decompose_loop(unit_square()));
    j["children"][0]["length"] = std::int64_t{3}; // signed but non-negative is fine
    EXPECT_EQ(loop_certificate_from_json(j), decompose_loop(unit_square()));
    j["children"][0]["length"] = -3;
    try {
        loop_certificate_from_json(j);
        FAIL() << "negative length accepted";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("loop.children[0].length"), std::string::npos);
    }
}

TEST(CertificateProperty, SingleFieldTamperingIsDetected) {
    // mutation sites are collected recursively; certificates can be very deep
    detail::on_large_stack([] {
        std::mt19937_64 rng(99);
        int tried = 0;
        for (std::uint64_t seed = 0; tried < 300; ++seed) {
            for (const auto& loop : seeded_loops(seed)) {
                const auto cert = decompose_loop(loop);
                const Json j = to_json(cert);
                for (auto field : {tamper::Field::Crossing, tamper::Field::ChildLength, tamper::Field::Pivot}) {
                    const auto m = tamper::mutate(j, field, rng);
                    const auto report = verify_certificate(loop, loop_certificate_from_json(m.mutated));
                    EXPECT_FALSE(report) << m.where;
                    EXPECT_FALSE(report.path.empty());
                    ++tried;
                }
            }
        }
        return 0;
    });
}
