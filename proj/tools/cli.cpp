#include "cli.hpp"

#include <hitomezashi/hitomezashi.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace hitomezashi::cli {

namespace {

// Input problem attributable to one flag; reported as "<flag>: <message>".
struct UsageError {
    std::string flag;
    std::string message;
};

SequenceSpec spec_flag(const std::string& flag, const std::string& text) {
    if (text.empty()) {
        throw UsageError{flag, "required"};
    }
    try {
        return parse_spec(text);
    } catch (const ParseError& e) {
        throw UsageError{flag, e.what()};
    }
}

Pattern pattern_of(const CliConfig& c) { return {spec_flag("--eps", c.eps), spec_flag("--eta", c.eta)}; }

Window window_of(const CliConfig& c) {
    if (!c.window_given) {
        throw UsageError{"--window", "required"};
    }
    const Window w{c.window[0], c.window[1], c.window[2], c.window[3]};
    if (!w.well_ordered()) {
        throw UsageError{"--window", "expected x0 y0 x1 y1 with x0 <= x1 and y0 <= y1"};
    }
    return w;
}

std::string format_of(const CliConfig& c, std::initializer_list<const char*> allowed) {
    const std::string f = c.format.empty() ? *allowed.begin() : c.format;
    for (const char* a : allowed) {
        if (f == a) {
            return f;
        }
    }
    std::string list;
    for (const char* a : allowed) {
        list += (list.empty() ? "" : ", ") + std::string(a);
    }
    throw UsageError{"--format", "'" + f + "' not supported here (use " + list + ")"};
}

Json vertex_json(Vertex v) { return Json::array({v.x, v.y}); }

Json vertices_json(const TracedComponent& comp) {
    Json vs = Json::array();
    for (const auto& e : comp.edges) {
        vs.push_back(vertex_json(e.start));
    }
    if (!comp.is_loop() && !comp.edges.empty()) {
        vs.push_back(vertex_json(comp.edges.back().end()));
    }
    return vs;
}

const char* kind_name(const TracedComponent& comp) { return comp.is_loop() ? "loop" : "unresolved"; }

OrientedEdge seed_of(const Pattern& p, const CliConfig& c) {
    const Vertex v{c.start[0], c.start[1]};
    if (c.dir.empty()) {
        return {v, p.vertical_at(v)};
    }
    Direction d{};
    if (c.dir == "+x") {
        d = Direction::PosX;
    } else if (c.dir == "-x") {
        d = Direction::NegX;
    } else if (c.dir == "+y") {
        d = Direction::PosY;
    } else if (c.dir == "-y") {
        d = Direction::NegY;
    } else {
        throw UsageError{"--dir", "expected one of +x, -x, +y, -y"};
    }
    const OrientedEdge seed{v, d};
    if (!p.has_oriented(seed)) {
        throw UsageError{"--dir", "edge " + to_string(seed) + " is not in the pattern"};
    }
    return seed;
}

void check_budget(const CliConfig& c) {
    if (c.budget <= 0) {
        throw UsageError{"--budget", "must be positive"};
    }
}

Json window_json(const Window& w) { return Json::array({w.x0, w.y0, w.x1, w.y1}); }

void print_report_text(std::ostream& os, const CampaignReport& r) {
    os << "patterns examined      " << r.patterns_examined << '\n'
       << "loops found            " << r.loops_found << '\n'
       << "unresolved components  " << r.unresolved << '\n'
       << "certificates verified  " << r.certificates_verified << '\n'
       << "excursion nodes        " << r.excursion_nodes << " (base " << r.base_nodes << ", case1 " << r.case1_nodes
       << ", case2 " << r.case2_nodes << ")\n"
       << "max loop length        " << r.max_loop_length << '\n'
       << "loops by residue mod 8";
    for (const auto& [residue, count] : r.loops_by_residue) {
        os << "  " << residue << ":" << count;
    }
    os << '\n' << "violations             " << r.lemma_violations.size() << '\n';
    for (const auto& v : r.lemma_violations) {
        os << "  " << v.kind << " eps=" << v.eps << " eta=" << v.eta << " seed=" << to_string(v.seed)
           << " length=" << v.length << (v.path.empty() ? "" : " at " + v.path) << ": " << v.detail << '\n';
    }
    os << "duration               " << std::fixed << std::setprecision(2) << r.duration_seconds << " s\n"
       << (r.success() ? "result                 every loop length is 4 mod 8\n"
                       : "result                 VIOLATION\n");
}

void print_excursion_text(std::ostream& os, const ExcursionCertificate& c, int depth) {
    os << std::string(static_cast<std::size_t>(2 * depth), ' ') << "excursion level " << c.level << " y " << c.start_y
       << (c.reversed ? " <- " : " -> ") << c.end_y << ' ' << to_string(c.case_tag) << " crossings "
       << detail::join(c.crossings);
    if (c.pivot) {
        os << " pivot " << *c.pivot;
    }
    os << " length " << c.length << " = " << predicted_mod8(c.start_y, c.end_y) << " (mod 8)\n";
    for (const auto& child : c.children) {
        print_excursion_text(os, child, depth + 1);
    }
}

struct Emit {
    std::string text;
    int code = kOk;
};

Emit cmd_enumerate(const CliConfig& c) {
    const Pattern p = pattern_of(c);
    const Window w = window_of(c);
    check_budget(c);
    const std::string format = format_of(c, {"text", "structured"});
    const auto comps = enumerate_loops(p, w, c.budget);

    std::ostringstream os;
    if (format == "structured") {
        Json j;
        j["eps"] = format_spec(p.eps());
        j["eta"] = format_spec(p.eta());
        j["window"] = window_json(w);
        j["budget"] = c.budget;
        j["loops"] = Json::array();
        j["unresolved"] = Json::array();
        for (const auto& comp : comps) {
            Json jc;
            jc["start"] = vertex_json(comp.edges.front().start);
            jc["length"] = comp.length;
            if (comp.is_loop()) {
                jc["residue"] = comp.length % 8;
                jc["vertices"] = vertices_json(comp);
                j["loops"].push_back(jc);
            } else {
                j["unresolved"].push_back(jc);
            }
        }
        os << j.dump(2) << '\n';
    } else {
        std::size_t loops = 0;
        for (const auto& comp : comps) {
            loops += comp.is_loop() ? 1 : 0;
        }
        os << "eps " << format_spec(p.eps()) << "\neta " << format_spec(p.eta()) << "\nwindow [" << w.x0 << ".."
           << w.x1 << "]x[" << w.y0 << ".." << w.y1 << "]\nloops " << loops << "\nunresolved " << comps.size() - loops
           << '\n';
        for (const auto& comp : comps) {
            os << kind_name(comp) << " start " << to_string(comp.edges.front().start) << " length " << comp.length;
            if (comp.is_loop()) {
                os << " residue " << comp.length % 8;
            }
            os << '\n';
        }
    }
    return {os.str(), kOk};
}

Emit cmd_trace(const CliConfig& c) {
    const Pattern p = pattern_of(c);
    check_budget(c);
    const std::string format = format_of(c, {"text", "structured"});
    const auto comp = trace_from(p, seed_of(p, c), c.budget);

    std::ostringstream os;
    if (format == "structured") {
        Json j;
        j["eps"] = format_spec(p.eps());
        j["eta"] = format_spec(p.eta());
        j["kind"] = kind_name(comp);
        j["length"] = comp.length;
        j["vertices"] = vertices_json(comp);
        os << j.dump(2) << '\n';
    } else {
        os << kind_name(comp) << " length " << comp.length;
        if (comp.is_loop()) {
            os << " residue " << comp.length % 8;
        }
        os << '\n';
        for (const auto& e : comp.edges) {
            os << to_string(e.start) << ' ';
        }
        os << to_string(comp.edges.back().end()) << '\n';
    }
    return {os.str(), kOk};
}

Emit violation_bundle(const Pattern& p, const TracedComponent& loop, const std::string& kind, const std::string& path,
                      const std::string& detail) {
    Json j;
    j["violation"] = kind;
    j["eps"] = format_spec(p.eps());
    j["eta"] = format_spec(p.eta());
    j["seed_vertex"] = vertex_json(loop.edges.front().start);
    j["length"] = loop.length;
    j["path"] = path;
    j["detail"] = detail;
    return {j.dump(2) + "\n", kViolation};
}

TracedComponent loop_at(const Pattern& p, const CliConfig& c) {
    check_budget(c);
    const auto comp = trace_from(p, seed_of(p, c), c.budget);
    if (!comp.is_loop()) {
        throw UsageError{"--start", "component is unresolved after " + std::to_string(c.budget) +
                                        " steps; only loops have certificates"};
    }
    return canonical_loop(comp);
}

Emit cmd_decompose(const CliConfig& c) {
    const Pattern p = pattern_of(c);
    const std::string format = format_of(c, {"structured", "text"});
    const TracedComponent loop = loop_at(p, c);
    LoopCertificate cert;
    try {
        cert = decompose_loop(loop);
    } catch (const InternalContradiction& e) {
        return violation_bundle(p, loop, "decomposition", e.check(), e.detail());
    }
    const VerificationReport check = verify_certificate(loop, cert);
    if (!check) {
        return violation_bundle(p, loop, "certificate", check.path, check.check + ": " + check.detail);
    }

    if (format == "structured") {
        return {serialize(cert), kOk};
    }
    std::ostringstream os;
    os << "loop level " << cert.level << " crossings " << detail::join(cert.crossings) << " length " << cert.length
       << " = " << cert.residue() << " (mod 8)\n";
    for (const auto& child : cert.children) {
        print_excursion_text(os, child, 1);
    }
    os << "verified: " << check.excursion_nodes << " excursion nodes\n";
    return {os.str(), kOk};
}

Emit cmd_verify_certificate(const CliConfig& c) {
    const Pattern p = pattern_of(c);
    if (c.certificate.empty()) {
        throw UsageError{"--certificate", "required"};
    }
    std::ifstream in(c.certificate);
    if (!in) {
        throw UsageError{"--certificate", "cannot open '" + c.certificate + "'"};
    }
    std::stringstream buf;
    buf << in.rdbuf();
    LoopCertificate cert;
    try {
        cert = parse_loop_certificate(buf.str());
    } catch (const ParseError& e) {
        throw UsageError{"--certificate", e.what()};
    }
    const TracedComponent loop = loop_at(p, c);
    const VerificationReport check = verify_certificate(loop, cert);
    if (!check) {
        return violation_bundle(p, loop, "certificate", check.path, check.check + ": " + check.detail);
    }
    return {"certificate verified: length " + std::to_string(cert.length) + ", " +
                std::to_string(check.excursion_nodes) + " excursion nodes\n",
            kOk};
}

unsigned workers_of(const CliConfig& c) {
    if (c.workers < 1) {
        throw UsageError{"--workers", "must be at least 1"};
    }
    return c.workers;
}

Emit campaign_output(const CliConfig& c, const CampaignReport& r, Json header) {
    const std::string format = format_of(c, {"text", "structured"});
    std::ostringstream os;
    if (format == "structured") {
        header["report"] = to_json(r);
        os << header.dump(2) << '\n';
    } else {
        for (const auto& [key, value] : header.items()) {
            os << std::left << std::setw(23) << key << value.dump() << '\n';
        }
        print_report_text(os, r);
    }
    return {os.str(), r.success() ? kOk : kViolation};
}

Emit cmd_verify_exhaustive(const CliConfig& c) {
    const Window w = window_of(c);
    check_budget(c);
    if (c.n_eps < 1 || c.n_eps > kMaxExhaustiveBits) {
        throw UsageError{"--n-eps", "must be in 1..16"};
    }
    if (c.n_eta < 1 || c.n_eta > kMaxExhaustiveBits) {
        throw UsageError{"--n-eta", "must be in 1..16"};
    }
    format_of(c, {"text", "structured"});
    const auto r = exhaustive_verify(c.n_eps, c.n_eta, w, c.budget, workers_of(c));
    Json header;
    header["command"] = "verify-exhaustive";
    header["n_eps"] = c.n_eps;
    header["n_eta"] = c.n_eta;
    header["window"] = window_json(w);
    header["budget"] = c.budget;
    return campaign_output(c, r, header);
}

Emit cmd_verify_random(const CliConfig& c) {
    check_budget(c);
    if (c.trials < 1) {
        throw UsageError{"--trials", "must be at least 1"};
    }
    if (c.size < 1) {
        throw UsageError{"--size", "must be at least 1"};
    }
    format_of(c, {"text", "structured"});
    const auto r = random_verify(c.seed, c.trials, c.size, c.budget, workers_of(c));
    Json header;
    header["command"] = "verify-random";
    header["seed"] = c.seed;
    header["trials"] = c.trials;
    header["size"] = c.size;
    header["budget"] = c.budget;
    return campaign_output(c, r, header);
}

Emit cmd_render(const CliConfig& c) {
    const Pattern p = pattern_of(c);
    const Window w = window_of(c);
    const std::string format = format_of(c, {"svg", "ascii"});
    if (format == "ascii") {
        return {render_ascii(p, w), kOk};
    }
    if (c.cell_size < 1) {
        throw UsageError{"--cell-size", "must be at least 1"};
    }
    std::vector<TracedComponent> highlights;
    if (c.highlight > 0) {
        check_budget(c);
        for (auto& comp : enumerate_loops(p, w, c.budget)) {
            if (comp.is_loop() && highlights.size() < c.highlight) {
                highlights.push_back(std::move(comp));
            }
        }
    }
    RenderStyle style;
    style.cell_size = c.cell_size;
    style.show_labels = c.labels;
    return {render_svg(p, w, highlights, style), kOk};
}

} // namespace

std::optional<int> parse_args(const std::vector<std::string>& args, CliConfig& config, std::ostream& out,
                              std::ostream& err) {
    CLI::App app{"Hitomezashi patterns: loops, certificates for |loop| = 4 (mod 8), campaigns, drawings",
                 "hitomezashi"};
    app.require_subcommand(1, 1);
    std::vector<std::int64_t> window;
    std::vector<std::int64_t> start;

    auto add_pattern = [&](CLI::App* sub) {
        sub->add_option("--eps", config.eps, "eps sequence (indexed by x): <bits>@<offset>:<ext> or rand:<seed>");
        sub->add_option("--eta", config.eta, "eta sequence (indexed by y): <bits>@<offset>:<ext> or rand:<seed>");
    };
    auto add_window = [&](CLI::App* sub) {
        sub->add_option("--window", window, "x0 y0 x1 y1")->expected(4);
    };
    auto add_start = [&](CLI::App* sub) {
        sub->add_option("--start", start, "x y of a vertex on the component")->expected(2)->required();
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--budget", config.budget, "step budget per traced component");
        sub->add_option("--output,-o", config.output, "write the report here instead of stdout");
        sub->add_option("--format", config.format, "text | structured | svg | ascii");
    };

    auto* enumerate = app.add_subcommand("enumerate", "list every loop meeting a window");
    add_pattern(enumerate);
    add_window(enumerate);
    add_common(enumerate);

    auto* trace = app.add_subcommand("trace", "trace one component");
    add_pattern(trace);
    add_start(trace);
    trace->add_option("--dir", config.dir, "first step: +x, -x, +y or -y (default: the vertical edge)");
    add_common(trace);

    auto* decompose = app.add_subcommand("decompose", "certificate for the loop through --start");
    add_pattern(decompose);
    add_start(decompose);
    add_common(decompose);

    auto* check = app.add_subcommand("verify-certificate", "replay a stored certificate against its loop");
    add_pattern(check);
    add_start(check);
    check->add_option("--certificate", config.certificate, "certificate file")->required();
    add_common(check);

    auto* exhaustive = app.add_subcommand("verify-exhaustive", "all periodic patterns with small windows");
    exhaustive->add_option("--n-eps", config.n_eps, "eps period bits (1..16)");
    exhaustive->add_option("--n-eta", config.n_eta, "eta period bits (1..16)");
    add_window(exhaustive);
    exhaustive->add_option("--workers", config.workers, "worker threads");
    add_common(exhaustive);

    auto* random = app.add_subcommand("verify-random", "seeded random patterns");
    random->add_option("--seed", config.seed, "campaign seed")->required();
    random->add_option("--trials", config.trials, "number of patterns");
    random->add_option("--size", config.size, "window is [0..size-1]^2");
    random->add_option("--workers", config.workers, "worker threads");
    add_common(random);

    auto* render = app.add_subcommand("render", "draw a window as SVG or ASCII");
    add_pattern(render);
    add_window(render);
    render->add_option("--highlight", config.highlight, "highlight the first N loops (canonical order)");
    render->add_option("--cell-size", config.cell_size, "SVG pixels per grid step");
    render->add_flag("--labels", config.labels, "draw eps/eta values along the edges");
    add_common(render);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    for (const auto* sub : app.get_subcommands()) {
        config.subcommand = sub->get_name();
    }
    if (window.size() == 4) {
        std::copy(window.begin(), window.end(), config.window.begin());
        config.window_given = true;
    }
    if (start.size() == 2) {
        std::copy(start.begin(), start.end(), config.start.begin());
    }
    return std::nullopt;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
    Emit emit;
    try {
        if (config.subcommand == "enumerate") {
            emit = cmd_enumerate(config);
        } else if (config.subcommand == "trace") {
            emit = cmd_trace(config);
        } else if (config.subcommand == "decompose") {
            emit = cmd_decompose(config);
        } else if (config.subcommand == "verify-certificate") {
            emit = cmd_verify_certificate(config);
        } else if (config.subcommand == "verify-exhaustive") {
            emit = cmd_verify_exhaustive(config);
        } else if (config.subcommand == "verify-random") {
            emit = cmd_verify_random(config);
        } else if (config.subcommand == "render") {
            emit = cmd_render(config);
        } else {
            err << "error: unknown subcommand '" << config.subcommand << "'\n";
            return kUsage;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.flag << ": " << e.message << '\n';
        return kUsage;
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    if (config.output.empty()) {
        out << emit.text;
    } else {
        std::ofstream file(config.output, std::ios::binary);
        if (!(file << emit.text)) {
            err << "error: --output: cannot write '" << config.output << "'\n";
            return kUsage;
        }
    }
    return emit.code;
}

int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig config;
    if (const auto code = parse_args(args, config, out, err)) {
        return *code;
    }
    return run(config, out, err);
}

} // namespace hitomezashi::cli
