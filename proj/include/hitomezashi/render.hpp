#pragma once

#include <hitomezashi/trace.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace hitomezashi {

struct RenderStyle {
    int cell_size = 24;
    std::string base_stroke = "#9a9a9a";
    std::vector<std::string> highlight_strokes = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#17becf"};
    bool show_labels = false;
};

namespace detail {

// Present edges with both endpoints in the window: horizontal edges row by
// row, then vertical edges column by column.
template <typename F>
void for_each_window_edge(const Pattern& p, const Window& w, F&& f) {
    for (std::int64_t y = w.y0; y <= w.y1; ++y) {
        for (std::int64_t x = w.x0; x < w.x1; ++x) {
            const Edge e{Vertex{x, y}, Vertex{x + 1, y}};
            if (p.has_edge(e)) {
                f(e);
            }
        }
    }
    for (std::int64_t x = w.x0; x <= w.x1; ++x) {
        for (std::int64_t y = w.y0; y < w.y1; ++y) {
            const Edge e{Vertex{x, y}, Vertex{x, y + 1}};
            if (p.has_edge(e)) {
                f(e);
            }
        }
    }
}

inline void check_window(const Window& w) {
    if (!w.well_ordered()) {
        throw ContractViolation("window must satisfy x0 <= x1 and y0 <= y1");
    }
}

} // namespace detail

/// Drawing of the window; y points up (flipped once here, since SVG's y
/// grows downward). Highlighted components are drawn over the base edges,
/// component k in highlight_strokes[k % size].
inline std::string render_svg(const Pattern& p, const Window& w, const std::vector<TracedComponent>& highlights = {},
                              const RenderStyle& style = {}) {
    detail::check_window(w);
    if (style.cell_size < 1) {
        throw ContractViolation("cell_size must be at least 1");
    }
    const std::int64_t cell = style.cell_size;
    const std::int64_t margin = cell;
    const std::int64_t width = (w.x1 - w.x0) * cell + 2 * margin;
    const std::int64_t height = (w.y1 - w.y0) * cell + 2 * margin;
    auto px = [&](std::int64_t x) { return margin + (x - w.x0) * cell; };
    auto py = [&](std::int64_t y) { return margin + (w.y1 - y) * cell; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto line = [&](const Edge& e, const std::string& stroke, int stroke_width) {
        os << "<line x1=\"" << px(e.lo().x) << "\" y1=\"" << py(e.lo().y) << "\" x2=\"" << px(e.hi().x) << "\" y2=\""
           << py(e.hi().y) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width
           << "\" stroke-linecap=\"round\"/>\n";
    };

    os << "<g id=\"pattern\">\n";
    detail::for_each_window_edge(p, w, [&](const Edge& e) { line(e, style.base_stroke, 2); });
    os << "</g>\n";

    for (std::size_t k = 0; k < highlights.size(); ++k) {
        const auto& palette = style.highlight_strokes;
        const std::string stroke = palette.empty() ? "red" : palette[k % palette.size()];
        os << "<g id=\"highlight-" << k << "\">\n";
        for (const auto& oe : highlights[k].edges) {
            if (w.contains(oe.start) && w.contains(oe.end())) {
                line(oe.undirected(), stroke, 4);
            }
        }
        os << "</g>\n";
    }

    if (style.show_labels) {
        const std::int64_t font = std::max<std::int64_t>(cell / 2, 1);
        os << "<g id=\"labels\" font-family=\"monospace\" font-size=\"" << font << "\" text-anchor=\"middle\">\n";
        for (std::int64_t x = w.x0; x <= w.x1; ++x) {
            os << "<text x=\"" << px(x) << "\" y=\"" << height - margin / 4 << "\">"
               << static_cast<int>(p.eps().bit_at(x)) << "</text>\n";
        }
        for (std::int64_t y = w.y0; y <= w.y1; ++y) {
            os << "<text x=\"" << margin / 2 << "\" y=\"" << py(y) + font / 3 << "\">"
               << static_cast<int>(p.eta().bit_at(y)) << "</text>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Character lattice of (2(x1-x0)+1) columns by (2(y1-y0)+1) rows, top row
/// is y1. Vertex (x, y) sits at column 2(x-x0), row 2(y1-y); '_' marks a
/// horizontal edge, '|' a vertical one, '+' a vertex touched by an edge.
inline std::string render_ascii(const Pattern& p, const Window& w) {
    detail::check_window(w);
    const auto cols = static_cast<std::size_t>(2 * (w.x1 - w.x0) + 1);
    const auto rows = static_cast<std::size_t>(2 * (w.y1 - w.y0) + 1);
    std::vector<std::string> grid(rows, std::string(cols, ' '));
    auto col = [&](std::int64_t x) { return static_cast<std::size_t>(2 * (x - w.x0)); };
    auto row = [&](std::int64_t y) { return static_cast<std::size_t>(2 * (w.y1 - y)); };

    detail::for_each_window_edge(p, w, [&](const Edge& e) {
        const std::size_t c = col(e.lo().x);
        const std::size_t r = row(e.lo().y);
        if (e.horizontal()) {
            grid[r][c + 1] = '_';
            grid[r][c + 2] = '+';
        } else {
            grid[r - 1][c] = '|';
            grid[r - 2][c] = '+';
        }
        grid[r][c] = '+';
    });

    std::string out;
    out.reserve(rows * (cols + 1));
    for (const auto& line : grid) {
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace hitomezashi
