#pragma once

// Line-oriented text format:
//
//   mws-graph v1
//   V <num_vertices>
//   + <u> <v> <weight>
//   - <u> <v> <weight>
//
// '#' starts a comment (whole line or trailing). Edge ids are assigned per
// polarity in file order.

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mws/graph.hpp"

namespace mws {

namespace detail {

inline std::string_view strip_comment(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    return line;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

// Shortest representation that parses back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

} // namespace detail

inline SignedGraph read_graph(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    bool have_count = false;
    std::size_t num_vertices = 0;
    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> seen[2];

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::strip_comment(raw);
        if (line.empty()) continue;
        const auto tok = detail::split_ws(line);
        if (!have_header) {
            if (tok.size() != 2 || tok[0] != "mws-graph" || tok[1] != "v1")
                throw ParseError(line_no, "expected header 'mws-graph v1'");
            have_header = true;
            continue;
        }
        if (!have_count) {
            if (tok.size() != 2 || tok[0] != "V" || !detail::parse_number(tok[1], num_vertices))
                throw ParseError(line_no, "expected 'V <num_vertices>'");
            if (num_vertices > UINT32_MAX) throw ParseError(line_no, "too many vertices");
            have_count = true;
            continue;
        }
        if (tok.size() != 4 || (tok[0] != "+" && tok[0] != "-"))
            throw ParseError(line_no, "expected '+|- <u> <v> <weight>'");
        Edge e;
        e.polarity = tok[0] == "+" ? Polarity::attractive : Polarity::repulsive;
        std::uint64_t u = 0, v = 0;
        if (!detail::parse_number(tok[1], u) || !detail::parse_number(tok[2], v))
            throw ParseError(line_no, "bad vertex id");
        if (u >= num_vertices || v >= num_vertices) throw ParseError(line_no, "vertex id out of range");
        if (u == v) throw ParseError(line_no, "self-loop");
        if (!detail::parse_number(tok[3], e.weight)) throw ParseError(line_no, "bad weight");
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            throw ParseError(line_no, "weight must be finite and non-negative");
        e.u = static_cast<VertexId>(u);
        e.v = static_cast<VertexId>(v);
        const std::uint64_t key = std::min(u, v) << 32 | std::max(u, v);
        if (!seen[static_cast<int>(e.polarity)].insert(key).second)
            throw ParseError(line_no, "duplicate edge of the same polarity");
        edges.push_back(e);
    }
    if (!have_header) throw ParseError(line_no, "missing header 'mws-graph v1'");
    if (!have_count) throw ParseError(line_no, "missing vertex count line");
    return SignedGraph(num_vertices, edges);
}

inline SignedGraph read_graph(const std::string& text) {
    std::istringstream in(text);
    return read_graph(in);
}

inline void write_graph(const SignedGraph& g, std::ostream& out) {
    out << "mws-graph v1\n";
    out << "V " << g.num_vertices() << '\n';
    for (EdgeRef ref : g.insertion_order()) {
        const Edge& e = g.edge(ref);
        out << polarity_symbol(e.polarity) << ' ' << e.u << ' ' << e.v << ' ' << detail::format_double(e.weight)
            << '\n';
    }
}

inline std::string write_graph(const SignedGraph& g) {
    std::ostringstream out;
    write_graph(g, out);
    return out.str();
}

} // namespace mws
