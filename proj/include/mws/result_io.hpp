#pragma once

// Text outputs of a solve:
//   active set:  one "+ <edge-id>" or "- <edge-id>" per line, attractive first
//   clustering:  one "label <vertex> <cluster>" per line

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mws/graph.hpp"
#include "mws/graph_io.hpp"
#include "mws/mutex_watershed.hpp"

namespace mws {

inline void write_active_set(const ActiveSet& a, std::ostream& out) {
    for (EdgeId id : a.attractive()) out << "+ " << id << '\n';
    for (EdgeId id : a.repulsive()) out << "- " << id << '\n';
}

inline ActiveSet read_active_set(std::istream& in) {
    std::vector<EdgeId> att, rep;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto tok = detail::split_ws(detail::strip_comment(raw));
        if (tok.empty()) continue;
        EdgeId id = 0;
        if (tok.size() != 2 || (tok[0] != "+" && tok[0] != "-") || !detail::parse_number(tok[1], id))
            throw ParseError(line_no, "expected '+|- <edge-id>'");
        (tok[0] == "+" ? att : rep).push_back(id);
    }
    return ActiveSet(std::move(att), std::move(rep));
}

inline void write_clustering(const Clustering& c, std::ostream& out) {
    for (std::size_t v = 0; v < c.labels.size(); ++v) out << "label " << v << ' ' << c.labels[v] << '\n';
}

inline std::string to_text(const ActiveSet& a) {
    std::ostringstream s;
    write_active_set(a, s);
    return s.str();
}

inline std::string to_text(const Clustering& c) {
    std::ostringstream s;
    write_clustering(c, s);
    return s.str();
}

inline nlohmann::ordered_json stats_json(const SolveStats& s) {
    return {{"edge_visits", s.edge_visits},
            {"merges", s.merges},
            {"mutexes_added", s.mutexes_added},
            {"mutex_checks", s.mutex_checks},
            {"mean_min_mutex_check", s.mean_min_mutex_check},
            {"mean_min_mutex_merge", s.mean_min_mutex_merge}};
}

} // namespace mws
