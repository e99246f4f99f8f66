#include "regkit/graph.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "regkit/errors.hpp"

namespace regkit {

Graph::Graph(int node_count, Matrix adj) : n(node_count), adjacency(std::move(adj)) {
    if (n <= 0) throw DomainError("graph must have at least one node");
    if (adjacency.rows() != n || adjacency.cols() != n)
        throw DomainError("adjacency matrix must be n x n");
    for (int i = 0; i < n; ++i) {
        if (adjacency.at(i, i) != 0.0) throw DomainError("self-loops are not allowed");
        for (int j = 0; j < n; ++j) {
            const double v = adjacency.at(i, j);
            if (v != 0.0 && v != 1.0) throw DomainError("adjacency entries must be 0 or 1");
            if (v != adjacency.at(j, i)) throw DomainError("adjacency must be symmetric");
        }
    }
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n <= 0) throw DomainError("graph must have at least one node");
    Matrix adj(n, n);
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw DomainError("edge endpoint out of range");
        if (u == v) throw DomainError("self-loops are not allowed");
        adj.at(u, v) = 1.0;
        adj.at(v, u) = 1.0;
    }
    return Graph(n, std::move(adj));
}

long long Graph::edge_count() const {
    long long m = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adjacency.at(i, j) != 0.0) ++m;
    return m;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adjacency.at(i, j) != 0.0) out.emplace_back(i, j);
    return out;
}

Graph read_graph(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty input", 1);
    ++lineno;
    std::istringstream header(line);
    long long n = 0, m = 0;
    std::string trailing;
    if (!(header >> n >> m) || (header >> trailing))
        throw ParseError("expected header \"n m\"", lineno);
    if (n <= 0 || n > 1'000'000 || m < 0) throw ParseError("invalid graph header", lineno);

    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    for (long long e = 0; e < m; ++e) {
        if (!std::getline(in, line)) throw ParseError("missing edge line", lineno + 1);
        ++lineno;
        std::istringstream es(line);
        long long u = 0, v = 0;
        if (!(es >> u >> v) || (es >> trailing)) throw ParseError("expected edge \"u v\"", lineno);
        if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("edge endpoint out of range", lineno);
        if (u == v) throw ParseError("self-loop", lineno);
        const int lo = static_cast<int>(std::min(u, v));
        const int hi = static_cast<int>(std::max(u, v));
        if (!seen.insert({lo, hi}).second) throw ParseError("duplicate edge", lineno);
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    return Graph::from_edges(static_cast<int>(n), edges);
}

void write_graph(std::ostream& out, const Graph& g) {
    const auto edges = g.edges();
    out << g.n << ' ' << edges.size() << '\n';
    for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
}

Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    return read_graph(in);
}

void write_graph_file(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing", 0);
    write_graph(out, g);
}

} // namespace regkit
