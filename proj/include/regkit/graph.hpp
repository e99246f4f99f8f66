#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "regkit/matrix.hpp"

namespace regkit {

/// Simple undirected graph held as a dense 0/1 adjacency matrix with zero
/// diagonal. Construction validates all three properties.
struct Graph {
    int n = 0;
    Matrix adjacency;

    Graph() = default;
    Graph(int n, Matrix adjacency);
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    bool has_edge(int u, int v) const { return adjacency.at(u, v) != 0.0; }
    long long edge_count() const;
    std::vector<std::pair<int, int>> edges() const; // u < v, sorted
};

/// Edge-list format: first line "n m", then m lines "u v" with 0-indexed
/// endpoints, u != v, no duplicate edges.
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const Graph& g);

} // namespace regkit
