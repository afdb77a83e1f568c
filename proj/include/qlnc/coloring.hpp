// Copyright 2026 The QLNC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QLNC_COLORING_HPP_
#define QLNC_COLORING_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qlnc/network.hpp"

namespace qlnc {

struct VertexColoring {
    std::map<int, int> color;  // node -> color in 1..num_colors
    int num_colors = 0;
};

struct DirectedEdgeColoring {
    std::map<std::pair<int, int>, int> color;  // directed edge -> color in 1..num_colors
    int num_colors = 0;
};

inline bool is_proper(const Network& net, const VertexColoring& vc) {
    for (const auto& [a, b] : net.capability) {
        auto ia = vc.color.find(a);
        auto ib = vc.color.find(b);
        if (ia == vc.color.end() || ib == vc.color.end()) return false;
        if (ia->second == ib->second) return false;
        if (ia->second < 1 || ia->second > vc.num_colors) return false;
        if (ib->second < 1 || ib->second > vc.num_colors) return false;
    }
    return true;
}

/// No two same-colored edges leave a common vertex or enter a common vertex.
inline bool is_proper_directed_edge_coloring(const std::vector<std::pair<int, int>>& edges,
                                             const DirectedEdgeColoring& ec) {
    std::set<std::pair<int, int>> tails, heads;  // (node, color)
    for (const auto& e : edges) {
        auto it = ec.color.find(e);
        if (it == ec.color.end()) return false;
        int c = it->second;
        if (c < 1 || c > ec.num_colors) return false;
        if (!tails.insert({e.first, c}).second) return false;
        if (!heads.insert({e.second, c}).second) return false;
    }
    return true;
}

/// Greedy proper vertex coloring in ascending node-id order; uses at most
/// max degree + 1 colors and is deterministic.
inline VertexColoring greedy_vertex_coloring(const Network& net) {
    VertexColoring vc;
    std::map<int, std::vector<int>> adj;
    for (int v : net.nodes()) adj[v];
    for (const auto& [a, b] : net.capability) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (const auto& [v, nbrs] : adj) {
        std::set<int> used;
        for (int w : nbrs) {
            auto it = vc.color.find(w);
            if (it != vc.color.end()) used.insert(it->second);
        }
        int c = 1;
        while (used.count(c)) ++c;
        vc.color[v] = c;
        vc.num_colors = std::max(vc.num_colors, c);
    }
    if (!is_proper(net, vc)) throw std::logic_error("greedy coloring not proper");
    return vc;
}

/// The doubled graph: each vertex q splits into q_i (inheriting in-edges)
/// and q_o (inheriting out-edges); every directed edge becomes an undirected
/// edge between an o-copy and an i-copy, so the result is bipartite and its
/// maximum degree is the largest in/out degree of the original.
struct SplitGraph {
    // Every directed edge (a,b) is the split edge (out-copy a, in-copy b).
    std::vector<std::pair<int, int>> edges;  // indices into the original list preserved
    size_t max_degree = 0;                   // = delta
};

inline SplitGraph split_graph(const std::vector<std::pair<int, int>>& directed) {
    SplitGraph sg;
    sg.edges = directed;
    std::map<int, size_t> out_deg, in_deg;
    for (const auto& [a, b] : directed) {
        ++out_deg[a];
        ++in_deg[b];
    }
    for (const auto& [v, c] : out_deg) sg.max_degree = std::max(sg.max_degree, c);
    for (const auto& [v, c] : in_deg) sg.max_degree = std::max(sg.max_degree, c);
    return sg;
}

/// Proper directed-edge coloring with at most delta colors, by alternating-
/// path edge coloring of the (bipartite) split graph.
inline DirectedEdgeColoring directed_edge_coloring(
    const std::vector<std::pair<int, int>>& directed) {
    DirectedEdgeColoring ec;
    SplitGraph sg = split_graph(directed);
    int delta = static_cast<int>(sg.max_degree);
    if (delta == 0) return ec;

    // free/busy tracking per side; tail side keyed by source node, head side
    // by destination node. edge_at[side][node][color] = index of edge or -1.
    std::map<int, std::vector<int>> tail_at, head_at;
    auto slot = [&](std::map<int, std::vector<int>>& m, int node) -> std::vector<int>& {
        auto it = m.find(node);
        if (it == m.end()) it = m.emplace(node, std::vector<int>(delta + 1, -1)).first;
        return it->second;
    };
    auto free_color = [&](std::vector<int>& slots) {
        for (int c = 1; c <= delta; ++c) {
            if (slots[c] == -1) return c;
        }
        throw std::logic_error("no free color; degree bookkeeping broken");
    };

    std::vector<int> assigned(directed.size(), 0);
    for (size_t e = 0; e < directed.size(); ++e) {
        int tail = directed[e].first;
        int head = directed[e].second;
        int alpha = free_color(slot(tail_at, tail));
        int beta = free_color(slot(head_at, head));
        if (alpha != beta) {
            // Walk the alternating (alpha, beta) path starting from head's
            // alpha-edge, then flip it. Head copies see alpha arrivals and
            // tail copies beta arrivals, so the walk cannot reach `tail`
            // (whose alpha is free) and flipping frees alpha at `head`.
            std::vector<int> path;
            bool at_head_side = true;
            int node = head;
            int want = alpha;
            while (true) {
                int idx = at_head_side ? slot(head_at, node)[want] : slot(tail_at, node)[want];
                if (idx == -1) break;
                path.push_back(idx);
                node = at_head_side ? directed[idx].first : directed[idx].second;
                at_head_side = !at_head_side;
                want = (want == alpha) ? beta : alpha;
            }
            for (int idx : path) {
                slot(tail_at, directed[idx].first)[assigned[idx]] = -1;
                slot(head_at, directed[idx].second)[assigned[idx]] = -1;
                assigned[idx] = (assigned[idx] == alpha) ? beta : alpha;
            }
            for (int idx : path) {
                slot(tail_at, directed[idx].first)[assigned[idx]] = idx;
                slot(head_at, directed[idx].second)[assigned[idx]] = idx;
            }
        }
        assigned[e] = alpha;
        slot(tail_at, tail)[alpha] = static_cast<int>(e);
        slot(head_at, head)[alpha] = static_cast<int>(e);
    }
    for (size_t e = 0; e < directed.size(); ++e) {
        ec.color[directed[e]] = assigned[e];
        ec.num_colors = std::max(ec.num_colors, assigned[e]);
    }
    if (!is_proper_directed_edge_coloring(directed, ec)) {
        throw std::logic_error("edge coloring not proper");
    }
    return ec;
}

}  // namespace qlnc

#endif  // QLNC_COLORING_HPP_
