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

#include "qlnc/coloring.hpp"

#include <gtest/gtest.h>

#include <random>

#include "qlnc/network.hpp"

using namespace qlnc;

namespace {

Network path_network(int n) {
    Network net;
    net.d = Modulus(2);
    for (int v = 1; v <= n; ++v) net.roles[v] = Role::Relay;
    for (int v = 1; v < n; ++v) net.capability.push_back({v, v + 1});
    return net;
}

Network random_graph(std::mt19937_64& rng, int n, double p) {
    Network net;
    net.d = Modulus(2);
    for (int v = 1; v <= n; ++v) net.roles[v] = Role::Relay;
    for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            if ((rng() % 1000) / 1000.0 < p) net.capability.push_back({a, b});
        }
    }
    return net;
}

size_t max_degree(const Network& net) {
    std::map<int, size_t> deg;
    for (const auto& [a, b] : net.capability) {
        ++deg[a];
        ++deg[b];
    }
    size_t m = 0;
    for (const auto& [v, d] : deg) m = std::max(m, d);
    return m;
}

}  // namespace

TEST(VertexColoring, PathNeedsTwoColors) {
    auto vc = greedy_vertex_coloring(path_network(3));
    EXPECT_EQ(vc.num_colors, 2);
}

TEST(VertexColoring, SquareLatticeIsBipartite) {
    // Row-major greedy on a grid patch lands on the 2-coloring.
    auto [net, code] = grid(5, 4);
    auto vc = greedy_vertex_coloring(net);
    EXPECT_EQ(vc.num_colors, 2);
    EXPECT_TRUE(is_proper(net, vc));
}

TEST(VertexColoring, RandomGraphsProperWithinDegreeBound) {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 40; ++iter) {
        Network net = random_graph(rng, 3 + rng() % 10, 0.4);
        auto vc = greedy_vertex_coloring(net);
        EXPECT_TRUE(is_proper(net, vc));
        EXPECT_LE(vc.num_colors, static_cast<int>(max_degree(net)) + 1);
    }
}

TEST(SplitGraph, SingleEdge) {
    auto sg = split_graph({{1, 2}});
    EXPECT_EQ(sg.max_degree, 1u);
}

TEST(SplitGraph, ButterflyDeltaTwo) {
    auto [net, code] = butterfly();
    auto sg = split_graph(net.directed);
    EXPECT_EQ(sg.max_degree, 2u);  // encoder has in-degree 2, fanout out-degree 2
}

TEST(SplitGraph, ThreeInThreeOut) {
    std::vector<std::pair<int, int>> edges = {{1, 0}, {2, 0}, {3, 0}, {0, 4}, {0, 5}, {0, 6}};
    EXPECT_EQ(split_graph(edges).max_degree, 3u);
}

TEST(EdgeColoring, OutStarNeedsThree) {
    std::vector<std::pair<int, int>> edges = {{0, 1}, {0, 2}, {0, 3}};
    auto ec = directed_edge_coloring(edges);
    EXPECT_EQ(ec.num_colors, 3);
    EXPECT_TRUE(is_proper_directed_edge_coloring(edges, ec));
}

TEST(EdgeColoring, ButterflyWithinDeltaPlusOne) {
    auto [net, code] = butterfly();
    auto ec = directed_edge_coloring(net.directed);
    EXPECT_TRUE(is_proper_directed_edge_coloring(net.directed, ec));
    EXPECT_LE(ec.num_colors, 3);  // delta = 2
}

TEST(EdgeColoring, RandomDagsStayProper) {
    std::mt19937_64 rng(37);
    for (int iter = 0; iter < 60; ++iter) {
        int n = 4 + static_cast<int>(rng() % 10);
        std::vector<std::pair<int, int>> edges;
        for (int a = 1; a <= n; ++a) {
            for (int b = a + 1; b <= n; ++b) {
                if (rng() % 3 == 0) edges.push_back({a, b});
            }
        }
        if (edges.empty()) continue;
        auto ec = directed_edge_coloring(edges);
        EXPECT_TRUE(is_proper_directed_edge_coloring(edges, ec)) << "iter " << iter;
        EXPECT_LE(static_cast<size_t>(ec.num_colors), split_graph(edges).max_degree + 1);
    }
}

TEST(EdgeColoring, AchievesDeltaOnBipartiteSplit) {
    // The alternating-path construction should reach exactly delta colors.
    std::mt19937_64 rng(41);
    for (int iter = 0; iter < 30; ++iter) {
        int n = 5 + static_cast<int>(rng() % 8);
        std::vector<std::pair<int, int>> edges;
        for (int a = 1; a <= n; ++a) {
            for (int b = a + 1; b <= n; ++b) {
                if (rng() % 2 == 0) edges.push_back({a, b});
            }
        }
        if (edges.empty()) continue;
        auto ec = directed_edge_coloring(edges);
        EXPECT_LE(static_cast<size_t>(ec.num_colors), split_graph(edges).max_degree);
    }
}
