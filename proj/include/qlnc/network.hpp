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

#ifndef QLNC_NETWORK_HPP_
#define QLNC_NETWORK_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qlnc/field.hpp"

namespace qlnc {

enum class Role { Transmitter, Relay, Receiver };

struct MulticastGroup {
    int tx;
    std::vector<int> receivers;
};

/// Interaction graph plus the classical-protocol annotations: node roles,
/// the undirected capability edges of G, the directed edges the code uses,
/// and the multicast demands. Immutable by convention after construction.
struct Network {
    Modulus d{2};
    std::map<int, Role> roles;
    std::vector<std::pair<int, int>> capability;   // undirected edges of G
    std::vector<std::pair<int, int>> directed;     // coded orientation, subset of G
    std::vector<MulticastGroup> multicast;
    bool classical_complete = true;  // classically-controlled gates may span any pair

    std::vector<int> nodes() const {
        std::vector<int> out;
        for (const auto& [id, r] : roles) out.push_back(id);
        return out;
    }

    Role role(int id) const {
        auto it = roles.find(id);
        if (it == roles.end()) throw std::domain_error("unknown node " + std::to_string(id));
        return it->second;
    }

    bool adjacent(int a, int b) const {
        for (const auto& [u, v] : capability) {
            if ((u == a && v == b) || (u == b && v == a)) return true;
        }
        return false;
    }

    std::vector<int> in_neighbors(int v) const {
        std::vector<int> out;
        for (const auto& [a, b] : directed) {
            if (b == v) out.push_back(a);
        }
        return out;
    }

    std::vector<int> out_neighbors(int v) const {
        std::vector<int> out;
        for (const auto& [a, b] : directed) {
            if (a == v) out.push_back(b);
        }
        return out;
    }

    size_t in_degree(int v) const { return in_neighbors(v).size(); }
    size_t out_degree(int v) const { return out_neighbors(v).size(); }

    /// Compiler role preconditions: transmitters have in-degree 0 and
    /// receivers out-degree 0 on the directed edge set.
    std::vector<std::string> role_violations() const {
        std::vector<std::string> out;
        for (const auto& [id, r] : roles) {
            if (r == Role::Transmitter && in_degree(id) != 0) {
                out.push_back("transmitter " + std::to_string(id) + " has in-edges");
            }
            if (r == Role::Receiver && out_degree(id) != 0) {
                out.push_back("receiver " + std::to_string(id) + " has out-edges");
            }
        }
        for (const auto& [a, b] : directed) {
            if (!adjacent(a, b)) {
                out.push_back("directed edge " + std::to_string(a) + "->" + std::to_string(b) +
                              " is not a capability edge");
            }
        }
        return out;
    }
};

/// Weighted broadcast code: every non-receiver broadcasts its accumulated
/// value, scaled per directed edge by a non-zero weight in Z_d. For d = 2
/// all weights are 1 and this is exactly the mod-2 sum-and-broadcast form.
struct LinearCode {
    Modulus d{2};
    std::map<std::pair<int, int>, Fe> weights;  // absent directed edge => 1

    Fe weight_of(int from, int to) const {
        auto it = weights.find({from, to});
        return it == weights.end() ? 1 : it->second;
    }
};

/// Topological order of the directed edges' nodes; throws on a cycle.
inline std::vector<int> topological_nodes(const Network& net) {
    std::map<int, int> indeg;
    for (int v : net.nodes()) indeg[v] = 0;
    for (const auto& [a, b] : net.directed) {
        (void)a;
        ++indeg[b];
    }
    std::vector<int> ready;
    for (const auto& [v, deg] : indeg) {
        if (deg == 0) ready.push_back(v);
    }
    std::vector<int> order;
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end());
        int v = ready.front();
        ready.erase(ready.begin());
        order.push_back(v);
        for (int w : net.out_neighbors(v)) {
            if (--indeg[w] == 0) ready.push_back(w);
        }
    }
    if (order.size() != net.roles.size()) {
        throw std::domain_error("directed edge set has a cycle");
    }
    return order;
}

/// Propagate transmitter symbols through the code in topological order.
/// Returns the value accumulated at every node (receivers decode their sum
/// of inbound messages, which is exactly their accumulated value).
inline std::map<int, Fe> classical_simulate(const Network& net, const LinearCode& code,
                                            const std::map<int, Fe>& inputs) {
    if (net.d != code.d) throw std::domain_error("network/code modulus mismatch");
    std::map<int, Fe> value;
    for (int v : net.nodes()) value[v] = 0;
    for (const auto& [t, s] : inputs) {
        if (net.role(t) != Role::Transmitter) {
            throw std::domain_error("input on non-transmitter node");
        }
        value[t] = net.d.reduce(s);
    }
    for (int v : topological_nodes(net)) {
        for (int w : net.out_neighbors(v)) {
            value[w] = net.d.add(value[w], net.d.mul(code.weight_of(v, w), value[v]));
        }
    }
    return value;
}

/// True iff every receiver in every multicast group decodes exactly its
/// transmitter's symbol. Unit-vector inputs suffice by linearity.
inline bool validate_code(const Network& net, const LinearCode& code) {
    std::vector<int> txs;
    for (const auto& [id, r] : net.roles) {
        if (r == Role::Transmitter) txs.push_back(id);
    }
    for (int probe : txs) {
        std::map<int, Fe> in;
        for (int t : txs) in[t] = (t == probe) ? 1 : 0;
        std::map<int, Fe> out;
        try {
            out = classical_simulate(net, code, in);
        } catch (const std::domain_error&) {
            return false;
        }
        for (const auto& group : net.multicast) {
            Fe want = (group.tx == probe) ? 1 : 0;
            for (int r : group.receivers) {
                if (out.at(r) != want) return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Generators for the worked networks.
// ---------------------------------------------------------------------------

struct NetworkInstance {
    Network net;
    LinearCode code;
};

/// The butterfly on node ids 1..6: transmitters {1,3}, relays {2,5},
/// receivers {4,6}, pairs (1,6) and (3,4). The two cross edges carry weight
/// -1 so the construction works verbatim for every prime d (for d = 2 the
/// weight is 1 and this is the textbook network).
inline NetworkInstance butterfly(uint32_t d = 2) {
    Modulus m(d);
    Network net;
    net.d = m;
    net.roles = {{1, Role::Transmitter}, {3, Role::Transmitter}, {2, Role::Relay},
                 {5, Role::Relay},       {4, Role::Receiver},    {6, Role::Receiver}};
    net.directed = {{1, 2}, {3, 2}, {2, 5}, {5, 4}, {5, 6}, {1, 4}, {3, 6}};
    net.capability = net.directed;
    net.multicast = {{1, {6}}, {3, {4}}};
    LinearCode code;
    code.d = m;
    code.weights[{1, 4}] = m.neg(1);
    code.weights[{3, 6}] = m.neg(1);
    return {net, code};
}

/// w x h grid (w columns >= 3, h rows >= 2) with h unicast streams: the
/// butterfly occupies the top-left 2x3 block (its two streams cross), stream
/// outputs are relayed to the right edge, and each remaining row carries a
/// straight stream left to right. Node ids are row-major starting at 1.
inline NetworkInstance grid(size_t w, size_t h, uint32_t d = 2) {
    if (w < 3 || h < 2) throw std::domain_error("grid needs w >= 3 and h >= 2");
    Modulus m(d);
    auto id = [&](size_t r, size_t c) { return static_cast<int>(r * w + c + 1); };
    Network net;
    net.d = m;
    for (size_t r = 0; r < h; ++r) {
        for (size_t c = 0; c < w; ++c) {
            net.roles[id(r, c)] = Role::Relay;
            if (c + 1 < w) net.capability.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < h) net.capability.push_back({id(r, c), id(r + 1, c)});
        }
    }
    LinearCode code;
    code.d = m;

    // Butterfly block: transmitters (0,0) and (0,2); encoder (0,1); fanout
    // (1,1); decoded outputs at (1,0) and (1,2).
    net.roles[id(0, 0)] = Role::Transmitter;
    net.roles[id(0, 2)] = Role::Transmitter;
    auto add_edge = [&](int a, int b, Fe wgt) {
        net.directed.push_back({a, b});
        if (wgt != 1) code.weights[{a, b}] = wgt;
    };
    add_edge(id(0, 0), id(0, 1), 1);
    add_edge(id(0, 2), id(0, 1), 1);
    add_edge(id(0, 1), id(1, 1), 1);
    add_edge(id(1, 1), id(1, 0), 1);
    add_edge(id(1, 1), id(1, 2), 1);
    add_edge(id(0, 0), id(1, 0), m.neg(1));
    add_edge(id(0, 2), id(1, 2), m.neg(1));
    // Stream A = (0,0)'s symbol, decoded at (1,2); forward it to (1,w-1).
    for (size_t c = 2; c + 1 < w; ++c) add_edge(id(1, c), id(1, c + 1), 1);
    int rx_a = id(1, w - 1);
    net.roles[rx_a] = Role::Receiver;
    // Stream B = (0,2)'s symbol, decoded and received at (1,0).
    net.roles[id(1, 0)] = Role::Receiver;
    net.multicast.push_back({id(0, 0), {rx_a}});
    net.multicast.push_back({id(0, 2), {id(1, 0)}});
    // Straight streams on rows 2..h-1.
    for (size_t r = 2; r < h; ++r) {
        net.roles[id(r, 0)] = Role::Transmitter;
        net.roles[id(r, w - 1)] = Role::Receiver;
        for (size_t c = 0; c + 1 < w; ++c) add_edge(id(r, c), id(r, c + 1), 1);
        net.multicast.push_back({id(r, 0), {id(r, w - 1)}});
    }
    return {net, code};
}

/// The directed k-pairs speed-up family: k transmitters t_i = i on the left,
/// k receivers r_i = k+i on the right, direct links t_i -> r_j for i != j,
/// and a shared 2-node bottleneck carrying the sum of all streams.
inline NetworkInstance directed_speedup(size_t k, uint32_t d = 2) {
    if (k < 2) throw std::domain_error("speed-up family needs k >= 2");
    Modulus m(d);
    Network net;
    net.d = m;
    int c1 = static_cast<int>(2 * k + 1);
    int c2 = static_cast<int>(2 * k + 2);
    LinearCode code;
    code.d = m;
    for (size_t i = 1; i <= k; ++i) {
        int t = static_cast<int>(i);
        int r = static_cast<int>(k + i);
        net.roles[t] = Role::Transmitter;
        net.roles[r] = Role::Receiver;
        net.multicast.push_back({t, {r}});
    }
    net.roles[c1] = Role::Relay;
    net.roles[c2] = Role::Relay;
    for (size_t i = 1; i <= k; ++i) {
        int t = static_cast<int>(i);
        for (size_t j = 1; j <= k; ++j) {
            if (i == j) continue;
            int r = static_cast<int>(k + j);
            net.directed.push_back({t, r});
            if (m.value() > 2) code.weights[{t, r}] = m.neg(1);
        }
        net.directed.push_back({t, c1});
    }
    net.directed.push_back({c1, c2});
    for (size_t j = 1; j <= k; ++j) net.directed.push_back({c2, static_cast<int>(k + j)});
    net.capability = net.directed;
    return {net, code};
}

/// Path network 1 - 2 - ... - len+1 carrying one stream end to end.
inline NetworkInstance chain(size_t len, uint32_t d = 2) {
    if (len < 1) throw std::domain_error("chain needs length >= 1");
    Modulus m(d);
    Network net;
    net.d = m;
    LinearCode code;
    code.d = m;
    int last = static_cast<int>(len + 1);
    for (int v = 1; v <= last; ++v) {
        net.roles[v] = (v == 1) ? Role::Transmitter
                                : (v == last ? Role::Receiver : Role::Relay);
        if (v < last) {
            net.capability.push_back({v, v + 1});
            net.directed.push_back({v, v + 1});
        }
    }
    net.multicast = {{1, {last}}};
    return {net, code};
}

/// Composite of three speed-up copies for which no one-directional linear
/// network code exists: stream A threads all three copies via connector
/// relays, and the two "b" transmitters route toward a common swap node X
/// whose Z-measurement entangles them. Carries no LinearCode; the intended
/// circuit is built by compile_composite.
struct CompositeSwapInstance {
    Network net;
    LinearCode routing;                       // weighted directed edges incl. into X
    std::vector<int> plus_nodes;              // prepared |+>
    int swap_node = 0;                        // the common-receiver node X
    std::vector<std::vector<int>> groups;     // declared Bell pairs
};

inline CompositeSwapInstance composite_swap(uint32_t d = 2) {
    Modulus m(d);
    CompositeSwapInstance inst;
    Network& net = inst.net;
    net.d = m;
    inst.routing.d = m;
    const int k = 3;
    // Copy c (0..2): transmitters 100c+1..3, receivers 100c+11..13,
    // bottleneck 100c+21, 100c+22.
    auto t = [&](int c, int i) { return 100 * c + i; };
    auto r = [&](int c, int i) { return 100 * c + 10 + i; };
    auto u = [&](int c) { return 100 * c + 21; };
    auto v = [&](int c) { return 100 * c + 22; };
    auto add = [&](int a, int b, Fe wgt) {
        net.directed.push_back({a, b});
        if (wgt != 1) inst.routing.weights[{a, b}] = wgt;
    };
    for (int c = 0; c < 3; ++c) {
        for (int i = 1; i <= k; ++i) {
            net.roles[t(c, i)] = Role::Relay;
            net.roles[r(c, i)] = Role::Relay;
        }
        net.roles[u(c)] = Role::Relay;
        net.roles[v(c)] = Role::Relay;
        for (int i = 1; i <= k; ++i) {
            for (int j = 1; j <= k; ++j) {
                if (i != j) add(t(c, i), r(c, j), m.neg(1));
            }
            add(t(c, i), u(c), 1);
        }
        add(u(c), v(c), 1);
        for (int j = 1; j <= k; ++j) add(v(c), r(c, j), 1);
    }
    int g12 = 701, g23 = 702, X = 700;
    net.roles[g12] = Role::Relay;
    net.roles[g23] = Role::Relay;
    net.roles[X] = Role::Relay;
    // Stream A: t(0,1) -> r(0,1) -> g12 -> t(1,1) -> r(1,1) -> g23 -> t(2,1) -> r(2,1).
    add(r(0, 1), g12, 1);
    add(g12, t(1, 1), 1);
    add(r(1, 1), g23, 1);
    add(g23, t(2, 1), 1);
    // Stream B: decoded at r(0,2) and r(2,2), both routed into the swap node.
    add(r(0, 2), X, 1);
    add(r(2, 2), X, m.neg(1));
    net.capability = net.directed;
    inst.swap_node = X;
    inst.plus_nodes = {t(0, 1), t(0, 2), t(0, 3), t(1, 2), t(1, 3), t(2, 2), t(2, 3)};
    inst.groups = {{t(0, 1), r(2, 1)},   // A across all copies
                   {t(0, 2), t(2, 2)},   // B via entanglement swap at X
                   {t(0, 3), r(0, 3)},   // per-copy streams
                   {t(1, 2), r(1, 2)},
                   {t(1, 3), r(1, 3)},
                   {t(2, 3), r(2, 3)}};
    // Declared pairs double as the multicast annotation (there is no linear
    // network code here; the B pair has two transmitter-like ends).
    for (const auto& g : inst.groups) {
        net.multicast.push_back({g[0], {g.begin() + 1, g.end()}});
    }
    return inst;
}

/// Brute-force search over orientations of the capability edges for one that
/// makes the plain broadcast code decode every multicast demand. Returns the
/// oriented network. Test-fixture helper; d = 2, at most 10 edges.
inline std::optional<Network> search_code_bruteforce(const Network& base) {
    if (base.d.value() != 2) throw std::domain_error("brute-force search is d = 2 only");
    size_t e = base.capability.size();
    if (e > 10) throw std::domain_error("brute-force search capped at 10 edges");
    size_t combos = 1;
    for (size_t i = 0; i < e; ++i) combos *= 3;  // off / forward / backward
    for (size_t mask = 0; mask < combos; ++mask) {
        Network cand = base;
        cand.directed.clear();
        size_t m = mask;
        for (size_t i = 0; i < e; ++i) {
            switch (m % 3) {
                case 1: cand.directed.push_back(base.capability[i]); break;
                case 2:
                    cand.directed.push_back({base.capability[i].second, base.capability[i].first});
                    break;
                default: break;
            }
            m /= 3;
        }
        if (!cand.role_violations().empty()) continue;
        LinearCode code;
        code.d = base.d;
        try {
            if (validate_code(cand, code)) return cand;
        } catch (const std::domain_error&) {
            continue;
        }
    }
    return std::nullopt;
}

}  // namespace qlnc

#endif  // QLNC_NETWORK_HPP_
