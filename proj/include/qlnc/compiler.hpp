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

#ifndef QLNC_COMPILER_HPP_
#define QLNC_COMPILER_HPP_

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qlnc/circuit.hpp"
#include "qlnc/coloring.hpp"
#include "qlnc/network.hpp"

namespace qlnc {

/// Depth bound for a compiled constant-depth circuit using a
/// proper A-vertex-coloring and B-color proper directed-edge coloring.
inline int depth_bound(int A, int B) { return 2 * (A - 1) * (B + 1) + 1; }

// ---------------------------------------------------------------------------
// Probe-based correction derivation.
//
// The coefficient rows of the tableau evolve identically on every outcome
// branch; only constants and phases pick up outcome-linear shifts. Running
// the circuit once per record with that single outcome forced to 1 therefore
// reads off the exact per-record correction coefficients.
// ---------------------------------------------------------------------------

struct DerivedCorrections {
    // record -> (qubit -> exponent) of the X / Z gates cancelling its effect
    std::map<int, std::map<int, Fe>> x;
    std::map<int, std::map<int, Fe>> z;
};

inline DerivedCorrections derive_linear_corrections(const QlncCircuit& prefix,
                                                    const std::vector<int>& targets) {
    DerivedCorrections out;
    std::vector<int> records = discover_random_records(prefix);
    std::map<int, Fe> zero;
    for (int r : records) zero[r] = 0;
    OutcomeSource base_src = OutcomeSource::forced_by_record(zero);
    ParityTableau base = execute(prefix, base_src).tableau.canonical();
    const Modulus d = prefix.d;

    for (int r : records) {
        std::map<int, Fe> forced = zero;
        forced[r] = 1;
        OutcomeSource src = OutcomeSource::forced_by_record(forced);
        ParityTableau probe = execute(prefix, src).tableau.canonical();
        if (probe.labels() != base.labels() || probe.rows() != base.rows()) {
            throw std::logic_error("probe changed the tableau structure");
        }
        for (size_t h = 1; h < base.rows(); ++h) {
            for (int l : base.labels()) {
                if (probe.coeff(h, l) != base.coeff(h, l)) {
                    throw std::logic_error("probe changed coefficient rows");
                }
            }
        }
        for (int q : targets) {
            Fe diff = d.sub(probe.constant_of(q), base.constant_of(q));
            if (diff != 0) out.x[r][q] = d.neg(diff);
        }
        for (size_t h = 1; h < base.rows(); ++h) {
            Fe diff = d.sub(probe.phase(h), base.phase(h));
            if (diff == 0) continue;
            // Z on the row's pivot qubit cancels the phase; skip rows whose
            // support misses every target (spectator leftovers).
            int pivot = -1;
            bool touches_target = false;
            for (int l : base.labels()) {
                if (base.coeff(h, l) != 0) {
                    if (pivot < 0) pivot = l;
                    if (std::find(targets.begin(), targets.end(), l) != targets.end()) {
                        touches_target = true;
                    }
                }
            }
            if (pivot >= 0 && touches_target) out.z[r][pivot] = d.neg(diff);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// In-order compilation: simulate the code's transmissions directly.
// ---------------------------------------------------------------------------

inline QlncCircuit compile_inorder(const Network& net, const LinearCode& code) {
    if (!validate_code(net, code)) throw std::domain_error("code does not decode");
    std::vector<int> topo = topological_nodes(net);  // throws on cycles

    QlncCircuit c;
    c.d = net.d;
    c.graph = net;
    for (int v : net.nodes()) {
        c.ops.push_back(net.role(v) == Role::Transmitter ? QlncOp::prep_plus(v)
                                                         : QlncOp::prep_zero(v));
    }
    std::map<int, int> busy;        // last step touching the qubit
    std::map<int, int> value_done;  // step after which the node's value is complete
    for (int v : net.nodes()) {
        busy[v] = 0;
        value_done[v] = 0;
    }
    for (int v : topo) {
        std::vector<int> outs = net.out_neighbors(v);
        std::sort(outs.begin(), outs.end());
        for (int w : outs) {
            int t = std::max({value_done[v], busy[v], busy[w]}) + 1;
            c.ops.push_back(QlncOp::cnot(v, w, t, code.weight_of(v, w)));
            busy[v] = busy[w] = t;
            value_done[w] = std::max(value_done[w], t);
        }
    }
    int record = 0;
    for (int v : topo) {
        if (net.role(v) != Role::Relay) continue;
        if (net.in_degree(v) == 0 && net.out_degree(v) == 0) continue;  // spectator
        c.ops.push_back(QlncOp::terminate(v, record++, busy[v] + 1));
        busy[v] += 1;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Constant-depth compilation: colour-round protocol with mid-round
// terminations and delayed signal corrections.
// ---------------------------------------------------------------------------

/// The delayed signal correction recursion of the constant-depth protocol:
/// for every final-round-measured relay r, W_r = [fresh symbol broadcast] y_r +
/// sum over in-edges (p -> r) of lambda * W_p, and each receiver q takes an
/// X^{w_q} with w_q = sum over in-edges of lambda * W_p. Expanded here to
/// per-record coefficients by topological traversal.
struct DelayedCorrectionPlan {
    std::map<int, std::map<int, Fe>> relay_w;     // relay -> record -> coeff
    std::map<int, std::map<int, Fe>> receiver_w;  // receiver -> record -> coeff
    std::map<int, int> record_of_relay;           // measured relay -> record id
};

struct ConstantDepthResult {
    QlncCircuit circuit;
    DelayedCorrectionPlan plan;
    int A = 0;
    int B = 0;
};

inline ConstantDepthResult compile_constant_depth_full(const Network& net,
                                                       const LinearCode& code,
                                                       const VertexColoring& vc,
                                                       const DirectedEdgeColoring& ec) {
    {
        auto rv = net.role_violations();
        if (!rv.empty()) throw std::domain_error("network precondition: " + rv.front());
    }
    if (!validate_code(net, code)) throw std::domain_error("code does not decode");
    topological_nodes(net);  // acyclicity
    if (!is_proper(net, vc)) throw std::domain_error("vertex coloring not proper");
    if (!is_proper_directed_edge_coloring(net.directed, ec)) {
        throw std::domain_error("directed-edge coloring not proper");
    }
    const Modulus d = net.d;
    const int A = vc.num_colors;
    const int B = std::max(ec.num_colors, 1);
    auto color = [&](int v) { return vc.color.at(v); };
    auto ecolor = [&](const std::pair<int, int>& e) { return ec.color.at(e); };

    auto participating = [&](int v) {
        return net.in_degree(v) + net.out_degree(v) > 0;
    };
    for (int v : net.nodes()) {
        if (net.role(v) == Role::Relay && net.out_degree(v) > 0 && net.in_degree(v) == 0) {
            throw std::domain_error("relay " + std::to_string(v) +
                                    " broadcasts but receives nothing");
        }
    }

    // Initialisation rule: |0> for receivers/spectators and for nodes with an
    // earlier-colored in-neighbour; |+> otherwise.
    std::map<int, Prep> prep;
    for (int v : net.nodes()) {
        bool zero = net.out_degree(v) == 0;
        for (int p : net.in_neighbors(v)) {
            if (color(p) < color(v)) zero = true;
        }
        prep[v] = zero ? Prep::Zero : Prep::Plus;
    }
    auto mid_terminated = [&](int v) {
        if (net.role(v) == Role::Receiver || !participating(v)) return false;
        if (color(v) < 2 || color(v) > A - 1) return false;
        for (int p : net.in_neighbors(v)) {
            if (color(p) < color(v)) return true;
        }
        return false;
    };
    auto rebroadcasts = [&](int v) {
        if (!mid_terminated(v)) return false;
        for (int p : net.in_neighbors(v)) {
            if (color(p) > color(v)) return true;
        }
        return false;
    };
    // Whether the node's fresh indeterminate is transmitted (negated weights)
    // and later identified by the final-round Z measurement.
    auto fresh_broadcast = [&](int v) {
        if (net.role(v) != Role::Relay) return false;
        return prep[v] == Prep::Plus || rebroadcasts(v);
    };

    QlncCircuit c;
    c.d = d;
    c.graph = net;
    for (int v : net.nodes()) {
        c.ops.push_back(prep[v] == Prep::Plus ? QlncOp::prep_plus(v) : QlncOp::prep_zero(v));
    }

    int t = 0;
    // A first fire sends the node's current value; the fresh indeterminate of
    // a |+>-prepared relay goes out negated (it is later identified by the
    // final-round measurement with the negative of the late-arriving sum).
    auto emit_first_fires = [&](int h) {
        std::map<int, std::vector<std::pair<std::pair<int, int>, bool>>> by_color;
        for (const auto& e : net.directed) {
            if (color(e.first) != h || net.role(e.first) == Role::Receiver) continue;
            bool neg = prep[e.first] == Prep::Plus && fresh_broadcast(e.first);
            by_color[ecolor(e)].push_back({e, neg});
        }
        for (auto& [col, group] : by_color) {
            ++t;
            for (const auto& [e, neg] : group) {
                Fe w = code.weight_of(e.first, e.second);
                if (neg) w = d.neg(w);
                c.ops.push_back(QlncOp::cnot(e.first, e.second, t, w));
            }
        }
    };

    int record = 0;
    std::map<int, int> record_of;  // measured/terminated node -> record

    emit_first_fires(1);  // colour-1 round (no terminations possible)
    for (int h = 2; h <= A - 1; ++h) {
        emit_first_fires(h);
        std::vector<int> terms;
        for (int v : net.nodes()) {
            if (color(v) == h && mid_terminated(v)) terms.push_back(v);
        }
        if (terms.empty()) continue;
        ++t;
        for (int v : terms) {
            record_of[v] = record;
            c.ops.push_back(QlncOp::terminate(v, record++, t));
        }
        std::map<int, std::vector<std::pair<int, int>>> rebroadcast_edges;
        for (int v : terms) {
            if (!rebroadcasts(v)) continue;
            for (const auto& e : net.directed) {
                if (e.first == v) rebroadcast_edges[ecolor(e)].push_back(e);
            }
        }
        for (auto& [col, group] : rebroadcast_edges) {
            ++t;
            for (const auto& [a, b] : group) {
                c.ops.push_back(QlncOp::cnot(a, b, t, d.neg(code.weight_of(a, b))));
            }
        }
    }
    if (A >= 2) emit_first_fires(A);
    // Final round: Z-measure early-coloured relays, terminate colour-A relays.
    std::vector<int> measured;
    {
        bool any = false;
        int step = t + 1;
        for (int v : net.nodes()) {
            if (net.role(v) != Role::Relay || !participating(v)) continue;
            if (color(v) < A) {
                record_of[v] = record;
                c.ops.push_back(QlncOp::measure_z(v, record++, step));
                measured.push_back(v);
                any = true;
            } else {
                record_of[v] = record;
                c.ops.push_back(QlncOp::terminate(v, record++, step));
                any = true;
            }
        }
        if (any) t = step;
    }

    // Delayed signal corrections. The deficit W flows through every
    // relay that forwarded values (terminated colour-A relays included, since
    // they may re-transmit a measured relay's fresh symbol downstream); the
    // outcome term enters only where a fresh symbol was broadcast and later
    // identified by the final-round measurement.
    DelayedCorrectionPlan plan;
    for (int v : measured) plan.record_of_relay[v] = record_of[v];
    std::set<int> measured_set(measured.begin(), measured.end());
    std::map<int, std::map<int, Fe>> memo;
    std::function<const std::map<int, Fe>&(int)> w_of = [&](int v) -> const std::map<int, Fe>& {
        auto it = memo.find(v);
        if (it != memo.end()) return it->second;
        std::map<int, Fe> w;
        if (net.role(v) == Role::Relay) {
            if (measured_set.count(v) && fresh_broadcast(v)) w[record_of[v]] = 1;
            for (int p : net.in_neighbors(v)) {
                Fe lambda = code.weight_of(p, v);
                for (const auto& [rec, coeff] : w_of(p)) {
                    Fe& slot = w[rec];
                    slot = d.add(slot, d.mul(lambda, coeff));
                }
            }
        }
        return memo.emplace(v, std::move(w)).first->second;
    };
    bool any_corr = false;
    std::vector<QlncOp> corr_ops;
    for (int q : net.nodes()) {
        if (net.role(q) != Role::Receiver) continue;
        std::map<int, Fe> wq;
        for (int p : net.in_neighbors(q)) {
            Fe lambda = code.weight_of(p, q);
            for (const auto& [rec, coeff] : w_of(p)) {
                Fe& slot = wq[rec];
                slot = d.add(slot, d.mul(lambda, coeff));
            }
        }
        for (auto& [rec, coeff] : wq) {
            coeff = d.reduce(coeff);
            if (coeff == 0) continue;
            corr_ops.push_back(QlncOp::ctrl_x(rec, q, t + 1, coeff));
            any_corr = true;
        }
        if (!wq.empty()) plan.receiver_w[q] = wq;
    }
    for (int v : measured) plan.relay_w[v] = w_of(v);
    if (any_corr) {
        ++t;
        for (auto& op : corr_ops) {
            op.t = t;
            c.ops.push_back(op);
        }
    }
    return {std::move(c), std::move(plan), A, B};
}

inline QlncCircuit compile_constant_depth(const Network& net, const LinearCode& code,
                                          const VertexColoring& vc,
                                          const DirectedEdgeColoring& ec) {
    return compile_constant_depth_full(net, code, vc, ec).circuit;
}

// ---------------------------------------------------------------------------
// Sequential chain baseline.
// ---------------------------------------------------------------------------

/// Shortest path between the endpoints over the capability graph, avoiding
/// the nodes in `forbidden` (other pairs' endpoints must stay untouched).
inline std::vector<int> shortest_path(const Network& net, int from, int to,
                                      const std::set<int>& forbidden = {}) {
    std::map<int, std::vector<int>> adj;
    for (const auto& [a, b] : net.capability) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::map<int, int> prev;
    std::deque<int> queue{from};
    prev[from] = from;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (v == to) break;
        auto it = adj.find(v);
        if (it == adj.end()) continue;
        std::vector<int> nbrs = it->second;
        std::sort(nbrs.begin(), nbrs.end());
        for (int w : nbrs) {
            if (w != to && forbidden.count(w)) continue;
            if (!prev.count(w)) {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    if (!prev.count(to)) throw std::domain_error("endpoints not connected");
    std::vector<int> path{to};
    while (path.back() != from) path.push_back(prev[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

/// The sequential entanglement-swapping baseline: per pair, a chain of
/// alternating |+>/|0> preparations, two CNOT layers, X/Z measurements of
/// the interior, and one final correction step shared by all pairs.
/// Non-crossing chains run in the same batch; batches run back to back, so
/// the depth is at most 4k+1 for k batches.
inline QlncCircuit compile_chain_sequential(const std::vector<std::pair<int, int>>& pairs,
                                            const Network& net) {
    if (pairs.empty()) throw std::domain_error("no pairs to connect");
    const Modulus d = net.d;
    std::set<int> endpoints;
    for (const auto& [a, b] : pairs) {
        if (!endpoints.insert(a).second || !endpoints.insert(b).second) {
            throw std::domain_error("pairs share an endpoint");
        }
    }
    std::vector<std::vector<int>> paths;
    for (const auto& [a, b] : pairs) {
        std::set<int> forbidden = endpoints;
        forbidden.erase(a);
        forbidden.erase(b);
        paths.push_back(shortest_path(net, a, b, forbidden));
    }

    // Greedy batching of vertex-disjoint chains.
    std::vector<std::vector<size_t>> batches;
    std::vector<std::set<int>> batch_nodes;
    for (size_t i = 0; i < paths.size(); ++i) {
        bool placed = false;
        for (size_t b = 0; b < batches.size() && !placed; ++b) {
            bool disjoint = true;
            for (int v : paths[i]) {
                if (batch_nodes[b].count(v)) disjoint = false;
            }
            if (disjoint) {
                batches[b].push_back(i);
                for (int v : paths[i]) batch_nodes[b].insert(v);
                placed = true;
            }
        }
        if (!placed) {
            batches.push_back({i});
            batch_nodes.push_back({});
            for (int v : paths[i]) batch_nodes.back().insert(v);
        }
    }

    QlncCircuit c;
    c.d = d;
    c.graph = net;
    std::set<int> prepped;
    int record = 0;
    std::vector<std::pair<int, int>> endpoint_of_pair;  // (first, last) per path

    for (size_t b = 0; b < batches.size(); ++b) {
        int base = 4 * static_cast<int>(b);  // batch steps base..base+3 (b=0: preps at 0)
        for (size_t pi : batches[b]) {
            const std::vector<int>& path = paths[pi];
            size_t L = path.size() - 1;  // chain length (edges)
            for (size_t j = 0; j <= L; ++j) {
                Prep kind = (j % 2 == 0) ? Prep::Plus : Prep::Zero;
                int q = path[j];
                // First use is a step-0 preparation; chains crossing an
                // earlier batch re-prepare their measured-out interiors.
                int step = prepped.count(q) ? base : 0;
                c.ops.push_back(kind == Prep::Plus ? QlncOp::prep_plus(q, step)
                                                   : QlncOp::prep_zero(q, step));
                prepped.insert(q);
            }
            // CNOT layers: even j controls its neighbours; the leftward layer
            // carries weight -1 so endpoint coefficients stay +1 for all d.
            for (size_t j = 2; j <= L; j += 2) {
                c.ops.push_back(QlncOp::cnot(path[j], path[j - 1], base + 1, d.neg(1)));
            }
            for (size_t j = 0; j < L; j += 2) {
                c.ops.push_back(QlncOp::cnot(path[j], path[j + 1], base + 2, 1));
            }
            for (size_t j = 1; j < L; ++j) {
                if (j % 2 == 0) {
                    c.ops.push_back(QlncOp::measure_x(path[j], record++, base + 3));
                } else {
                    c.ops.push_back(QlncOp::measure_z(path[j], record++, base + 3));
                }
            }
            endpoint_of_pair.push_back({path.front(), path.back()});
        }
    }

    // One shared correction step: phase corrections (from X records) land on
    // the near endpoints, offset corrections (from Z records) consolidated on
    // the far endpoints, so no qubit sees both kinds at once.
    int corr_step = 4 * static_cast<int>(batches.size());
    std::vector<int> targets;
    for (const auto& [a, b] : endpoint_of_pair) {
        targets.push_back(a);
        targets.push_back(b);
    }
    DerivedCorrections corr = derive_linear_corrections(c, targets);
    for (const auto& [rec, zmap] : corr.z) {
        for (const auto& [q, e] : zmap) {
            c.ops.push_back(QlncOp::ctrl_z(rec, q, corr_step, e));
        }
    }
    for (const auto& [rec, xmap] : corr.x) {
        // Consolidate per pair: a shift of delta_a on the near endpoint and
        // delta_b on the far endpoint of a shared-symbol pair equals a single
        // shift of (delta_b - delta_a) on the far endpoint.
        std::map<int, Fe> per_far;
        for (const auto& [a, bq] : endpoint_of_pair) {
            Fe da = 0, db = 0;
            auto ia = xmap.find(a);
            if (ia != xmap.end()) da = d.neg(ia->second);  // stored exponents cancel, undo
            auto ib = xmap.find(bq);
            if (ib != xmap.end()) db = d.neg(ib->second);
            Fe e = d.sub(da, db);  // X^{da - db} on far endpoint
            if (e != 0) per_far[bq] = e;
        }
        for (const auto& [q, e] : per_far) {
            c.ops.push_back(QlncOp::ctrl_x(rec, q, corr_step, e));
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Composite entanglement-swap compilation.
// ---------------------------------------------------------------------------

inline QlncCircuit compile_composite(const CompositeSwapInstance& inst) {
    const Network& net = inst.net;
    const Modulus d = net.d;
    std::vector<int> topo = topological_nodes(net);

    QlncCircuit c;
    c.d = d;
    c.graph = net;
    std::set<int> plus(inst.plus_nodes.begin(), inst.plus_nodes.end());
    for (int v : net.nodes()) {
        c.ops.push_back(plus.count(v) ? QlncOp::prep_plus(v) : QlncOp::prep_zero(v));
    }
    std::map<int, int> busy, value_done;
    for (int v : net.nodes()) busy[v] = value_done[v] = 0;
    for (int v : topo) {
        std::vector<int> outs = net.out_neighbors(v);
        std::sort(outs.begin(), outs.end());
        for (int w : outs) {
            int t = std::max({value_done[v], busy[v], busy[w]}) + 1;
            c.ops.push_back(QlncOp::cnot(v, w, t, inst.routing.weight_of(v, w)));
            busy[v] = busy[w] = t;
            value_done[w] = std::max(value_done[w], t);
        }
    }
    int record = 0;
    int tmax = 0;
    for (const auto& [v, tb] : busy) tmax = std::max(tmax, tb);
    // Swap measurement first, then terminate every interior carrier.
    c.ops.push_back(QlncOp::measure_z(inst.swap_node, record++, tmax + 1));
    std::set<int> keep;
    for (const auto& g : inst.groups) keep.insert(g.begin(), g.end());
    int term_step = tmax + 2;
    for (int v : net.nodes()) {
        if (keep.count(v) || v == inst.swap_node) continue;
        if (net.in_degree(v) + net.out_degree(v) == 0) continue;
        c.ops.push_back(QlncOp::terminate(v, record++, term_step));
    }
    std::vector<int> targets(keep.begin(), keep.end());
    DerivedCorrections corr = derive_linear_corrections(c, targets);
    int zstep = term_step + 1;
    bool any_z = false;
    for (const auto& [rec, zmap] : corr.z) {
        for (const auto& [q, e] : zmap) {
            c.ops.push_back(QlncOp::ctrl_z(rec, q, zstep, e));
            any_z = true;
        }
    }
    int xstep = any_z ? zstep + 1 : zstep;
    for (const auto& [rec, xmap] : corr.x) {
        for (const auto& [q, e] : xmap) {
            c.ops.push_back(QlncOp::ctrl_x(rec, q, xstep, e));
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Measurement-independence certificate.
// ---------------------------------------------------------------------------

/// The row-reduced measurement matrix over symbol columns, reordered so the
/// first n_r columns are the symbols absent from the final state. The
/// measurements leave the target state uncollapsed iff every non-zero row
/// keeps a non-zero entry inside that absent block.
struct IndependenceWitness {
    bool independent = true;
    size_t n_r = 0;                           // number of absent-symbol columns
    size_t num_symbols = 0;
    std::vector<std::vector<Fe>> m_prime;     // eliminated matrix, reordered columns
    int offending_row = -1;
};

inline IndependenceWitness check_independence(const QlncCircuit& c,
                                              const std::vector<std::vector<int>>& groups) {
    const Modulus d = c.d;
    // Collapse-free symbolic execution: qubit -> affine form over symbols.
    std::map<int, std::vector<Fe>> form;   // label -> symbol coefficients
    std::map<int, Fe> constant;
    size_t num_symbols = 0;
    auto touch = [&](int q) -> std::vector<Fe>& {
        auto& f = form[q];
        f.resize(num_symbols, 0);
        return f;
    };
    std::map<int, std::vector<Fe>> record_form;  // record -> measured form
    std::vector<std::vector<Fe>> m_rows;

    std::vector<size_t> order(c.ops.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return c.ops[a].t < c.ops[b].t; });
    for (size_t i : order) {
        const QlncOp& op = c.ops[i];
        switch (op.kind) {
            case OpKind::PrepZero:
                form[op.qubit].assign(num_symbols, 0);
                constant[op.qubit] = 0;
                break;
            case OpKind::PrepPlus: {
                ++num_symbols;
                auto& f = form[op.qubit];
                f.assign(num_symbols, 0);
                f.back() = 1;
                constant[op.qubit] = 0;
                break;
            }
            case OpKind::Cnot: {
                auto& fc = touch(op.control);
                auto& ft = touch(op.qubit);
                Fe r = d.reduce(op.exponent);
                for (size_t s = 0; s < num_symbols; ++s) ft[s] = d.add(ft[s], d.mul(r, fc[s]));
                constant[op.qubit] =
                    d.add(constant[op.qubit], d.mul(r, constant[op.control]));
                break;
            }
            case OpKind::CtrlX: {
                auto it = record_form.find(op.source);
                if (it == record_form.end()) break;  // X-record source: no Z-value to defer
                auto& ft = touch(op.qubit);
                std::vector<Fe> src = it->second;
                src.resize(num_symbols, 0);
                Fe r = d.reduce(op.exponent);
                for (size_t s = 0; s < num_symbols; ++s) ft[s] = d.add(ft[s], d.mul(r, src[s]));
                break;
            }
            case OpKind::CtrlZ:
                break;  // phases never enter the measurement matrix
            case OpKind::MeasureZ: {
                auto& f = touch(op.qubit);
                m_rows.push_back(f);
                record_form[op.record] = f;
                break;
            }
            case OpKind::MeasureX:
            case OpKind::Terminate: {
                // Termination-style measurements are collapse-safe; the qubit
                // continues as a fresh symbol.
                ++num_symbols;
                auto& f = form[op.qubit];
                f.assign(num_symbols, 0);
                f.back() = 1;
                constant[op.qubit] = 0;
                break;
            }
        }
    }
    for (auto& row : m_rows) row.resize(num_symbols, 0);

    // Present symbols: those appearing in the final forms of group members.
    std::vector<bool> present(num_symbols, false);
    for (const auto& g : groups) {
        for (int q : g) {
            auto it = form.find(q);
            if (it == form.end()) throw std::domain_error("grouping references unknown qubit");
            const auto& f = it->second;
            for (size_t s = 0; s < f.size(); ++s) {
                if (f[s] != 0) present[s] = true;
            }
        }
    }
    std::vector<size_t> col_order;
    for (size_t s = 0; s < num_symbols; ++s) {
        if (!present[s]) col_order.push_back(s);
    }
    IndependenceWitness w;
    w.n_r = col_order.size();
    w.num_symbols = num_symbols;
    for (size_t s = 0; s < num_symbols; ++s) {
        if (present[s]) col_order.push_back(s);
    }
    for (const auto& row : m_rows) {
        std::vector<Fe> r(num_symbols);
        for (size_t jj = 0; jj < num_symbols; ++jj) r[jj] = row[col_order[jj]];
        w.m_prime.push_back(std::move(r));
    }
    // Gaussian elimination over Z_d.
    size_t rr = 0;
    for (size_t col = 0; col < num_symbols && rr < w.m_prime.size(); ++col) {
        size_t sel = rr;
        while (sel < w.m_prime.size() && w.m_prime[sel][col] == 0) ++sel;
        if (sel == w.m_prime.size()) continue;
        std::swap(w.m_prime[sel], w.m_prime[rr]);
        Fe inv = d.inv(w.m_prime[rr][col]);
        for (auto& v : w.m_prime[rr]) v = d.mul(v, inv);
        for (size_t h = 0; h < w.m_prime.size(); ++h) {
            if (h != rr && w.m_prime[h][col] != 0) {
                Fe factor = w.m_prime[h][col];
                for (size_t jj = 0; jj < num_symbols; ++jj) {
                    w.m_prime[h][jj] =
                        d.sub(w.m_prime[h][jj], d.mul(factor, w.m_prime[rr][jj]));
                }
            }
        }
        ++rr;
    }
    for (size_t h = 0; h < w.m_prime.size(); ++h) {
        bool zero_absent = true, zero_all = true;
        for (size_t jj = 0; jj < num_symbols; ++jj) {
            if (w.m_prime[h][jj] != 0) {
                zero_all = false;
                if (jj < w.n_r) zero_absent = false;
            }
        }
        if (!zero_all && zero_absent) {
            w.independent = false;
            w.offending_row = static_cast<int>(h);
            break;
        }
    }
    return w;
}

}  // namespace qlnc

#endif  // QLNC_COMPILER_HPP_
