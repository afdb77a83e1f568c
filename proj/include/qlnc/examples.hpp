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

#ifndef QLNC_EXAMPLES_HPP_
#define QLNC_EXAMPLES_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "qlnc/circuit.hpp"
#include "qlnc/network.hpp"

namespace qlnc {

/// The butterfly evaluated out of order: node 2 starts in |+>, the coding
/// constraint is imposed by Z-measuring it, and the receivers take
/// classically controlled X corrections. Same final state as the in-order
/// evaluation on every branch.
inline QlncCircuit out_of_order_butterfly(uint32_t d = 2) {
    auto [net, code] = butterfly(d);
    Modulus m(d);
    QlncCircuit c;
    c.d = m;
    c.graph = net;
    c.ops = {
        QlncOp::prep_plus(1), QlncOp::prep_plus(2), QlncOp::prep_plus(3),
        QlncOp::prep_zero(4), QlncOp::prep_zero(5), QlncOp::prep_zero(6),
        QlncOp::cnot(1, 4, 1, code.weight_of(1, 4)),
        QlncOp::cnot(3, 6, 1, code.weight_of(3, 6)),
        QlncOp::cnot(2, 5, 1, m.neg(1)),
        QlncOp::cnot(1, 2, 2, 1),
        QlncOp::cnot(5, 4, 2, 1),
        QlncOp::cnot(3, 2, 3, 1),
        QlncOp::cnot(5, 6, 3, 1),
        QlncOp::measure_z(2, 0, 4),
        QlncOp::terminate(5, 1, 5),
        QlncOp::ctrl_x(0, 4, 6, 1),
        QlncOp::ctrl_x(0, 6, 6, 1),
    };
    return c;
}

/// Six-qubit network whose QLNC circuit leaves GHZ_4 on the degree-1 nodes:
/// terminate qubit 2, measure qubit 3, correct the receivers. (Local graph-
/// state manipulation cannot reach this state on the same graph.)
inline Network separation_network(uint32_t d = 2) {
    Network net;
    net.d = Modulus(d);
    for (int v = 1; v <= 6; ++v) net.roles[v] = Role::Relay;
    net.roles[1] = net.roles[4] = net.roles[5] = net.roles[6] = Role::Receiver;
    net.capability = {{1, 2}, {2, 3}, {3, 4}, {2, 5}, {3, 6}};
    net.directed = {{2, 1}, {2, 5}, {2, 3}, {3, 4}, {3, 6}};
    net.multicast = {{1, {4, 5, 6}}};  // the one GHZ group, annotated
    return net;
}

inline QlncCircuit separation_example(uint32_t d = 2) {
    Network net = separation_network(d);
    Modulus m(d);
    QlncCircuit c;
    c.d = m;
    c.graph = net;
    c.ops = {
        QlncOp::prep_zero(1), QlncOp::prep_plus(2), QlncOp::prep_plus(3),
        QlncOp::prep_zero(4), QlncOp::prep_zero(5), QlncOp::prep_zero(6),
        QlncOp::cnot(2, 1, 1, 1),
        QlncOp::cnot(3, 4, 1, 1),
        QlncOp::cnot(2, 5, 2, 1),
        QlncOp::cnot(3, 6, 2, 1),
        // Measuring qubit 3 imposes b - a = y, so qubits 1 and 5 (holding a)
        // need X^y to line up with the b side for every prime d.
        QlncOp::cnot(2, 3, 3, m.neg(1)),
        QlncOp::terminate(2, 0, 4),
        QlncOp::measure_z(3, 1, 5),
        QlncOp::ctrl_x(1, 1, 6, 1),
        QlncOp::ctrl_x(1, 5, 6, 1),
    };
    return c;
}

/// Deferred-measurement transform: drop each Z measurement whose record only
/// drives classically controlled X gates, replace those gates by CNOTs from
/// the held qubit, and measure at the very end. The final state is unchanged
/// branch for branch. CNOTs introduced this way may leave the interaction
/// graph, so the result carries an extended capability set.
inline QlncCircuit defer_measurements(const QlncCircuit& c) {
    QlncCircuit out;
    out.d = c.d;
    out.graph = c.graph;
    std::map<int, const QlncOp*> zmeas;  // record -> op
    int tmax = 0;
    for (const auto& op : c.ops) {
        tmax = std::max(tmax, op.t);
        if (op.kind == OpKind::MeasureZ) zmeas[op.record] = &op;
    }
    std::set<int> deferred;
    for (const auto& op : c.ops) {
        if ((op.kind == OpKind::CtrlX || op.kind == OpKind::CtrlZ) && zmeas.count(op.source)) {
            if (op.kind == OpKind::CtrlZ) {
                throw std::domain_error("cannot defer a record driving a Z correction");
            }
            deferred.insert(op.source);
        }
    }
    for (const auto& op : c.ops) {
        if (op.kind == OpKind::MeasureZ && deferred.count(op.record)) continue;
        if (op.kind == OpKind::CtrlX && deferred.count(op.source)) {
            int q = zmeas.at(op.source)->qubit;
            out.ops.push_back(QlncOp::cnot(q, op.qubit, op.t, op.exponent));
            if (!out.graph.adjacent(q, op.qubit)) {
                out.graph.capability.push_back({q, op.qubit});
            }
            continue;
        }
        out.ops.push_back(op);
    }
    int t = tmax + 1;
    for (int rec : deferred) {
        out.ops.push_back(QlncOp::measure_z(zmeas.at(rec)->qubit, rec, t++));
    }
    // The introduced CNOTs fan out from a shared control, so flatten the
    // schedule to one op per step (ops that shared a step commuted anyway).
    std::stable_sort(out.ops.begin(), out.ops.end(),
                     [](const QlncOp& a, const QlncOp& b) { return a.t < b.t; });
    int step = 0;
    for (auto& op : out.ops) {
        bool is_prep = op.kind == OpKind::PrepZero || op.kind == OpKind::PrepPlus;
        op.t = (is_prep && op.t == 0) ? 0 : ++step;
    }
    return out;
}

}  // namespace qlnc

#endif  // QLNC_EXAMPLES_HPP_
