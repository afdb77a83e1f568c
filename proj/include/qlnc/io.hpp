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

#ifndef QLNC_IO_HPP_
#define QLNC_IO_HPP_

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlnc/circuit.hpp"
#include "qlnc/network.hpp"
#include "qlnc/tableau.hpp"

namespace qlnc {

using Json = nlohmann::json;

inline const char* role_name(Role r) {
    switch (r) {
        case Role::Transmitter: return "transmitter";
        case Role::Relay: return "relay";
        case Role::Receiver: return "receiver";
    }
    return "?";
}

inline Role role_from(const std::string& s) {
    if (s == "transmitter") return Role::Transmitter;
    if (s == "relay") return Role::Relay;
    if (s == "receiver") return Role::Receiver;
    throw std::domain_error("unknown role " + s);
}

// --- network ---------------------------------------------------------------

inline Json network_to_json(const Network& net) {
    Json j;
    j["d"] = net.d.value();
    j["nodes"] = Json::array();
    for (const auto& [id, role] : net.roles) {
        j["nodes"].push_back({{"id", id}, {"role", role_name(role)}});
    }
    j["edges"] = Json::array();
    std::set<std::pair<int, int>> covered;
    for (const auto& [a, b] : net.directed) {
        j["edges"].push_back({{"from", a}, {"to", b}, {"directed", true}});
        covered.insert({std::min(a, b), std::max(a, b)});
    }
    for (const auto& [a, b] : net.capability) {
        if (covered.count({std::min(a, b), std::max(a, b)})) continue;
        covered.insert({std::min(a, b), std::max(a, b)});
        j["edges"].push_back({{"from", a}, {"to", b}, {"directed", false}});
    }
    j["multicast"] = Json::array();
    for (const auto& g : net.multicast) {
        j["multicast"].push_back({{"tx", g.tx}, {"rx", g.receivers}});
    }
    if (!net.classical_complete) j["classical_complete"] = false;
    return j;
}

inline Network network_from_json(const Json& j) {
    Network net;
    net.d = Modulus(j.at("d").get<uint32_t>());
    for (const auto& n : j.at("nodes")) {
        net.roles[n.at("id").get<int>()] = role_from(n.at("role").get<std::string>());
    }
    for (const auto& e : j.at("edges")) {
        int a = e.at("from").get<int>();
        int b = e.at("to").get<int>();
        bool dir = e.value("directed", false);
        if (dir) net.directed.push_back({a, b});
        bool have = false;
        for (const auto& [x, y] : net.capability) {
            if ((x == a && y == b) || (x == b && y == a)) have = true;
        }
        if (!have) net.capability.push_back({a, b});
    }
    if (j.contains("multicast")) {
        for (const auto& g : j.at("multicast")) {
            net.multicast.push_back(
                {g.at("tx").get<int>(), g.at("rx").get<std::vector<int>>()});
        }
    }
    net.classical_complete = j.value("classical_complete", true);
    return net;
}

// --- code --------------------------------------------------------------------

inline Json code_to_json(const LinearCode& code) {
    Json j;
    j["d"] = code.d.value();
    j["edges"] = Json::array();
    for (const auto& [e, w] : code.weights) {
        j["edges"].push_back({{"from", e.first}, {"to", e.second}, {"weight", w}});
    }
    return j;
}

inline LinearCode code_from_json(const Json& j) {
    LinearCode code;
    code.d = Modulus(j.at("d").get<uint32_t>());
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            code.weights[{e.at("from").get<int>(), e.at("to").get<int>()}] =
                e.value("weight", 1u);
        }
    }
    return code;
}

// --- circuit -----------------------------------------------------------------

inline OpKind op_kind_from(const std::string& s) {
    for (OpKind k : {OpKind::PrepZero, OpKind::PrepPlus, OpKind::Cnot, OpKind::CtrlX,
                     OpKind::CtrlZ, OpKind::MeasureX, OpKind::MeasureZ, OpKind::Terminate}) {
        if (s == op_kind_name(k)) return k;
    }
    throw std::domain_error("unknown op kind " + s);
}

inline Json circuit_to_json(const QlncCircuit& c) {
    Json j;
    j["d"] = c.d.value();
    j["graph"] = network_to_json(c.graph);
    j["ops"] = Json::array();
    for (const auto& op : c.ops) {
        Json o;
        o["kind"] = op_kind_name(op.kind);
        o["t"] = op.t;
        switch (op.kind) {
            case OpKind::PrepZero:
            case OpKind::PrepPlus:
                o["qubit"] = op.qubit;
                break;
            case OpKind::Cnot:
                o["control"] = op.control;
                o["target"] = op.qubit;
                if (op.exponent != 1) o["reps"] = op.exponent;
                break;
            case OpKind::CtrlX:
            case OpKind::CtrlZ:
                o["source"] = op.source;
                o["target"] = op.qubit;
                if (op.exponent != 1) o["exponent"] = op.exponent;
                break;
            case OpKind::MeasureX:
            case OpKind::MeasureZ:
            case OpKind::Terminate:
                o["qubit"] = op.qubit;
                o["record"] = op.record;
                break;
        }
        j["ops"].push_back(o);
    }
    return j;
}

inline QlncCircuit circuit_from_json(const Json& j) {
    QlncCircuit c;
    c.d = Modulus(j.at("d").get<uint32_t>());
    c.graph = network_from_json(j.at("graph"));
    for (const auto& o : j.at("ops")) {
        QlncOp op;
        op.kind = op_kind_from(o.at("kind").get<std::string>());
        op.t = o.at("t").get<int>();
        switch (op.kind) {
            case OpKind::PrepZero:
            case OpKind::PrepPlus:
                op.qubit = o.at("qubit").get<int>();
                break;
            case OpKind::Cnot:
                op.control = o.at("control").get<int>();
                op.qubit = o.at("target").get<int>();
                op.exponent = o.value("reps", 1u);
                break;
            case OpKind::CtrlX:
            case OpKind::CtrlZ:
                op.source = o.at("source").get<int>();
                op.qubit = o.at("target").get<int>();
                op.exponent = o.value("exponent", 1u);
                break;
            case OpKind::MeasureX:
            case OpKind::MeasureZ:
            case OpKind::Terminate:
                op.qubit = o.at("qubit").get<int>();
                op.record = o.at("record").get<int>();
                break;
        }
        c.ops.push_back(op);
    }
    return c;
}

// --- tableau -----------------------------------------------------------------

inline Json tableau_to_json(const ParityTableau& t) {
    Json j;
    j["d"] = t.modulus().value();
    j["labels"] = t.labels();
    Json rows = Json::array();
    for (size_t r = 0; r < t.rows(); ++r) {
        Json row = Json::array();
        row.push_back(r == 0 ? 1 : 0);  // column 0 = e0
        for (int l : t.labels()) row.push_back(t.coeff(r, l));
        rows.push_back(row);
    }
    j["C"] = rows;
    j["p"] = t.phase_vector();
    return j;
}

inline ParityTableau tableau_from_json(const Json& j) {
    Modulus d(j.at("d").get<uint32_t>());
    std::vector<int> labels = j.at("labels").get<std::vector<int>>();
    std::vector<std::vector<Fe>> rows;
    for (const auto& row : j.at("C")) rows.push_back(row.get<std::vector<Fe>>());
    std::vector<Fe> phases = j.at("p").get<std::vector<Fe>>();
    return ParityTableau::from_raw(d, labels, rows, phases);
}

// --- DOT ----------------------------------------------------------------------

/// Networks render with node roles (box = transmitter, doublecircle =
/// receiver); circuits add time-step edge labels and dashed arrows for
/// classically controlled gates.
inline std::string network_to_dot(const Network& net) {
    std::ostringstream os;
    os << "digraph network {\n";
    for (const auto& [id, role] : net.roles) {
        const char* shape = role == Role::Transmitter ? "box"
                            : role == Role::Receiver  ? "doublecircle"
                                                      : "circle";
        os << "  n" << id << " [label=\"" << id << "\", shape=" << shape << "];\n";
    }
    std::set<std::pair<int, int>> directed(net.directed.begin(), net.directed.end());
    for (const auto& [a, b] : net.directed) {
        os << "  n" << a << " -> n" << b << ";\n";
    }
    for (const auto& [a, b] : net.capability) {
        if (directed.count({a, b}) || directed.count({b, a})) continue;
        os << "  n" << a << " -> n" << b << " [dir=none, style=dotted];\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string circuit_to_dot(const QlncCircuit& c) {
    std::ostringstream os;
    os << "digraph circuit {\n";
    std::map<int, std::string> notes;  // node annotations (measure/terminate steps)
    for (const auto& op : c.ops) {
        if (op.kind == OpKind::MeasureX) notes[op.qubit] += " MX@" + std::to_string(op.t);
        if (op.kind == OpKind::MeasureZ) notes[op.qubit] += " MZ@" + std::to_string(op.t);
        if (op.kind == OpKind::Terminate) notes[op.qubit] += " T@" + std::to_string(op.t);
    }
    for (const auto& [id, role] : c.graph.roles) {
        const char* shape = role == Role::Transmitter ? "box"
                            : role == Role::Receiver  ? "doublecircle"
                                                      : "circle";
        os << "  n" << id << " [label=\"" << id << notes[id] << "\", shape=" << shape
           << "];\n";
    }
    for (const auto& op : c.ops) {
        if (op.kind == OpKind::Cnot) {
            os << "  n" << op.control << " -> n" << op.qubit << " [label=\"" << op.t
               << "\"];\n";
        }
        if (op.kind == OpKind::CtrlX || op.kind == OpKind::CtrlZ) {
            os << "  n" << op.source << "r -> n" << op.qubit << " [label=\"" << op.t
               << "\", style=dashed, color=\"black:white:black\"];\n";
            os << "  n" << op.source << "r [label=\"rec " << op.source
               << "\", shape=plaintext];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace qlnc

#endif  // QLNC_IO_HPP_
