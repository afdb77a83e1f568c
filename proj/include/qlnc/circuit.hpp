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

#ifndef QLNC_CIRCUIT_HPP_
#define QLNC_CIRCUIT_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qlnc/network.hpp"
#include "qlnc/outcome.hpp"
#include "qlnc/tableau.hpp"

namespace qlnc {

enum class OpKind {
    PrepZero,
    PrepPlus,
    Cnot,
    CtrlX,
    CtrlZ,
    MeasureX,
    MeasureZ,
    Terminate,
};

inline const char* op_kind_name(OpKind k) {
    switch (k) {
        case OpKind::PrepZero: return "prep_zero";
        case OpKind::PrepPlus: return "prep_plus";
        case OpKind::Cnot: return "cnot";
        case OpKind::CtrlX: return "ctrl_x";
        case OpKind::CtrlZ: return "ctrl_z";
        case OpKind::MeasureX: return "measure_x";
        case OpKind::MeasureZ: return "measure_z";
        case OpKind::Terminate: return "terminate";
    }
    return "?";
}

/// One scheduled operation. `t` is the time step; preparations sit at
/// step 0 by convention (re-preparations of measured qubits may come later).
struct QlncOp {
    OpKind kind{};
    int t = 0;
    int qubit = -1;    // target / prepared / measured / terminated qubit
    int control = -1;  // Cnot control
    int source = -1;   // CtrlX/CtrlZ: measurement record id driving the gate
    int record = -1;   // MeasureX/MeasureZ/Terminate: record id
    Fe exponent = 1;   // CtrlX/CtrlZ multiplier r (gate is P^{r*outcome}); Cnot repetitions

    static QlncOp prep_zero(int q, int t = 0) { return {OpKind::PrepZero, t, q}; }
    static QlncOp prep_plus(int q, int t = 0) { return {OpKind::PrepPlus, t, q}; }
    static QlncOp cnot(int control, int target, int t, Fe reps = 1) {
        QlncOp op{OpKind::Cnot, t, target, control};
        op.exponent = reps;
        return op;
    }
    static QlncOp ctrl_x(int source, int target, int t, Fe r = 1) {
        QlncOp op{OpKind::CtrlX, t, target};
        op.source = source;
        op.exponent = r;
        return op;
    }
    static QlncOp ctrl_z(int source, int target, int t, Fe r = 1) {
        QlncOp op{OpKind::CtrlZ, t, target};
        op.source = source;
        op.exponent = r;
        return op;
    }
    static QlncOp measure_x(int q, int record, int t) {
        QlncOp op{OpKind::MeasureX, t, q};
        op.record = record;
        return op;
    }
    static QlncOp measure_z(int q, int record, int t) {
        QlncOp op{OpKind::MeasureZ, t, q};
        op.record = record;
        return op;
    }
    static QlncOp terminate(int q, int record, int t) {
        QlncOp op{OpKind::Terminate, t, q};
        op.record = record;
        return op;
    }
};

/// A time-scheduled QLNC circuit over a fixed interaction graph.
struct QlncCircuit {
    Modulus d{2};
    Network graph;
    std::vector<QlncOp> ops;

    /// Labels prepared at step 0, sorted; these are the circuit's qubits.
    std::vector<int> qubits() const {
        std::vector<int> out;
        for (const auto& op : ops) {
            if ((op.kind == OpKind::PrepZero || op.kind == OpKind::PrepPlus) && op.t == 0) {
                out.push_back(op.qubit);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    size_t num_qubits() const { return qubits().size(); }
};

struct Violation {
    std::string message;
    int op_index = -1;
};

/// Static schedule and locality checks. An empty result means the circuit is
/// well formed. Violations are data, not exceptions.
inline std::vector<Violation> validate(const QlncCircuit& c) {
    std::vector<Violation> out;
    auto complain = [&](const std::string& m, int idx) { out.push_back({m, idx}); };

    if (c.d != c.graph.d) complain("circuit and graph modulus differ", -1);

    // Record bookkeeping: id -> step of the measurement producing it.
    std::map<int, int> record_step;
    for (size_t i = 0; i < c.ops.size(); ++i) {
        const QlncOp& op = c.ops[i];
        if (op.kind == OpKind::MeasureX || op.kind == OpKind::MeasureZ ||
            op.kind == OpKind::Terminate) {
            if (op.record < 0) {
                complain("measurement without record id", static_cast<int>(i));
            } else if (!record_step.emplace(op.record, op.t).second) {
                complain("duplicate record id " + std::to_string(op.record),
                         static_cast<int>(i));
            }
        }
    }

    // Preparation tracking: first prep at step 0; later preps only after a
    // measurement of the same qubit at a strictly earlier step.
    std::map<int, std::vector<std::pair<int, OpKind>>> events;  // qubit -> (t, kind)
    for (const auto& op : c.ops) {
        switch (op.kind) {
            case OpKind::PrepZero:
            case OpKind::PrepPlus:
            case OpKind::MeasureX:
            case OpKind::MeasureZ:
            case OpKind::Terminate:
                events[op.qubit].push_back({op.t, op.kind});
                break;
            case OpKind::Cnot:
                events[op.qubit].push_back({op.t, op.kind});
                events[op.control].push_back({op.t, op.kind});
                break;
            case OpKind::CtrlX:
            case OpKind::CtrlZ:
                events[op.qubit].push_back({op.t, op.kind});
                break;
        }
    }
    std::set<int> prepped;
    for (const auto& op : c.ops) {
        if (op.kind != OpKind::PrepZero && op.kind != OpKind::PrepPlus) continue;
        prepped.insert(op.qubit);
    }
    for (const auto& [q, evs] : events) {
        if (!prepped.count(q)) {
            complain("qubit " + std::to_string(q) + " used without preparation", -1);
        }
    }
    for (size_t i = 0; i < c.ops.size(); ++i) {
        const QlncOp& op = c.ops[i];
        bool is_prep = op.kind == OpKind::PrepZero || op.kind == OpKind::PrepPlus;
        if (!is_prep && op.t < 1) {
            complain("non-preparation op before step 1", static_cast<int>(i));
        }
        if (is_prep && op.t > 0) {
            bool measured_before = false;
            for (const auto& [t, kind] : events[op.qubit]) {
                if (t < op.t && (kind == OpKind::MeasureX || kind == OpKind::MeasureZ ||
                                 kind == OpKind::Terminate)) {
                    measured_before = true;
                }
            }
            if (!measured_before) {
                complain("re-preparation of qubit " + std::to_string(op.qubit) +
                             " without prior measurement",
                         static_cast<int>(i));
            }
        }
        if (is_prep && op.t == 0) {
            // exactly one step-0 prep per qubit
            int count = 0;
            for (const auto& other : c.ops) {
                if ((other.kind == OpKind::PrepZero || other.kind == OpKind::PrepPlus) &&
                    other.t == 0 && other.qubit == op.qubit) {
                    ++count;
                }
            }
            if (count > 1) complain("duplicate step-0 preparation", static_cast<int>(i));
        }
    }

    // Graph locality and argument sanity.
    for (size_t i = 0; i < c.ops.size(); ++i) {
        const QlncOp& op = c.ops[i];
        if (op.kind == OpKind::Cnot) {
            if (op.control == op.qubit) {
                complain("cnot control equals target", static_cast<int>(i));
            } else if (!c.graph.adjacent(op.control, op.qubit)) {
                complain("cnot " + std::to_string(op.control) + "->" +
                             std::to_string(op.qubit) + " is not an edge of G",
                         static_cast<int>(i));
            }
            if (op.exponent % c.d.value() == 0) {
                complain("cnot with repetition count 0", static_cast<int>(i));
            }
        }
        if (op.kind == OpKind::CtrlX || op.kind == OpKind::CtrlZ) {
            auto it = record_step.find(op.source);
            if (it == record_step.end()) {
                complain("classical control references unknown record " +
                             std::to_string(op.source),
                         static_cast<int>(i));
            } else if (it->second >= op.t) {
                complain("classical control not strictly after its measurement",
                         static_cast<int>(i));
            }
        }
    }

    // Schedule rule: ops sharing a qubit within one time step are forbidden
    // unless they are all classically controlled Paulis of one kind on that
    // qubit (they commute and compose into a single gate whose exponent the
    // classical controller computes between steps).
    std::map<std::pair<int, int>, std::vector<OpKind>> touches;  // (t, qubit) -> kinds
    for (const auto& op : c.ops) {
        touches[{op.t, op.qubit}].push_back(op.kind);
        if (op.kind == OpKind::Cnot) touches[{op.t, op.control}].push_back(op.kind);
    }
    for (const auto& [key, kinds] : touches) {
        if (kinds.size() < 2) continue;
        bool all_ctrl_x = std::all_of(kinds.begin(), kinds.end(),
                                      [](OpKind k) { return k == OpKind::CtrlX; });
        bool all_ctrl_z = std::all_of(kinds.begin(), kinds.end(),
                                      [](OpKind k) { return k == OpKind::CtrlZ; });
        if (!all_ctrl_x && !all_ctrl_z) {
            complain("qubit " + std::to_string(key.second) + " touched by " +
                         std::to_string(kinds.size()) + " ops at step " +
                         std::to_string(key.first),
                     -1);
        }
    }
    return out;
}

/// Number of distinct time steps containing at least one operation
/// (classical computation between steps is free).
inline int quantum_depth(const QlncCircuit& c) {
    auto v = validate(c);
    if (!v.empty()) {
        throw std::domain_error("invalid circuit: " + v.front().message);
    }
    std::set<int> steps;
    for (const auto& op : c.ops) steps.insert(op.t);
    return static_cast<int>(steps.size());
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// Interface a simulation back end implements to replay a circuit whose
/// classical decisions (outcomes, correction masks) are supplied by the
/// driver. Measurements receive the chosen outcome and must realize that
/// branch or fail loudly.
class SimEngine {
   public:
    virtual ~SimEngine() = default;
    virtual void init(const Modulus& d, const std::vector<std::pair<int, Prep>>& preps) = 0;
    virtual void apply_x(int q, Fe e) = 0;
    virtual void apply_z(int q, Fe e) = 0;
    virtual void apply_cnot(int control, int target, Fe reps) = 0;
    virtual void measure_x(int q, Fe outcome) = 0;
    virtual void measure_z(int q, Fe outcome) = 0;
    /// Re-initialize a qubit known (from the planner) to factor out as the
    /// constant |c> or a fresh |+>-like state with Z-phase `phase`.
    virtual void reset_from_constant(int q, Fe c, Prep target) = 0;
    virtual void reset_from_plus(int q, Fe phase, Prep target) = 0;
};

struct AppliedPauli {
    int op_index;  // -1 for termination-internal corrections
    int qubit;
    bool is_x;
    Fe exponent;
};

struct ExecutionResult {
    ParityTableau tableau;                    // final planner state
    std::map<int, Fe> outcomes;               // record id -> outcome
    std::vector<int> outcome_order;           // record ids in execution order
    std::vector<int> random_records;          // records that consumed randomness
    std::map<int, TerminationRecord> terminations;
    std::vector<AppliedPauli> applied;        // classically controlled Paulis applied
    std::map<std::string, uint64_t> op_counts;
};

using ExecutionHook = std::function<void(const QlncOp&, const ParityTableau&)>;

/// Execute a valid circuit. The parity tableau always runs (it is the
/// protocol's classical controller: it decides outcome determinism and
/// termination corrections); `engine`, when given, replays every concrete
/// operation against a second simulator on the identical branch.
inline ExecutionResult execute(const QlncCircuit& c, OutcomeSource& src,
                               SimEngine* engine = nullptr,
                               const ExecutionHook& hook = {}) {
    {
        auto v = validate(c);
        if (!v.empty()) {
            throw std::domain_error("invalid circuit: " + v.front().message);
        }
    }
    std::vector<size_t> order(c.ops.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return c.ops[a].t < c.ops[b].t; });

    std::vector<std::pair<int, Prep>> preps;
    for (size_t i : order) {
        const QlncOp& op = c.ops[i];
        if (op.t != 0) break;
        if (op.kind == OpKind::PrepZero) preps.push_back({op.qubit, Prep::Zero});
        if (op.kind == OpKind::PrepPlus) preps.push_back({op.qubit, Prep::Plus});
    }
    if (preps.empty()) throw std::domain_error("circuit prepares no qubits");

    ExecutionResult res{ParityTableau(c.d, preps), {}, {}, {}, {}, {}, {}};
    ParityTableau& plan = res.tableau;
    if (engine) engine->init(c.d, preps);

    auto count = [&](const char* k) { ++res.op_counts[k]; };

    for (size_t i : order) {
        const QlncOp& op = c.ops[i];
        if (op.t == 0) continue;  // initial preps already done
        count(op_kind_name(op.kind));
        switch (op.kind) {
            case OpKind::PrepZero:
            case OpKind::PrepPlus: {
                Prep target = op.kind == OpKind::PrepZero ? Prep::Zero : Prep::Plus;
                // The planner knows how the measured-out qubit factors.
                auto f = plan.factor_of(op.qubit);
                if (!f.disentangled) {
                    throw std::domain_error("re-preparation of entangled qubit " +
                                            std::to_string(op.qubit));
                }
                if (engine) {
                    if (f.constant) {
                        engine->reset_from_constant(op.qubit, f.value, target);
                    } else {
                        engine->reset_from_plus(op.qubit, f.phase, target);
                    }
                }
                plan.reset_qubit(op.qubit, target);
                break;
            }
            case OpKind::Cnot:
                plan.apply_cnot(op.control, op.qubit, op.exponent);
                if (engine) engine->apply_cnot(op.control, op.qubit, op.exponent);
                break;
            case OpKind::CtrlX:
            case OpKind::CtrlZ: {
                auto it = res.outcomes.find(op.source);
                if (it == res.outcomes.end()) {
                    throw std::domain_error("dangling classical control");
                }
                Fe e = c.d.mul(c.d.reduce(op.exponent), it->second);
                if (e != 0) {
                    if (op.kind == OpKind::CtrlX) {
                        plan.apply_pauli_x(op.qubit, e);
                        if (engine) engine->apply_x(op.qubit, e);
                    } else {
                        plan.apply_pauli_z(op.qubit, e);
                        if (engine) engine->apply_z(op.qubit, e);
                    }
                    res.applied.push_back({static_cast<int>(i), op.qubit,
                                           op.kind == OpKind::CtrlX, e});
                }
                break;
            }
            case OpKind::MeasureX: {
                size_t before = src.consumed();
                Fe s = plan.measure_x(op.qubit, src, op.record);
                if (src.consumed() != before) res.random_records.push_back(op.record);
                res.outcomes[op.record] = s;
                res.outcome_order.push_back(op.record);
                if (engine) engine->measure_x(op.qubit, s);
                break;
            }
            case OpKind::MeasureZ: {
                size_t before = src.consumed();
                Fe b = plan.measure_z(op.qubit, src, op.record);
                if (src.consumed() != before) res.random_records.push_back(op.record);
                res.outcomes[op.record] = b;
                res.outcome_order.push_back(op.record);
                if (engine) engine->measure_z(op.qubit, b);
                break;
            }
            case OpKind::Terminate: {
                size_t before = src.consumed();
                TerminationRecord rec =
                    plan.terminate(op.qubit, src, TerminateMode::kRetainAsPlus, op.record);
                if (src.consumed() != before) res.random_records.push_back(op.record);
                res.outcomes[op.record] = rec.outcome;
                res.outcome_order.push_back(op.record);
                if (engine) {
                    engine->measure_x(op.qubit, rec.outcome);
                    for (const auto& corr : rec.corrections) {
                        engine->apply_z(corr.qubit, corr.exponent);
                    }
                }
                for (const auto& corr : rec.corrections) {
                    res.applied.push_back({static_cast<int>(i), corr.qubit, false,
                                           corr.exponent});
                }
                res.terminations[op.record] = rec;
                break;
            }
            default:
                break;
        }
        if (hook) hook(op, plan);
    }
    return res;
}

/// Record ids that consume randomness (branch points). The set is
/// outcome-independent: coefficient rows evolve the same way on every branch.
inline std::vector<int> discover_random_records(const QlncCircuit& c) {
    OutcomeSource src = OutcomeSource::seeded(0);
    return execute(c, src).random_records;
}

/// Enumerate every forced-outcome branch (d^k of them for k random records),
/// calling fn(branch assignment, result). Throws if the count exceeds limit.
inline void for_each_branch(const QlncCircuit& c, uint64_t limit,
                            const std::function<void(const std::map<int, Fe>&,
                                                     ExecutionResult&)>& fn,
                            SimEngine* engine = nullptr) {
    std::vector<int> records = discover_random_records(c);
    uint64_t total = 1;
    for (size_t i = 0; i < records.size(); ++i) {
        total *= c.d.value();
        if (total > limit) throw std::runtime_error("branch count exceeds limit");
    }
    std::map<int, Fe> branch;
    for (int r : records) branch[r] = 0;
    for (uint64_t b = 0; b < total; ++b) {
        OutcomeSource src = OutcomeSource::forced_by_record(branch);
        ExecutionResult res = execute(c, src, engine);
        fn(branch, res);
        for (size_t i = records.size(); i-- > 0;) {
            Fe& v = branch[records[i]];
            v = c.d.add(v, 1);
            if (v != 0) break;
        }
    }
}

}  // namespace qlnc

#endif  // QLNC_CIRCUIT_HPP_
