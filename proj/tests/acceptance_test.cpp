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
//
// Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <random>

#include "qlnc/bench.hpp"
#include "qlnc/compiler.hpp"
#include "qlnc/examples.hpp"
#include "qlnc/io.hpp"
#include "qlnc/oracle.hpp"
#include "qlnc/stabref.hpp"
#include "test_support.hpp"

using namespace qlnc;

namespace {

struct CriterionReporter {
    int index;
    const char* summary;
    ~CriterionReporter() {
        bool failed = ::testing::Test::HasFailure();
        std::printf("[CRITERION %d] %s - %s\n", index, failed ? "FAIL" : "PASS", summary);
        std::fflush(stdout);
    }
};

std::vector<std::vector<int>> groups_of(const Network& net) {
    std::vector<std::vector<int>> groups;
    for (const auto& g : net.multicast) {
        std::vector<int> grp{g.tx};
        grp.insert(grp.end(), g.receivers.begin(), g.receivers.end());
        groups.push_back(grp);
    }
    return groups;
}

std::vector<int> flatten(const std::vector<std::vector<int>>& groups) {
    std::vector<int> out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
}

double dense_group_fidelity(const QlncCircuit& c, const std::map<int, Fe>& branch,
                            const std::vector<std::vector<int>>& groups) {
    OutcomeSource src = OutcomeSource::forced_by_record(branch);
    auto dense = dense_execute(c, src);
    std::vector<std::vector<size_t>> pos;
    for (const auto& g : groups) {
        std::vector<size_t> row;
        for (int q : g) row.push_back(dense.positions.at(q));
        pos.push_back(row);
    }
    return group_fidelity(dense.state, pos);
}

// Random-circuit parameters for the equivalence suite: n <= 8, <= 60 ops,
// d in {2, 3, 5} (larger d gets fewer qubits to keep the dense oracle honest).
struct EquivParams {
    uint32_t d;
    size_t n;
};
EquivParams equiv_params(std::mt19937_64& rng, int iter) {
    switch (iter % 3) {
        case 0: return {2, 4 + rng() % 5};   // up to 8
        case 1: return {3, 3 + rng() % 4};   // up to 6
        default: return {5, 2 + rng() % 4};  // up to 5
    }
}

}  // namespace

TEST(Acceptance, Criterion01ButterflyInOrder) {
    CriterionReporter rep{1, "in-order butterfly distributes Phi+ pairs on all 4 branches"};
    auto start = std::chrono::steady_clock::now();
    auto [net, code] = butterfly();
    QlncCircuit c = compile_inorder(net, code);
    ParityTableau target = testutil::target_tableau(c.d, {{1, 6}, {3, 4}});
    int branches = 0;
    for_each_branch(c, 1 << 16, [&](const std::map<int, Fe>& branch, ExecutionResult& res) {
        ++branches;
        ParityTableau got = res.tableau.restricted_to({1, 3, 4, 6});
        EXPECT_TRUE(same_state_up_to_phase(got, target));
        EXPECT_NEAR(dense_group_fidelity(c, branch, {{1, 6}, {3, 4}}), 1.0, 1e-9);
    });
    EXPECT_EQ(branches, 4);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(secs, 1.0);
}

TEST(Acceptance, Criterion02OutOfOrderButterfly) {
    CriterionReporter rep{2, "out-of-order butterfly matches the in-order final state"};
    auto [net, code] = butterfly();
    QlncCircuit inorder = compile_inorder(net, code);
    QlncCircuit ooo = out_of_order_butterfly();
    // Criterion 1's canonical final tableau on the surviving pairs.
    OutcomeSource base_src = OutcomeSource::forced_by_record([&] {
        std::map<int, Fe> zero;
        for (int r : discover_random_records(inorder)) zero[r] = 0;
        return zero;
    }());
    ParityTableau reference =
        execute(inorder, base_src).tableau.restricted_to({1, 3, 4, 6}).canonical();
    int branches = 0;
    for_each_branch(ooo, 1 << 16, [&](const std::map<int, Fe>& branch, ExecutionResult& res) {
        ++branches;
        ParityTableau got = res.tableau.restricted_to({1, 3, 4, 6});
        EXPECT_TRUE(same_state_up_to_phase(got, reference));
        EXPECT_NEAR(dense_group_fidelity(ooo, branch, {{1, 6}, {3, 4}}), 1.0, 1e-9);
    });
    EXPECT_GE(branches, 2);  // both Z-measurement branches (times termination)
}

TEST(Acceptance, Criterion03SeparationExample) {
    CriterionReporter rep{3, "separation network yields GHZ_4 on the degree-1 nodes"};
    QlncCircuit c = separation_example();
    ParityTableau target = testutil::target_tableau(c.d, {{1, 4, 5, 6}});
    int branches = 0;
    for_each_branch(c, 1 << 16, [&](const std::map<int, Fe>& branch, ExecutionResult& res) {
        ++branches;
        ParityTableau got = res.tableau.restricted_to({1, 4, 5, 6});
        EXPECT_TRUE(same_state_up_to_phase(got, target));
        EXPECT_NEAR(dense_group_fidelity(c, branch, {{1, 4, 5, 6}}), 1.0, 1e-9);
    });
    EXPECT_EQ(branches, 4);
}

TEST(Acceptance, Criterion04DepthBounds) {
    CriterionReporter rep{4, "constant-depth compilation meets 2(A-1)(B+1)+1, lattice <= 9"};
    int instances = 0;
    for (size_t w = 3; w <= 12; ++w) {
        for (size_t h : {2u, 3u}) {
            auto [net, code] = grid(w, h);
            ASSERT_TRUE(validate_code(net, code));
            auto vc = greedy_vertex_coloring(net);
            auto ec = directed_edge_coloring(net.directed);
            auto full = compile_constant_depth_full(net, code, vc, ec);
            int depth = quantum_depth(full.circuit);
            EXPECT_LE(depth, depth_bound(full.A, full.B)) << w << "x" << h;
            // Square-lattice patches, no receiver with four in-links.
            for (const auto& [id, role] : net.roles) {
                if (role == Role::Receiver) {
                    EXPECT_LT(net.in_degree(id), 4u);
                }
            }
            EXPECT_LE(depth, 9) << w << "x" << h;
            ++instances;
        }
    }
    EXPECT_GE(instances, 20);
}

TEST(Acceptance, Criterion05ChainBaseline) {
    CriterionReporter rep{5, "sequential chains: depth <= 4k+1 and exact Bell pairs"};
    // k = 1 on a length-4 chain.
    {
        auto [net, code] = chain(4);
        QlncCircuit c = compile_chain_sequential({{1, 5}}, net);
        EXPECT_LE(quantum_depth(c), 5);
        ParityTableau target = testutil::target_tableau(c.d, {{1, 5}});
        for_each_branch(c, 1 << 16, [&](const std::map<int, Fe>&, ExecutionResult& res) {
            EXPECT_TRUE(same_state_up_to_phase(res.tableau.restricted_to({1, 5}), target));
        });
    }
    // k = 2 crossing pairs on a plus-shaped graph.
    {
        Network net;
        net.d = Modulus(2);
        for (int v = 0; v <= 4; ++v) net.roles[v] = Role::Relay;
        net.capability = {{1, 0}, {0, 2}, {3, 0}, {0, 4}};
        QlncCircuit c = compile_chain_sequential({{1, 2}, {3, 4}}, net);
        EXPECT_LE(quantum_depth(c), 9);
        ParityTableau target = testutil::target_tableau(c.d, {{1, 2}, {3, 4}});
        for_each_branch(c, 1 << 16, [&](const std::map<int, Fe>&, ExecutionResult& res) {
            EXPECT_TRUE(
                same_state_up_to_phase(res.tableau.restricted_to({1, 2, 3, 4}), target));
        });
    }
    // k = 3: two crossing pairs plus a disjoint pair.
    {
        Network net;
        net.d = Modulus(2);
        for (int v = 0; v <= 6; ++v) net.roles[v] = Role::Relay;
        net.capability = {{1, 0}, {0, 2}, {3, 0}, {0, 4}, {5, 6}};
        QlncCircuit c = compile_chain_sequential({{1, 2}, {3, 4}, {5, 6}}, net);
        EXPECT_LE(quantum_depth(c), 13);
        ParityTableau target = testutil::target_tableau(c.d, {{1, 2}, {3, 4}, {5, 6}});
        for_each_branch(c, 1 << 16, [&](const std::map<int, Fe>&, ExecutionResult& res) {
            EXPECT_TRUE(same_state_up_to_phase(
                res.tableau.restricted_to({1, 2, 3, 4, 5, 6}), target));
        });
    }
}

TEST(Acceptance, Criterion06EngineEquivalence) {
    CriterionReporter rep{6, "1000 random circuits: tableau == dense (== stabref for d=2)"};
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260810);
    for (int iter = 0; iter < 1000; ++iter) {
        EquivParams p = equiv_params(rng, iter);
        QlncCircuit c = testutil::random_circuit(rng, Modulus(p.d), p.n, 60);
        for (int branch_i = 0; branch_i < 8; ++branch_i) {
            auto branch = testutil::random_branch(rng, c);
            OutcomeSource src = OutcomeSource::forced_by_record(branch);
            auto dense = dense_execute(c, src);
            DenseState expanded = dense.result.tableau.expand_amplitudes(uint64_t(1) << 20);
            ASSERT_TRUE(equal_up_to_global_phase(expanded, dense.state, 1e-9))
                << "iter " << iter << " branch " << branch_i;
            if (p.d == 2) {
                OutcomeSource ssrc = OutcomeSource::forced_by_record(branch);
                auto stab = stab_execute(c, ssrc);
                ASSERT_TRUE(stabilizer_matches_tableau(stab.tableau, stab.result.tableau))
                    << "iter " << iter;
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(secs, 120.0);
}

TEST(Acceptance, Criterion07InvariantSuite) {
    CriterionReporter rep{7, "rank/column-0 invariants and N-delta bookkeeping exact"};
    std::mt19937_64 rng(20260810);  // the criterion-6 stream
    for (int iter = 0; iter < 1000; ++iter) {
        EquivParams p = equiv_params(rng, iter);
        QlncCircuit c = testutil::random_circuit(rng, Modulus(p.d), p.n, 60);
        for (int branch_i = 0; branch_i < 8; ++branch_i) {
            auto branch = testutil::random_branch(rng, c);
            // One instrumented run per circuit keeps the suite quick.
            if (branch_i != 0) continue;
            OutcomeSource src = OutcomeSource::forced_by_record(branch);
            std::vector<std::pair<QlncOp, size_t>> trace;
            ExecutionResult res =
                execute(c, src, nullptr, [&](const QlncOp& op, const ParityTableau& t) {
                    t.check_invariants();  // rank == rows, column 0 == e0
                    trace.push_back({op, t.num_indeterminates()});
                });
            std::set<int> random_set(res.random_records.begin(), res.random_records.end());
            size_t prev = 0;
            for (const auto& op : c.ops) {
                if (op.kind == OpKind::PrepPlus && op.t == 0) ++prev;
            }
            for (const auto& [op, n_after] : trace) {
                long delta = static_cast<long>(n_after) - static_cast<long>(prev);
                switch (op.kind) {
                    case OpKind::Cnot:
                    case OpKind::CtrlX:
                    case OpKind::CtrlZ:
                        EXPECT_EQ(delta, 0) << "unitary changed N";
                        break;
                    case OpKind::MeasureX:
                        EXPECT_EQ(delta, random_set.count(op.record) ? 1 : 0);
                        break;
                    case OpKind::MeasureZ:
                        EXPECT_EQ(delta, random_set.count(op.record) ? -1 : 0);
                        break;
                    case OpKind::Terminate:
                        // retained as |+>: an entangled measure adds a fresh row
                        EXPECT_EQ(delta, random_set.count(op.record) ? 1 : 0);
                        break;
                    default:
                        break;
                }
                prev = n_after;
            }
        }
    }
}

TEST(Acceptance, Criterion08PhaseCorrectionProperty) {
    CriterionReporter rep{8, "phase corrections cancel the phase vector on 500 tableaus"};
    std::mt19937_64 rng(88);
    for (int iter = 0; iter < 500; ++iter) {
        uint32_t p = (iter % 3 == 0) ? 2 : (iter % 3 == 1 ? 3 : 5);
        QlncCircuit c = testutil::random_circuit(rng, Modulus(p), 2 + rng() % 6, 40);
        OutcomeSource src = OutcomeSource::seeded(rng());
        ParityTableau t = execute(c, src).tableau;
        for (int z = 0; z < 4; ++z) {
            int q = t.labels()[rng() % t.labels().size()];
            t.apply_pauli_z(q, static_cast<Fe>(rng() % p));
        }
        for (const auto& corr : t.find_phase_correction()) {
            t.apply_pauli_z(corr.qubit, corr.exponent);
        }
        for (size_t h = 1; h < t.rows(); ++h) {
            ASSERT_EQ(t.phase(h), 0u) << "iter " << iter;
        }
    }
}

TEST(Acceptance, Criterion09IndependenceCheck) {
    CriterionReporter rep{9, "M' verdict matches oracle-checked exact-target equality"};
    // True on every compiler-emitted circuit.
    for (auto inst : {butterfly(), grid(4, 3), grid(6, 2), directed_speedup(3)}) {
        auto groups = groups_of(inst.net);
        EXPECT_TRUE(
            check_independence(compile_inorder(inst.net, inst.code), groups).independent);
        auto cd =
            compile_constant_depth(inst.net, inst.code, greedy_vertex_coloring(inst.net),
                                   directed_edge_coloring(inst.net.directed));
        EXPECT_TRUE(check_independence(cd, groups).independent);
    }
    // False with a reported offending row when a final-state symbol is measured.
    {
        auto [net, code] = butterfly();
        auto c = compile_inorder(net, code);
        int tmax = 0;
        for (const auto& op : c.ops) tmax = std::max(tmax, op.t);
        c.ops.push_back(QlncOp::measure_z(1, 99, tmax + 1));
        auto w = check_independence(c, groups_of(net));
        EXPECT_FALSE(w.independent);
        EXPECT_GE(w.offending_row, 0);
    }
    // 200 randomized circuits: verdict == oracle.
    std::mt19937_64 rng(99);
    int true_cases = 0, false_cases = 0;
    for (int iter = 0; iter < 200; ++iter) {
        NetworkInstance inst = (iter % 3 == 0)   ? butterfly()
                               : (iter % 3 == 1) ? grid(3 + rng() % 2, 2)
                                                 : directed_speedup(2 + rng() % 2);
        auto groups = groups_of(inst.net);
        QlncCircuit c = compile_inorder(inst.net, inst.code);
        int tmax = 0;
        for (const auto& op : c.ops) tmax = std::max(tmax, op.t);
        if (iter % 2 == 0) {
            auto qs = c.qubits();
            c.ops.push_back(QlncOp::measure_z(qs[rng() % qs.size()], 99, tmax + 1));
        }
        bool verdict = check_independence(c, groups).independent;
        bool exact = true;
        std::vector<int> keep = flatten(groups);
        ParityTableau target = testutil::target_tableau(c.d, groups);
        for (int s = 0; s < 4 && exact; ++s) {
            auto branch = testutil::random_branch(rng, c);
            OutcomeSource src = OutcomeSource::forced_by_record(branch);
            try {
                exact = same_state_up_to_phase(execute(c, src).tableau.restricted_to(keep),
                                               target);
            } catch (const std::domain_error&) {
                exact = false;
            }
        }
        EXPECT_EQ(verdict, exact) << "iter " << iter;
        (verdict ? true_cases : false_cases) += 1;
    }
    EXPECT_GT(true_cases, 40);
    EXPECT_GT(false_cases, 40);
}

TEST(Acceptance, Criterion10QuditDistribution) {
    CriterionReporter rep{10, "d=3 butterfly gives Phi+_3 pairs; multicast gives GHZ_{3,4}"};
    {
        auto [net, code] = butterfly(3);
        QlncCircuit c = compile_inorder(net, code);
        ParityTableau target = testutil::target_tableau(c.d, {{1, 6}, {3, 4}});
        for_each_branch(c, 1 << 16, [&](const std::map<int, Fe>& branch, ExecutionResult& res) {
            EXPECT_TRUE(
                same_state_up_to_phase(res.tableau.restricted_to({1, 3, 4, 6}), target));
            EXPECT_NEAR(dense_group_fidelity(c, branch, {{1, 6}, {3, 4}}), 1.0, 1e-9);
        });
    }
    {
        // 1-to-3 multicast over d = 3: transmitter 1, relay 2, receivers 3,4,5.
        Network net;
        net.d = Modulus(3);
        net.roles = {{1, Role::Transmitter}, {2, Role::Relay},    {3, Role::Receiver},
                     {4, Role::Receiver},    {5, Role::Receiver}};
        net.directed = {{1, 2}, {2, 3}, {2, 4}, {2, 5}};
        net.capability = net.directed;
        net.multicast = {{1, {3, 4, 5}}};
        LinearCode code;
        code.d = net.d;
        ASSERT_TRUE(validate_code(net, code));
        QlncCircuit c = compile_inorder(net, code);
        ParityTableau target = testutil::target_tableau(c.d, {{1, 3, 4, 5}});
        for_each_branch(c, 1 << 16, [&](const std::map<int, Fe>& branch, ExecutionResult& res) {
            EXPECT_TRUE(
                same_state_up_to_phase(res.tableau.restricted_to({1, 3, 4, 5}), target));
            EXPECT_NEAR(dense_group_fidelity(c, branch, {{1, 3, 4, 5}}), 1.0, 1e-9);
        });
        // The constant-depth compiler handles the multicast too.
        auto cd = compile_constant_depth_full(net, code, greedy_vertex_coloring(net),
                                              directed_edge_coloring(net.directed));
        for_each_branch(cd.circuit, 1 << 16,
                        [&](const std::map<int, Fe>&, ExecutionResult& res) {
                            EXPECT_TRUE(same_state_up_to_phase(
                                res.tableau.restricted_to({1, 3, 4, 5}), target));
                        });
    }
}

TEST(Acceptance, Criterion11CompositeSwap) {
    CriterionReporter rep{11, "composite swap network distributes all declared pairs"};
    auto inst = composite_swap();
    QlncCircuit c = compile_composite(inst);
    ASSERT_TRUE(validate(c).empty());
    ParityTableau target = testutil::target_tableau(c.d, inst.groups);
    std::vector<int> keep = flatten(inst.groups);
    // Too large for the dense oracle (27 qubits): canonical-tableau equality,
    // cross-checked against the stabilizer reference.
    std::mt19937_64 rng(4111);
    for (int s = 0; s < 8; ++s) {
        auto branch = testutil::random_branch(rng, c);
        OutcomeSource src = OutcomeSource::forced_by_record(branch);
        auto stab = stab_execute(c, src);
        EXPECT_TRUE(same_state_up_to_phase(stab.result.tableau.restricted_to(keep), target))
            << "sample " << s;
        EXPECT_TRUE(stabilizer_matches_tableau(stab.tableau, stab.result.tableau))
            << "sample " << s;
    }
    EXPECT_TRUE(check_independence(c, inst.groups).independent);
}

TEST(Acceptance, Criterion12PerformanceTrend) {
    CriterionReporter rep{12,
                          "tableau wall slope <= 1.3; stabilizer per-measure slope >= 1.5"};
    std::vector<size_t> sizes = {64, 128, 256, 512, 1024, 2048, 4096};
    auto rows = bench_compare(sizes, 20260810, 3);
    std::vector<std::pair<double, double>> tableau_wall, stab_meas;
    for (const auto& r : rows) {
        if (r.engine == "tableau") {
            tableau_wall.push_back({double(r.n), double(r.wall_ns)});
        } else {
            double per_meas = double(r.meas_ns) / double(r.op_counts.at("measure_z"));
            stab_meas.push_back({double(r.n), per_meas});
        }
    }
    double t_slope = fit_loglog_slope(tableau_wall);
    double s_slope = fit_loglog_slope(stab_meas);
    std::printf("  [bench] tableau wall slope %.3f, stabilizer per-measure slope %.3f\n",
                t_slope, s_slope);
    if (std::getenv("QLNC_BENCH_SOFT")) {
        GTEST_SKIP() << "bench trend reported only (QLNC_BENCH_SOFT set): tableau "
                     << t_slope << ", stab " << s_slope;
    }
    EXPECT_LE(t_slope, 1.3);
    EXPECT_GE(s_slope, 1.5);
}
