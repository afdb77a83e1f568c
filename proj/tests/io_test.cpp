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

#include "qlnc/io.hpp"

#include <gtest/gtest.h>

#include <random>

#include "qlnc/compiler.hpp"
#include "qlnc/examples.hpp"
#include "test_support.hpp"

using namespace qlnc;

TEST(TableauJson, RoundTripIsLossless) {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 40; ++iter) {
        uint32_t p = (iter % 3 == 0) ? 5 : (iter % 3 == 1 ? 3 : 2);
        QlncCircuit c = testutil::random_circuit(rng, Modulus(p), 2 + rng() % 5, 25);
        OutcomeSource src = OutcomeSource::seeded(rng());
        ParityTableau t = execute(c, src).tableau;
        ParityTableau back = tableau_from_json(tableau_to_json(t));
        EXPECT_EQ(t, back) << "iter " << iter;
    }
}

TEST(TableauJson, RejectsRankDeficientMatrix) {
    Json j;
    j["d"] = 2;
    j["labels"] = {0, 1};
    j["C"] = {{1, 0, 0}, {0, 1, 1}, {0, 1, 1}};  // duplicate indeterminate row
    j["p"] = {0, 0, 0};
    EXPECT_THROW(tableau_from_json(j), std::logic_error);
}

TEST(NetworkJson, RoundTripButterfly) {
    auto [net, code] = butterfly();
    Network back = network_from_json(network_to_json(net));
    EXPECT_EQ(back.d.value(), net.d.value());
    EXPECT_EQ(back.roles, net.roles);
    EXPECT_EQ(back.directed, net.directed);
    ASSERT_EQ(back.multicast.size(), net.multicast.size());
    for (size_t i = 0; i < net.multicast.size(); ++i) {
        EXPECT_EQ(back.multicast[i].tx, net.multicast[i].tx);
        EXPECT_EQ(back.multicast[i].receivers, net.multicast[i].receivers);
    }
    LinearCode code_back = code_from_json(code_to_json(code));
    for (const auto& [e, w] : code.weights) {
        EXPECT_EQ(code_back.weight_of(e.first, e.second), w);
    }
}

TEST(CircuitJson, RoundTripPreservesExecution) {
    for (const QlncCircuit& c :
         {out_of_order_butterfly(), separation_example(), out_of_order_butterfly(3)}) {
        QlncCircuit back = circuit_from_json(circuit_to_json(c));
        EXPECT_TRUE(validate(back).empty());
        for_each_branch(c, 256, [&](const std::map<int, Fe>& branch, ExecutionResult& res) {
            OutcomeSource src = OutcomeSource::forced_by_record(branch);
            ParityTableau t2 = execute(back, src).tableau;
            EXPECT_TRUE(same_state(res.tableau, t2));
        });
    }
}

TEST(CircuitJson, CompiledCircuitSurvivesSerialization) {
    auto [net, code] = grid(4, 3);
    auto c = compile_constant_depth(net, code, greedy_vertex_coloring(net),
                                    directed_edge_coloring(net.directed));
    QlncCircuit back = circuit_from_json(circuit_to_json(c));
    EXPECT_EQ(quantum_depth(back), quantum_depth(c));
    auto branch = std::map<int, Fe>{};
    for (int r : discover_random_records(c)) branch[r] = 1;
    OutcomeSource s1 = OutcomeSource::forced_by_record(branch);
    OutcomeSource s2 = OutcomeSource::forced_by_record(branch);
    EXPECT_TRUE(same_state(execute(c, s1).tableau, execute(back, s2).tableau));
}

TEST(Dot, NetworkAndCircuitEmissionsContainStructure) {
    auto [net, code] = butterfly();
    std::string dot = network_to_dot(net);
    EXPECT_NE(dot.find("n1 -> n2"), std::string::npos);
    EXPECT_NE(dot.find("shape=box"), std::string::npos);          // transmitters
    EXPECT_NE(dot.find("shape=doublecircle"), std::string::npos);  // receivers
    std::string cdot = circuit_to_dot(out_of_order_butterfly());
    EXPECT_NE(cdot.find("label=\"1\""), std::string::npos);  // time-step edge labels
    EXPECT_NE(cdot.find("style=dashed"), std::string::npos);  // classical controls
    EXPECT_NE(cdot.find("MZ@4"), std::string::npos);
}
