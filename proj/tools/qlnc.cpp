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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qlnc/bench.hpp"
#include "qlnc/compiler.hpp"
#include "qlnc/examples.hpp"
#include "qlnc/io.hpp"
#include "qlnc/oracle.hpp"
#include "qlnc/stabref.hpp"

namespace {

using namespace qlnc;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << data;
}

uint64_t seed_or_env(std::optional<uint64_t> seed) {
    if (seed) return *seed;
    if (const char* env = std::getenv("QLNC_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

struct ExampleInstance {
    Network net;
    LinearCode code;
    std::optional<QlncCircuit> circuit;           // pre-built circuit, if any
    std::vector<std::vector<int>> groups;
};

ExampleInstance example_by_name(const std::string& name) {
    auto with_groups = [](NetworkInstance inst) {
        ExampleInstance e{inst.net, inst.code, std::nullopt, {}};
        for (const auto& g : inst.net.multicast) {
            std::vector<int> grp{g.tx};
            grp.insert(grp.end(), g.receivers.begin(), g.receivers.end());
            e.groups.push_back(grp);
        }
        return e;
    };
    if (name == "butterfly") return with_groups(butterfly());
    if (name == "butterfly3") return with_groups(butterfly(3));
    if (name == "grid4x3") return with_groups(grid(4, 3));
    if (name == "grid4x3_d3") return with_groups(grid(4, 3, 3));
    if (name == "speedup4") return with_groups(directed_speedup(4));
    if (name == "chain4") return with_groups(chain(4));
    if (name == "multicast3") {
        // 1-to-3 multicast over d = 3: GHZ_{3,4} on {1,3,4,5}.
        Network net;
        net.d = Modulus(3);
        net.roles = {{1, Role::Transmitter}, {2, Role::Relay},    {3, Role::Receiver},
                     {4, Role::Receiver},    {5, Role::Receiver}};
        net.directed = {{1, 2}, {2, 3}, {2, 4}, {2, 5}};
        net.capability = net.directed;
        net.multicast = {{1, {3, 4, 5}}};
        LinearCode code;
        code.d = net.d;
        return with_groups({net, code});
    }
    if (name == "ooo-butterfly") {
        ExampleInstance e = example_by_name("butterfly");
        e.circuit = out_of_order_butterfly();
        return e;
    }
    if (name == "separation") {
        ExampleInstance e{separation_network(), {}, separation_example(), {{1, 4, 5, 6}}};
        e.code.d = e.net.d;
        return e;
    }
    if (name == "composite") {
        auto inst = composite_swap();
        ExampleInstance e{inst.net, inst.routing, compile_composite(inst), inst.groups};
        return e;
    }
    throw std::runtime_error("unknown example '" + name +
                             "' (try: butterfly butterfly3 grid4x3 grid4x3_d3 speedup4 "
                             "chain4 multicast3 ooo-butterfly separation composite)");
}

std::vector<std::vector<int>> parse_groups(const std::string& s) {
    std::vector<std::vector<int>> groups;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';')) {
        std::vector<int> g;
        std::stringstream ps(part);
        std::string tok;
        while (std::getline(ps, tok, ',')) {
            if (!tok.empty()) g.push_back(std::stoi(tok));
        }
        if (!g.empty()) groups.push_back(g);
    }
    return groups;
}

ParityTableau target_for(Modulus d, const std::vector<std::vector<int>>& groups) {
    std::vector<std::pair<int, Prep>> preps;
    for (const auto& g : groups) {
        for (size_t i = 0; i < g.size(); ++i) {
            preps.push_back({g[i], i == 0 ? Prep::Plus : Prep::Zero});
        }
    }
    ParityTableau t(d, preps);
    for (const auto& g : groups) {
        for (size_t i = 1; i < g.size(); ++i) t.apply_cnot(g[0], g[i], 1);
    }
    return t;
}

struct VerifyStats {
    uint64_t branches = 0;
    uint64_t failed = 0;
    std::string first_failure;
};

/// Verify one branch of the circuit against the declared groups with the
/// chosen oracle; returns a failure message or "".
std::string verify_branch(const QlncCircuit& c, const std::map<int, Fe>& branch,
                          const std::vector<std::vector<int>>& groups,
                          const ParityTableau& target, const std::string& oracle) {
    std::vector<int> keep;
    for (const auto& g : groups) keep.insert(keep.end(), g.begin(), g.end());
    OutcomeSource src = OutcomeSource::forced_by_record(branch);
    ExecutionResult res = execute(c, src);
    ParityTableau got(c.d, {Prep::Zero});
    try {
        got = res.tableau.restricted_to(keep);
    } catch (const std::domain_error& e) {
        return std::string("group qubit entangled with the rest: ") + e.what();
    }
    if (!same_state_up_to_phase(got, target)) {
        return "canonical tableau differs from the declared target";
    }
    if (oracle == "dense") {
        OutcomeSource dsrc = OutcomeSource::forced_by_record(branch);
        auto dense = dense_execute(c, dsrc);
        std::vector<std::vector<size_t>> pos;
        for (const auto& g : groups) {
            std::vector<size_t> row;
            for (int q : g) row.push_back(dense.positions.at(q));
            pos.push_back(row);
        }
        double fid = group_fidelity(dense.state, pos);
        if (std::abs(fid - 1.0) > kCrossEngineTol) {
            return "dense fidelity " + std::to_string(fid);
        }
        DenseState expanded = res.tableau.expand_amplitudes(kDenseDimCap);
        if (!equal_up_to_global_phase(expanded, dense.state, kCrossEngineTol)) {
            return "tableau expansion diverges from dense oracle";
        }
    } else if (oracle == "stab") {
        OutcomeSource ssrc = OutcomeSource::forced_by_record(branch);
        auto stab = stab_execute(c, ssrc);
        if (!stabilizer_matches_tableau(stab.tableau, res.tableau)) {
            return "stabilizer reference diverges from tableau engine";
        }
    }
    return "";
}

int run_verify(const QlncCircuit& c, std::vector<std::vector<int>> groups,
               const std::string& branches_mode, std::string oracle, uint64_t seed,
               bool trace) {
    if (groups.empty()) {
        for (const auto& g : c.graph.multicast) {
            std::vector<int> grp{g.tx};
            grp.insert(grp.end(), g.receivers.begin(), g.receivers.end());
            groups.push_back(grp);
        }
    }
    if (groups.empty()) throw std::runtime_error("no groups declared (use --groups)");
    {
        auto v = validate(c);
        if (!v.empty()) {
            std::cerr << "invalid circuit: " << v.front().message << "\n";
            return 1;
        }
    }
    if (oracle == "auto") {
        uint64_t dim = 1;
        bool dense_ok = true;
        for (size_t i = 0; i < c.num_qubits(); ++i) {
            dim *= c.d.value();
            if (dim > kDenseDimCap) {
                dense_ok = false;
                break;
            }
        }
        oracle = dense_ok ? "dense" : (c.d.value() == 2 ? "stab" : "tableau");
    }
    ParityTableau target = target_for(c.d, groups);
    IndependenceWitness witness = check_independence(c, groups);
    std::cout << "independence: " << (witness.independent ? "true" : "false") << "\n";
    std::cout << "oracle: " << oracle << "\n";

    VerifyStats stats;
    auto note = [&](const std::map<int, Fe>& branch, const std::string& err) {
        ++stats.branches;
        std::ostringstream label;
        for (const auto& [rec, v] : branch) label << rec << "=" << v << " ";
        if (!err.empty()) {
            ++stats.failed;
            if (stats.first_failure.empty()) {
                stats.first_failure = "branch [" + label.str() + "]: " + err;
            }
        }
        if (trace) {
            std::cout << "branch [" << label.str() << "] "
                      << (err.empty() ? "pass" : "FAIL: " + err) << "\n";
        }
    };
    if (branches_mode == "exhaustive") {
        std::vector<int> records = discover_random_records(c);
        uint64_t total = 1;
        for (size_t i = 0; i < records.size(); ++i) {
            total *= c.d.value();
            if (total > (uint64_t(1) << 16)) {
                std::cerr << "refusing exhaustive mode: more than 2^16 branches\n";
                return 1;
            }
        }
        std::map<int, Fe> branch;
        for (int r : records) branch[r] = 0;
        for (uint64_t b = 0; b < total; ++b) {
            note(branch, verify_branch(c, branch, groups, target, oracle));
            for (size_t i = records.size(); i-- > 0;) {
                Fe& v = branch[records[i]];
                v = c.d.add(v, 1);
                if (v != 0) break;
            }
        }
    } else {
        int samples = std::stoi(branches_mode);
        std::mt19937_64 rng(seed);
        std::vector<int> records = discover_random_records(c);
        for (int s = 0; s < samples; ++s) {
            std::map<int, Fe> branch;
            for (int r : records) branch[r] = static_cast<Fe>(rng() % c.d.value());
            note(branch, verify_branch(c, branch, groups, target, oracle));
        }
    }
    std::cout << "branches: " << stats.branches << "  failed: " << stats.failed << "\n";
    if (stats.failed) {
        std::cout << "first failure: " << stats.first_failure << "\n";
        return 1;
    }
    if (!witness.independent) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qlnc: compile linear network codes to shallow entanglement-distribution "
                 "circuits and verify them with a parity-function tableau simulator"};
    app.require_subcommand(1);

    // --- compile -----------------------------------------------------------
    auto* compile = app.add_subcommand("compile", "compile a network code to a circuit");
    std::string cnetwork, ccode, cexample, cmode = "inorder", ccoloring, cpairs;
    std::string cout_path, creport_path, cdot_path;
    compile->add_option("--network", cnetwork, "network JSON file ('-' for stdin)");
    compile->add_option("--code", ccode, "code JSON file");
    compile->add_option("--example", cexample, "built-in example name");
    compile->add_option("--mode", cmode, "inorder | constdepth | chain")
        ->check(CLI::IsMember({"inorder", "constdepth", "chain"}));
    compile->add_option("--coloring", ccoloring, "coloring JSON {vertex:{node:color},...}");
    compile->add_option("--pairs", cpairs, "chain mode pairs, e.g. 1-6,3-4");
    compile->add_option("-o,--output", cout_path, "circuit JSON output path");
    compile->add_option("--report", creport_path, "compiler report path (default stdout)");
    compile->add_option("--dot", cdot_path, "write the network DOT here");

    // --- verify ------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "verify a circuit against declared groups");
    std::string vcircuit, vexample, vmode = "inorder", vgroups, vbranches = "exhaustive",
                voracle = "auto";
    std::optional<uint64_t> vseed;
    bool vtrace = false;
    verify->add_option("--circuit", vcircuit, "circuit JSON file ('-' for stdin)");
    verify->add_option("--example", vexample, "compile a built-in example instead");
    verify->add_option("--mode", vmode, "compile mode when using --example");
    verify->add_option("--groups", vgroups, "entangled groups, e.g. '1,6;3,4'");
    verify->add_option("--branches", vbranches, "'exhaustive' or a sample count");
    verify->add_option("--oracle", voracle, "auto | dense | stab | tableau")
        ->check(CLI::IsMember({"auto", "dense", "stab", "tableau"}));
    verify->add_option("--seed", vseed, "seed for sampled branches (QLNC_SEED fallback)");
    verify->add_flag("--trace", vtrace, "print one line per branch");

    // --- bench ---------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "compare engines on the cascade family");
    std::string bfamily = "cascade", bsizes = "64,128,256,512,1024,2048,4096", bout;
    std::optional<uint64_t> bseed;
    bench->add_option("--family", bfamily, "benchmark family")
        ->check(CLI::IsMember({"cascade"}));
    bench->add_option("--sizes", bsizes, "comma-separated qubit counts");
    bench->add_option("--seed", bseed, "seed (QLNC_SEED fallback)");
    bench->add_option("-o,--output", bout, "CSV output path (default stdout)");

    // --- example -------------------------------------------------------------
    auto* example = app.add_subcommand("example", "dump a built-in example");
    std::string ename, ewhat = "network", eformat = "json";
    bool elist = false;
    example->add_option("name", ename, "example name");
    example->add_option("--what", ewhat, "network | code | circuit")
        ->check(CLI::IsMember({"network", "code", "circuit"}));
    example->add_option("--format", eformat, "json | dot")
        ->check(CLI::IsMember({"json", "dot"}));
    example->add_flag("--list", elist, "list example names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compile || (*verify && !vexample.empty())) {
            // Resolve the instance for compile (also used by verify --example).
            bool for_verify = !(*compile);
            std::string mode = for_verify ? vmode : cmode;
            std::string exname = for_verify ? vexample : cexample;
            ExampleInstance inst;
            if (!exname.empty()) {
                inst = example_by_name(exname);
            } else if (!for_verify && !cnetwork.empty()) {
                inst.net = network_from_json(Json::parse(read_input(cnetwork)));
                inst.code.d = inst.net.d;
                if (!ccode.empty()) inst.code = code_from_json(Json::parse(read_input(ccode)));
                for (const auto& g : inst.net.multicast) {
                    std::vector<int> grp{g.tx};
                    grp.insert(grp.end(), g.receivers.begin(), g.receivers.end());
                    inst.groups.push_back(grp);
                }
            } else {
                throw std::runtime_error("need --network or --example");
            }

            QlncCircuit circuit;
            Json report;
            if (inst.circuit && (exname == "composite" || exname == "separation" ||
                                 exname == "ooo-butterfly")) {
                circuit = *inst.circuit;
                report["mode"] = "builtin";
            } else if (mode == "inorder") {
                circuit = compile_inorder(inst.net, inst.code);
                report["mode"] = "inorder";
            } else if (mode == "constdepth") {
                VertexColoring vc;
                DirectedEdgeColoring ec;
                if (!for_verify && !ccoloring.empty()) {
                    Json cj = Json::parse(read_input(ccoloring));
                    for (auto it = cj.at("vertex").begin(); it != cj.at("vertex").end(); ++it) {
                        vc.color[std::stoi(it.key())] = it.value().get<int>();
                        vc.num_colors = std::max(vc.num_colors, it.value().get<int>());
                    }
                    if (cj.contains("edges")) {
                        for (const auto& e : cj.at("edges")) {
                            int col = e.at("color").get<int>();
                            ec.color[{e.at("from").get<int>(), e.at("to").get<int>()}] = col;
                            ec.num_colors = std::max(ec.num_colors, col);
                        }
                    } else {
                        ec = directed_edge_coloring(inst.net.directed);
                    }
                } else {
                    vc = greedy_vertex_coloring(inst.net);
                    ec = directed_edge_coloring(inst.net.directed);
                }
                auto full = compile_constant_depth_full(inst.net, inst.code, vc, ec);
                circuit = full.circuit;
                report["mode"] = "constdepth";
                report["A"] = full.A;
                report["B"] = full.B;
                report["bound"] = depth_bound(full.A, full.B);
            } else {  // chain
                std::vector<std::pair<int, int>> pairs;
                if (!cpairs.empty()) {
                    std::stringstream ss(cpairs);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) {
                        auto dash = tok.find('-');
                        if (dash == std::string::npos) {
                            throw std::runtime_error("bad --pairs entry " + tok);
                        }
                        pairs.push_back(
                            {std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1))});
                    }
                } else {
                    for (const auto& g : inst.net.multicast) {
                        for (int r : g.receivers) pairs.push_back({g.tx, r});
                    }
                }
                circuit = compile_chain_sequential(pairs, inst.net);
                report["mode"] = "chain";
                report["bound"] = 4 * static_cast<int>(pairs.size()) + 1;
            }

            if (for_verify) {
                auto groups = parse_groups(vgroups);
                if (groups.empty()) groups = inst.groups;
                return run_verify(circuit, groups, vbranches, voracle, seed_or_env(vseed),
                                  vtrace);
            }

            report["depth"] = quantum_depth(circuit);
            report["qubits"] = circuit.num_qubits();
            IndependenceWitness witness = check_independence(circuit, inst.groups);
            report["independence"] = witness.independent;
            // Quick branch sanity pass (tableau-canonical, sampled).
            {
                ParityTableau target = target_for(circuit.d, inst.groups);
                std::vector<int> keep;
                for (const auto& g : inst.groups) keep.insert(keep.end(), g.begin(), g.end());
                std::mt19937_64 rng(1);
                std::vector<int> records = discover_random_records(circuit);
                int verified = 0;
                for (int s = 0; s < 8; ++s) {
                    std::map<int, Fe> branch;
                    for (int r : records) {
                        branch[r] = static_cast<Fe>(rng() % circuit.d.value());
                    }
                    OutcomeSource src = OutcomeSource::forced_by_record(branch);
                    ParityTableau got = execute(circuit, src).tableau.restricted_to(keep);
                    if (!same_state_up_to_phase(got, target)) break;
                    ++verified;
                }
                report["branches_verified"] = verified;
            }
            if (!cdot_path.empty()) write_output(cdot_path, network_to_dot(inst.net));
            if (!cout_path.empty()) {
                write_output(cout_path, circuit_to_json(circuit).dump(2) + "\n");
            }
            write_output(creport_path, report.dump(2) + "\n");
            return report["independence"].get<bool>() &&
                           report["branches_verified"].get<int>() == 8
                       ? 0
                       : 1;
        }

        if (*verify) {
            if (vcircuit.empty()) throw std::runtime_error("need --circuit or --example");
            QlncCircuit circuit = circuit_from_json(Json::parse(read_input(vcircuit)));
            return run_verify(circuit, parse_groups(vgroups), vbranches, voracle,
                              seed_or_env(vseed), vtrace);
        }

        if (*bench) {
            std::vector<size_t> sizes;
            std::stringstream ss(bsizes);
            std::string tok;
            while (std::getline(ss, tok, ',')) sizes.push_back(std::stoul(tok));
            for (size_t n : sizes) {
                if (n > 100000) throw std::runtime_error("size exceeds memory guard");
                if (n < 16) throw std::runtime_error("cascade family needs n >= 16");
            }
            auto rows = bench_compare(sizes, seed_or_env(bseed));
            write_output(bout, bench_csv(rows));
            return 0;
        }

        if (*example) {
            if (elist) {
                std::cout << "butterfly butterfly3 grid4x3 grid4x3_d3 speedup4 chain4 "
                             "multicast3 ooo-butterfly separation composite\n";
                return 0;
            }
            if (ename.empty()) throw std::runtime_error("example name required");
            ExampleInstance inst = example_by_name(ename);
            if (ewhat == "network") {
                std::cout << (eformat == "dot" ? network_to_dot(inst.net)
                                               : network_to_json(inst.net).dump(2) + "\n");
            } else if (ewhat == "code") {
                std::cout << code_to_json(inst.code).dump(2) << "\n";
            } else {
                QlncCircuit c = inst.circuit ? *inst.circuit
                                             : compile_inorder(inst.net, inst.code);
                std::cout << (eformat == "dot" ? circuit_to_dot(c)
                                               : circuit_to_json(c).dump(2) + "\n");
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
