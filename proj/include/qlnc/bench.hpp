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

#ifndef QLNC_BENCH_HPP_
#define QLNC_BENCH_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qlnc/outcome.hpp"
#include "qlnc/stabref.hpp"
#include "qlnc/tableau.hpp"

namespace qlnc {

struct BenchRow {
    std::string engine;
    size_t n = 0;
    size_t N = 0;  // live indeterminates (parity engine) / kept for symmetry
    std::map<std::string, uint64_t> op_counts;
    uint64_t wall_ns = 0;
    uint64_t meas_ns = 0;  // time spent inside measurements
};

/// Fixed-N benchmark family: N0 qubits prepared |+> at the head of a path,
/// a CNOT cascade down the path (spreading the superposition's support while
/// keeping the number of indeterminates at N0), and `measures` spread Z
/// measurements. A protocol with O(1)-size superpositions, where the parity
/// tableau should stay linear in n while the stabilizer reference pays
/// quadratically per measurement.
struct CascadeSpec {
    size_t n;
    size_t plus = 16;
    size_t measures = 8;
};

struct CascadeOps {
    std::vector<std::pair<size_t, size_t>> cnots;  // control -> target positions
    std::vector<size_t> measured;                  // positions, Z basis
    std::vector<size_t> plus_positions;
};

inline CascadeOps cascade_ops(const CascadeSpec& spec) {
    CascadeOps ops;
    // |+> origins interleaved at the tail of the path. The forward cascade
    // spreads every |0> qubit's X row over the suffix, so a measurement near
    // the end anticommutes with nearly all rows (the stabilizer engine pays
    // a full quadratic sweep each time), while consecutive measured
    // positions straddle different origin subsets and therefore carry
    // distinct live formulas (every measurement is a genuine collapse).
    for (size_t k = 0; k < spec.plus; ++k) ops.plus_positions.push_back(spec.n - 1 - 2 * k);
    for (size_t i = 0; i + 1 < spec.n; ++i) ops.cnots.push_back({i, i + 1});
    for (size_t m = 0; m < spec.measures; ++m) {
        ops.measured.push_back(spec.n - 2 - 2 * m);
    }
    return ops;
}

// Each measurement is timed on a fresh copy of the post-cascade state
// (restored outside the timed window), so every sample pays the full cost of
// collapsing a live superposition rather than profiting from earlier
// collapses. meas_ns is the summed measurement time; wall_ns adds the build.

inline BenchRow bench_tableau(const CascadeSpec& spec, uint64_t seed) {
    BenchRow row{"tableau", spec.n, spec.plus, {}, 0, 0};
    CascadeOps ops = cascade_ops(spec);
    std::set<size_t> plus(ops.plus_positions.begin(), ops.plus_positions.end());
    std::vector<std::pair<int, Prep>> preps;
    for (size_t i = 0; i < spec.n; ++i) {
        preps.push_back({static_cast<int>(i), plus.count(i) ? Prep::Plus : Prep::Zero});
    }
    OutcomeSource src = OutcomeSource::seeded(seed);
    auto t0 = std::chrono::steady_clock::now();
    ParityTableau t(Modulus(2), preps);
    for (const auto& [c, tg] : ops.cnots) {
        t.apply_cnot(static_cast<int>(c), static_cast<int>(tg), 1);
        ++row.op_counts["cnot"];
    }
    auto t1 = std::chrono::steady_clock::now();
    row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    ParityTableau snapshot = t;
    for (size_t q : ops.measured) {
        t = snapshot;
        auto m0 = std::chrono::steady_clock::now();
        t.measure_z(static_cast<int>(q), src);
        auto m1 = std::chrono::steady_clock::now();
        row.meas_ns += std::chrono::duration_cast<std::chrono::nanoseconds>(m1 - m0).count();
        ++row.op_counts["measure_z"];
    }
    row.wall_ns += row.meas_ns;
    return row;
}

inline BenchRow bench_stabilizer(const CascadeSpec& spec, uint64_t seed) {
    BenchRow row{"stabilizer", spec.n, spec.plus, {}, 0, 0};
    CascadeOps ops = cascade_ops(spec);
    (void)seed;  // random outcomes default to 0; op counts are seed-free anyway
    auto t0 = std::chrono::steady_clock::now();
    StabilizerTableau st(spec.n);
    std::set<size_t> plus(ops.plus_positions.begin(), ops.plus_positions.end());
    for (size_t i = 0; i < spec.n; ++i) {
        st.init_qubit(i, plus.count(i) ? Prep::Plus : Prep::Zero);
    }
    for (const auto& [c, tg] : ops.cnots) {
        st.apply_cnot(c, tg);
        ++row.op_counts["cnot"];
    }
    auto t1 = std::chrono::steady_clock::now();
    row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    StabilizerTableau snapshot = st;
    for (size_t q : ops.measured) {
        st = snapshot;
        auto m0 = std::chrono::steady_clock::now();
        st.measure(q, StabilizerTableau::Basis::Z, -1);
        auto m1 = std::chrono::steady_clock::now();
        row.meas_ns += std::chrono::duration_cast<std::chrono::nanoseconds>(m1 - m0).count();
        ++row.op_counts["measure_z"];
    }
    row.wall_ns += row.meas_ns;
    return row;
}

/// Run both engines over the size ladder; `reps` repetitions keep the
/// minimum wall time per size (noise floor on small instances).
inline std::vector<BenchRow> bench_compare(const std::vector<size_t>& sizes, uint64_t seed,
                                           int reps = 5) {
    std::vector<BenchRow> rows;
    for (size_t n : sizes) {
        CascadeSpec spec{n};
        BenchRow best_t, best_s;
        for (int r = 0; r < reps; ++r) {
            BenchRow bt = bench_tableau(spec, seed + r);
            BenchRow bs = bench_stabilizer(spec, seed + r);
            if (r == 0 || bt.wall_ns < best_t.wall_ns) best_t = bt;
            if (r == 0 || bs.wall_ns < best_s.wall_ns) best_s = bs;
        }
        rows.push_back(best_t);
        rows.push_back(best_s);
    }
    return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "engine,n,N,op_counts,wall_ns,meas_ns\n";
    for (const auto& r : rows) {
        os << r.engine << "," << r.n << "," << r.N << ",\"";
        bool first = true;
        for (const auto& [k, v] : r.op_counts) {
            if (!first) os << ";";
            os << k << "=" << v;
            first = false;
        }
        os << "\"," << r.wall_ns << "," << r.meas_ns << "\n";
    }
    return os.str();
}

/// Least-squares slope of log(t) against log(n).
inline double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t k = points.size();
    for (const auto& [n, t] : points) {
        double x = std::log(n);
        double y = std::log(t);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace qlnc

#endif  // QLNC_BENCH_HPP_
