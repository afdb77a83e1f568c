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

#ifndef QLNC_STABREF_HPP_
#define QLNC_STABREF_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qlnc/circuit.hpp"
#include "qlnc/tableau.hpp"

namespace qlnc {

/// Reference qubit stabilizer simulator: 2n rows (destabilizers then
/// stabilizers) of bit-packed X/Z parts plus an i-power phase per row.
/// Row i represents i^{r_i} * prod_j X_j^{x_ij} Z_j^{z_ij}; in this fixed
/// X-before-Z per-qubit order CNOT, X and Z updates carry no phase
/// bookkeeping and row products pick up 2 * (z_src . x_dst).
class StabilizerTableau {
   public:
    enum class Basis { X, Z };

    explicit StabilizerTableau(size_t n = 0) { reset(n); }

    void reset(size_t n) {
        n_ = n;
        words_ = (n + 63) / 64;
        x_.assign(2 * n * words_, 0);
        z_.assign(2 * n * words_, 0);
        r_.assign(2 * n, 0);
        scratch_x_.assign(words_, 0);
        scratch_z_.assign(words_, 0);
    }

    size_t num_qubits() const { return n_; }

    void init_qubit(size_t q, Prep kind) {
        // destabilizer row q, stabilizer row n+q
        if (kind == Prep::Zero) {
            set_z(n_ + q, q, true);
            set_x(q, q, true);
        } else {
            set_x(n_ + q, q, true);
            set_z(q, q, true);
        }
    }

    bool x_bit(size_t row, size_t q) const {
        return (x_[row * words_ + (q >> 6)] >> (q & 63)) & 1;
    }
    bool z_bit(size_t row, size_t q) const {
        return (z_[row * words_ + (q >> 6)] >> (q & 63)) & 1;
    }
    uint8_t phase(size_t row) const { return r_[row]; }

    void apply_cnot(size_t c, size_t t) {
        for (size_t i = 0; i < 2 * n_; ++i) {
            if (x_bit(i, c)) flip_x(i, t);
            if (z_bit(i, t)) flip_z(i, c);
        }
    }

    void apply_x(size_t q) {
        for (size_t i = 0; i < 2 * n_; ++i) {
            if (z_bit(i, q)) r_[i] = (r_[i] + 2) & 3;
        }
    }

    void apply_z(size_t q) {
        for (size_t i = 0; i < 2 * n_; ++i) {
            if (x_bit(i, q)) r_[i] = (r_[i] + 2) & 3;
        }
    }

    void apply_hadamard(size_t q) {
        for (size_t i = 0; i < 2 * n_; ++i) {
            bool xb = x_bit(i, q), zb = z_bit(i, q);
            if (xb && zb) r_[i] = (r_[i] + 2) & 3;
            if (xb != zb) {
                set_x(i, q, zb);
                set_z(i, q, xb);
            }
        }
    }

    struct MeasureResult {
        bool outcome;
        bool deterministic;
        uint64_t work = 0;  // rows touched, for the benchmark's op accounting
    };

    /// Measure the X or Z observable on qubit q. If the outcome is random the
    /// forced value (when >= 0) is taken; a forced value conflicting with a
    /// deterministic outcome throws.
    MeasureResult measure(size_t q, Basis basis, int forced = -1) {
        auto anticommutes = [&](size_t row) {
            return basis == Basis::Z ? x_bit(row, q) : z_bit(row, q);
        };
        size_t pivot = 2 * n_;
        for (size_t i = n_; i < 2 * n_; ++i) {
            if (anticommutes(i)) {
                pivot = i;
                break;
            }
        }
        MeasureResult res{false, pivot == 2 * n_, 0};
        if (!res.deterministic) {
            bool b = forced >= 0 ? forced != 0 : false;
            // Fused anticommute test + row multiply, strided over the flat
            // bit matrix (this sweep is the benchmark-relevant hot loop).
            const size_t qw = q >> 6;
            const uint64_t qm = uint64_t(1) << (q & 63);
            const uint64_t* anti = (basis == Basis::Z ? x_.data() : z_.data()) + qw;
            const uint64_t* px = &x_[pivot * words_];
            const uint64_t* pz = &z_[pivot * words_];
            const uint8_t rp = r_[pivot];
            for (size_t i = 0; i < 2 * n_; ++i) {
                if (i == pivot || !(anti[i * words_] & qm)) continue;
                ++res.work;
                uint64_t* dx = &x_[i * words_];
                uint64_t* dz = &z_[i * words_];
                uint32_t cross = 0;
                for (size_t w = 0; w < words_; ++w) {
                    cross += __builtin_popcountll(pz[w] & dx[w]);
                    dx[w] ^= px[w];
                    dz[w] ^= pz[w];
                }
                r_[i] = (r_[i] + rp + 2 * cross) & 3;
            }
            std::copy_n(&x_[pivot * words_], words_, &x_[(pivot - n_) * words_]);
            std::copy_n(&z_[pivot * words_], words_, &z_[(pivot - n_) * words_]);
            r_[pivot - n_] = r_[pivot];
            std::fill_n(&x_[pivot * words_], words_, 0);
            std::fill_n(&z_[pivot * words_], words_, 0);
            if (basis == Basis::Z) {
                set_z(pivot, q, true);
            } else {
                set_x(pivot, q, true);
            }
            r_[pivot] = b ? 2 : 0;
            res.outcome = b;
            return res;
        }
        // Deterministic: accumulate the product of stabilizers indicated by
        // the destabilizer rows that anticommute with the observable.
        std::fill(scratch_x_.begin(), scratch_x_.end(), 0);
        std::fill(scratch_z_.begin(), scratch_z_.end(), 0);
        uint64_t* sx = scratch_x_.data();
        uint64_t* sz = scratch_z_.data();
        uint32_t sr = 0;
        for (size_t i = 0; i < n_; ++i) {
            if (!anticommutes(i)) continue;
            ++res.work;
            // scratch := stab(i) * scratch
            const uint64_t* rx = &x_[(n_ + i) * words_];
            const uint64_t* rz = &z_[(n_ + i) * words_];
            uint32_t cross = 0;
            for (size_t w = 0; w < words_; ++w) {
                cross += __builtin_popcountll(rz[w] & sx[w]);
            }
            sr = (sr + r_[n_ + i] + 2 * cross) & 3;
            for (size_t w = 0; w < words_; ++w) {
                sx[w] ^= rx[w];
                sz[w] ^= rz[w];
            }
        }
        if (sr != 0 && sr != 2) throw std::logic_error("non-hermitian measurement product");
        res.outcome = sr == 2;
        if (forced >= 0 && (forced != 0) != res.outcome) {
            throw std::runtime_error("forced measurement branch has probability zero");
        }
        return res;
    }

    struct Generator {
        std::vector<uint64_t> x, z;
        uint8_t r;
    };

    std::vector<Generator> generators() const {
        std::vector<Generator> out;
        for (size_t i = n_; i < 2 * n_; ++i) {
            Generator g;
            g.x.assign(x_.begin() + i * words_, x_.begin() + (i + 1) * words_);
            g.z.assign(z_.begin() + i * words_, z_.begin() + (i + 1) * words_);
            g.r = r_[i];
            out.push_back(std::move(g));
        }
        return out;
    }

   private:
    void set_x(size_t row, size_t q, bool v) {
        uint64_t m = uint64_t(1) << (q & 63);
        if (v) {
            x_[row * words_ + (q >> 6)] |= m;
        } else {
            x_[row * words_ + (q >> 6)] &= ~m;
        }
    }
    void set_z(size_t row, size_t q, bool v) {
        uint64_t m = uint64_t(1) << (q & 63);
        if (v) {
            z_[row * words_ + (q >> 6)] |= m;
        } else {
            z_[row * words_ + (q >> 6)] &= ~m;
        }
    }
    void flip_x(size_t row, size_t q) { x_[row * words_ + (q >> 6)] ^= uint64_t(1) << (q & 63); }
    void flip_z(size_t row, size_t q) { z_[row * words_ + (q >> 6)] ^= uint64_t(1) << (q & 63); }

    // row dst := row src * row dst
    void row_mul(size_t dst, size_t src) {
        const uint64_t* sxp = &x_[src * words_];
        const uint64_t* szp = &z_[src * words_];
        uint64_t* dxp = &x_[dst * words_];
        uint64_t* dzp = &z_[dst * words_];
        uint32_t cross = 0;
        for (size_t w = 0; w < words_; ++w) {
            cross += __builtin_popcountll(szp[w] & dxp[w]);
        }
        r_[dst] = (r_[dst] + r_[src] + 2 * cross) & 3;
        for (size_t w = 0; w < words_; ++w) {
            dxp[w] ^= sxp[w];
            dzp[w] ^= szp[w];
        }
    }

    size_t n_ = 0;
    size_t words_ = 0;
    std::vector<uint64_t> x_, z_;  // flat 2n x words bit matrices
    std::vector<uint8_t> r_;
    std::vector<uint64_t> scratch_x_, scratch_z_;
};

/// Symbolic check that a stabilizer generator fixes the parity-formula state
/// (d = 2 only): P = i^r X^u Z^v fixes sum_x (-1)^{phi(x)} |f(x)> iff
///   (1) u lies in the row space of C's indeterminate rows (witness w),
///   (2) v is orthogonal to every indeterminate row, and
///   (3) r == 2 * (p.w + v.u + v.c0) mod 4.
inline bool generator_fixes_state(const StabilizerTableau::Generator& gen,
                                  const ParityTableau& t) {
    if (t.modulus().value() != 2) throw std::domain_error("generator check is d = 2 only");
    const auto& labels = t.labels();
    size_t n = labels.size();
    size_t N = t.num_indeterminates();
    auto gx = [&](size_t j) { return (gen.x[j >> 6] >> (j & 63)) & 1; };
    auto gz = [&](size_t j) { return (gen.z[j >> 6] >> (j & 63)) & 1; };

    // (2) v orthogonal to rows 1..N.
    for (size_t h = 1; h <= N; ++h) {
        unsigned acc = 0;
        for (size_t j = 0; j < n; ++j) acc ^= gz(j) & t.coeff(h, labels[j]);
        if (acc) return false;
    }
    // (1) express u as a combination w of C's indeterminate rows, tracking
    // the combination through the elimination.
    std::vector<unsigned> u(n, 0);
    for (size_t j = 0; j < n; ++j) u[j] = static_cast<unsigned>(gx(j));
    std::vector<unsigned> w(N, 0);
    {
        std::vector<std::vector<unsigned>> mm(N, std::vector<unsigned>(n, 0));
        std::vector<std::vector<unsigned>> coef(N, std::vector<unsigned>(N, 0));
        for (size_t h = 0; h < N; ++h) {
            coef[h][h] = 1;
            for (size_t j = 0; j < n; ++j) mm[h][j] = t.coeff(h + 1, labels[j]);
        }
        std::vector<unsigned> residual = u;
        size_t rr = 0;
        for (size_t col = 0; col < n && rr < N; ++col) {
            size_t sel = rr;
            while (sel < N && !mm[sel][col]) ++sel;
            if (sel == N) continue;
            std::swap(mm[sel], mm[rr]);
            std::swap(coef[sel], coef[rr]);
            for (size_t h = 0; h < N; ++h) {
                if (h != rr && mm[h][col]) {
                    for (size_t j = 0; j < n; ++j) mm[h][j] ^= mm[rr][j];
                    for (size_t j = 0; j < N; ++j) coef[h][j] ^= coef[rr][j];
                }
            }
            if (residual[col]) {
                for (size_t j = 0; j < n; ++j) residual[j] ^= mm[rr][j];
                for (size_t j = 0; j < N; ++j) w[j] ^= coef[rr][j];
            }
            ++rr;
        }
        for (size_t j = 0; j < n; ++j) {
            if (residual[j]) return false;  // u not in the row space
        }
    }
    // (3) the sign condition.
    unsigned s2 = 0;
    for (size_t h = 0; h < N; ++h) s2 ^= w[h] & t.phase(h + 1);
    for (size_t j = 0; j < n; ++j) {
        s2 ^= gz(j) & gx(j);                          // v.u
        s2 ^= gz(j) & t.coeff(0, labels[j]);          // v.c0
    }
    return gen.r == 2 * s2;
}

/// True iff the stabilizer state equals the parity-formula state exactly:
/// every generator fixes the expansion with eigenvalue +1 (a stabilizer
/// state is the unique joint +1 eigenvector).
inline bool stabilizer_matches_tableau(const StabilizerTableau& st, const ParityTableau& t) {
    if (st.num_qubits() != t.num_qubits()) return false;
    for (const auto& gen : st.generators()) {
        if (!generator_fixes_state(gen, t)) return false;
    }
    return true;
}

/// Circuit back end for the stabilizer reference (d = 2 only).
class StabEngine : public SimEngine {
   public:
    void init(const Modulus& d, const std::vector<std::pair<int, Prep>>& preps) override {
        if (d.value() != 2) throw std::domain_error("stabilizer reference requires d = 2");
        std::vector<std::pair<int, Prep>> sorted = preps;
        std::sort(sorted.begin(), sorted.end());
        st_.reset(sorted.size());
        pos_.clear();
        for (size_t i = 0; i < sorted.size(); ++i) {
            pos_[sorted[i].first] = i;
            st_.init_qubit(i, sorted[i].second);
        }
    }

    void apply_x(int q, Fe e) override {
        if (e % 2) st_.apply_x(pos_.at(q));
    }
    void apply_z(int q, Fe e) override {
        if (e % 2) st_.apply_z(pos_.at(q));
    }
    void apply_cnot(int c, int t, Fe reps) override {
        if (reps % 2) st_.apply_cnot(pos_.at(c), pos_.at(t));
    }
    void measure_x(int q, Fe outcome) override {
        st_.measure(pos_.at(q), StabilizerTableau::Basis::X, outcome ? 1 : 0);
    }
    void measure_z(int q, Fe outcome) override {
        st_.measure(pos_.at(q), StabilizerTableau::Basis::Z, outcome ? 1 : 0);
    }
    void reset_from_constant(int q, Fe c, Prep target) override {
        size_t p = pos_.at(q);
        st_.measure(p, StabilizerTableau::Basis::Z, c ? 1 : 0);
        if (c) st_.apply_x(p);
        if (target == Prep::Plus) st_.apply_hadamard(p);
    }
    void reset_from_plus(int q, Fe phase, Prep target) override {
        size_t p = pos_.at(q);
        // Z^phase |+> is the X eigenstate with eigenvalue (-1)^phase.
        st_.measure(p, StabilizerTableau::Basis::X, phase ? 1 : 0);
        if (phase) st_.apply_z(p);
        if (target == Prep::Zero) st_.apply_hadamard(p);
    }

    const StabilizerTableau& tableau() const { return st_; }
    size_t position(int label) const { return pos_.at(label); }

   private:
    StabilizerTableau st_;
    std::map<int, size_t> pos_;
};

struct StabExecution {
    StabilizerTableau tableau;
    ExecutionResult result;
    std::map<int, size_t> positions;
};

/// Run the circuit against the stabilizer reference (d = 2).
inline StabExecution stab_execute(const QlncCircuit& c, OutcomeSource& src) {
    if (c.d.value() != 2) throw std::domain_error("stabilizer reference requires d = 2");
    StabEngine engine;
    ExecutionResult res = execute(c, src, &engine);
    std::map<int, size_t> pos;
    for (int l : res.tableau.labels()) pos[l] = engine.position(l);
    return {engine.tableau(), std::move(res), std::move(pos)};
}

}  // namespace qlnc

#endif  // QLNC_STABREF_HPP_
