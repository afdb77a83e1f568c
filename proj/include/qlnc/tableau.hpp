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

#ifndef QLNC_TABLEAU_HPP_
#define QLNC_TABLEAU_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qlnc/dense_state.hpp"
#include "qlnc/field.hpp"
#include "qlnc/outcome.hpp"

namespace qlnc {

enum class Prep { Zero, Plus };

enum class TerminateMode { kRetainAsPlus, kRemove };

struct PhaseCorrection {
    int qubit;
    Fe exponent;  // Z^exponent
    bool operator==(const PhaseCorrection& o) const {
        return qubit == o.qubit && exponent == o.exponent;
    }
};

struct TerminationRecord {
    Fe outcome = 0;
    std::vector<PhaseCorrection> corrections;
    bool removed = false;
};

/// Parity-function tableau over Z_d: an (N+1) x (n+1) coefficient matrix C
/// whose column 0 is pinned to e0 and whose column j >= 1 holds the linear
/// formula of qubit j over N formal indeterminates, plus a phase vector p.
/// The represented state is the uniform superposition over all assignments
/// of the indeterminates, with relative phases w^{phi(x)}.
///
/// Row 0 is the constants row. The class maintains two invariants after
/// every operation: rank(C) equals the number of rows, and column 0 is e0.
class ParityTableau {
   public:
    ParityTableau(Modulus d, const std::vector<Prep>& preps) : ParityTableau(d, number(preps)) {}

    ParityTableau(Modulus d, const std::vector<std::pair<int, Prep>>& preps) : d_(d) {
        if (preps.empty()) throw std::domain_error("tableau needs at least one qubit");
        std::vector<std::pair<int, Prep>> sorted = preps;
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t i = 1; i < sorted.size(); ++i) {
            if (sorted[i].first == sorted[i - 1].first) {
                throw std::domain_error("duplicate qubit label");
            }
        }
        size_t plus = 0;
        for (const auto& [label, kind] : sorted) plus += kind == Prep::Plus ? 1 : 0;
        nrows_ = 1 + plus;
        cols_.assign(sorted.size() + 1, std::vector<Fe>(nrows_, 0));
        phase_.assign(nrows_, 0);
        cols_[0][0] = 1;
        labels_.reserve(sorted.size());
        size_t next_row = 1;
        for (size_t j = 0; j < sorted.size(); ++j) {
            labels_.push_back(sorted[j].first);
            if (sorted[j].second == Prep::Plus) cols_[j + 1][next_row++] = 1;
        }
        rebuild_index();
    }

    /// Raw constructor for deserialization and fixtures: rows is the full
    /// (N+1) x (n+1) matrix including the e0 column. Invariants are checked.
    static ParityTableau from_raw(Modulus d, const std::vector<int>& labels,
                                  const std::vector<std::vector<Fe>>& rows,
                                  const std::vector<Fe>& phases) {
        if (rows.empty() || phases.size() != rows.size()) {
            throw std::domain_error("tableau shape mismatch");
        }
        for (size_t i = 1; i < labels.size(); ++i) {
            if (labels[i] <= labels[i - 1]) {
                throw std::domain_error("tableau labels must be strictly ascending");
            }
        }
        std::vector<std::pair<int, Prep>> preps;
        for (int l : labels) preps.push_back({l, Prep::Zero});
        ParityTableau t(d, preps);
        t.cols_.assign(labels.size() + 1, std::vector<Fe>(rows.size(), 0));
        t.phase_.assign(rows.size(), 0);
        t.nrows_ = rows.size();
        for (size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != labels.size() + 1) {
                throw std::domain_error("tableau shape mismatch");
            }
            for (size_t j = 0; j <= labels.size(); ++j) {
                t.cols_[j][r] = d.reduce(rows[r][j]);
            }
            t.phase_[r] = d.reduce(phases[r]);
        }
        t.check_invariants();
        return t;
    }

    const Modulus& modulus() const { return d_; }
    size_t num_qubits() const { return labels_.size(); }
    size_t num_indeterminates() const { return nrows_ - 1; }
    size_t rows() const { return nrows_; }
    const std::vector<int>& labels() const { return labels_; }
    bool has_qubit(int label) const { return col_of_.count(label) != 0; }

    Fe coeff(size_t row, int label) const { return cols_[col_index(label)][row]; }
    Fe constant_of(int label) const { return cols_[col_index(label)][0]; }
    std::vector<Fe> column(int label) const { return cols_[col_index(label)]; }
    Fe phase(size_t row) const { return phase_[row]; }
    const std::vector<Fe>& phase_vector() const { return phase_; }

    // --- unitary updates (elementary column operations) ------------------

    void apply_pauli_x(int q, Fe exponent = 1) {
        size_t j = col_index(q);
        cols_[j][0] = d_.add(cols_[j][0], d_.reduce(exponent));
    }

    void apply_pauli_z(int q, Fe exponent = 1) {
        size_t j = col_index(q);
        Fe e = d_.reduce(exponent);
        for (size_t r = 0; r < nrows_; ++r) {
            phase_[r] = d_.add(phase_[r], d_.mul(e, cols_[j][r]));
        }
    }

    /// CNOT for d = 2; Add_d^reps in general.
    void apply_cnot(int control, int target, Fe reps = 1) {
        if (control == target) throw std::domain_error("cnot control equals target");
        size_t jc = col_index(control);
        size_t jt = col_index(target);
        Fe r = d_.reduce(reps);
        for (size_t row = 0; row < nrows_; ++row) {
            cols_[jt][row] = d_.add(cols_[jt][row], d_.mul(r, cols_[jc][row]));
        }
    }

    // --- measurements -----------------------------------------------------

    /// X-observable measurement; outcome s means eigenvalue w^s.
    /// Deterministic when the qubit's formula is a lone indeterminate;
    /// otherwise draws from src, appends a fresh indeterminate and folds the
    /// outcome into the phase vector.
    Fe measure_x(int q, OutcomeSource& src, int record = -1) {
        size_t j = col_index(q);
        rref(j);
        size_t g = 0;
        bool pivot = pivot_row_of(j, &g);
        if (pivot && row_support_is_single(g, j)) {
            // Z^p |+> is the X eigenstate of eigenvalue w^{-p}; the state is
            // unchanged and the outcome predetermined. (Negation matters for
            // d > 2: a repeated measurement must reproduce its own outcome.)
            return d_.neg(phase_[g]);
        }
        Fe s = src.draw(d_, record);
        append_row();
        size_t nr = nrows_ - 1;
        cols_[j][nr] = 1;
        phase_[nr] = d_.sub(phase_[nr], s);
        if (pivot) {
            cols_[j][g] = d_.sub(cols_[j][g], 1);  // becomes 0
            phase_[g] = d_.add(phase_[g], s);
        }
        return s;
    }

    /// Z-observable measurement; outcome b is the collapsed digit.
    Fe measure_z(int q, OutcomeSource& src, int record = -1) {
        size_t j = col_index(q);
        rref(j);
        size_t g = 0;
        if (!pivot_row_of(j, &g)) {
            return cols_[j][0];  // constant formula, deterministic
        }
        Fe b = src.draw(d_, record);
        // Delta = b e0 - c_j; add r*Delta to every column (and p) whose
        // row-g coefficient is r, then drop row g.
        std::vector<Fe> delta(nrows_, 0);
        delta[0] = b;
        delta[g] = d_.sub(delta[g], 1);
        for (auto& col : cols_) {
            Fe r = col[g];
            if (r == 0) continue;
            for (size_t row = 0; row < nrows_; ++row) {
                col[row] = d_.add(col[row], d_.mul(r, delta[row]));
            }
        }
        Fe rp = phase_[g];
        if (rp != 0) {
            for (size_t row = 0; row < nrows_; ++row) {
                phase_[row] = d_.add(phase_[row], d_.mul(rp, delta[row]));
            }
        }
        remove_row(g);
        return b;
    }

    Fe measure_z_destructive(int q, OutcomeSource& src, int record = -1) {
        Fe b = measure_z(q, src, record);
        remove_column(col_index(q));
        drop_orphan_rows();
        return b;
    }

    /// Qubit set (with Z exponents) that cancels the phase vector on every
    /// indeterminate row: one pivot qubit per non-zero row of the
    /// row-reduced phase vector. p_0 is a global phase and is left alone.
    std::vector<PhaseCorrection> find_phase_correction() const {
        ParityTableau c = *this;
        c.rref(std::nullopt);
        std::vector<PhaseCorrection> out;
        for (size_t g = 1; g < c.nrows_; ++g) {
            if (c.phase_[g] == 0) continue;
            // Pivot column of row g = leftmost column with a non-zero entry.
            size_t j = 1;
            for (; j < c.cols_.size(); ++j) {
                if (c.cols_[j][g] != 0) break;
            }
            if (j == c.cols_.size()) throw std::logic_error("zero indeterminate row");
            out.push_back({c.labels_[j - 1], d_.neg(c.phase_[g])});
        }
        return out;
    }

    /// X-measure `q`, cancel all induced relative phases by classically
    /// controlled Z gates, and either keep q as a fresh |+> or remove it.
    TerminationRecord terminate(int q, OutcomeSource& src,
                                TerminateMode mode = TerminateMode::kRetainAsPlus,
                                int record = -1) {
        TerminationRecord rec;
        rec.outcome = measure_x(q, src, record);
        rec.corrections = find_phase_correction();
        for (const auto& corr : rec.corrections) {
            apply_pauli_z(corr.qubit, corr.exponent);
        }
        if (mode == TerminateMode::kRemove) {
            discard_qubit(q);
            rec.removed = true;
        }
        return rec;
    }

    // --- qubit lifecycle ---------------------------------------------------

    /// Insert a fresh qubit column (|0> or |+>). The label must be new.
    void prep_qubit(int label, Prep kind) {
        if (has_qubit(label)) throw std::domain_error("qubit label already live");
        size_t at = 1;
        while (at < cols_.size() && labels_[at - 1] < label) ++at;
        std::vector<Fe> col(nrows_, 0);
        cols_.insert(cols_.begin() + at, std::move(col));
        labels_.insert(labels_.begin() + (at - 1), label);
        if (kind == Prep::Plus) {
            append_row();
            cols_[at][nrows_ - 1] = 1;
        }
        rebuild_index();
    }

    /// Re-initialize a measured-out qubit. Requires the qubit to be
    /// disentangled (a constant or a lone fresh indeterminate).
    void reset_qubit(int label, Prep kind) {
        discard_qubit(label);
        prep_qubit(label, kind);
    }

    /// Destructively remove a disentangled qubit column; rows left without
    /// support disappear with it. Throws if the qubit is entangled.
    void discard_qubit(int label) {
        size_t j = col_index(label);
        rref(j);
        size_t g = 0;
        if (pivot_row_of(j, &g)) {
            if (!row_support_is_single(g, j)) {
                throw std::domain_error("cannot discard entangled qubit " +
                                        std::to_string(label));
            }
        }
        remove_column(j);
        drop_orphan_rows();
    }

    /// How a qubit factors out of the state, if it does: either a constant
    /// |value>, or a lone fresh indeterminate Z^phase |+> (up to global
    /// phase). disentangled == false means it is entangled with the rest.
    struct QubitFactor {
        bool disentangled;
        bool constant;
        Fe value;
        Fe phase;
    };
    QubitFactor factor_of(int label) const {
        ParityTableau c = *this;
        size_t j = c.col_index(label);
        c.rref(j);
        size_t g = 0;
        if (!c.pivot_row_of(j, &g)) return {true, true, c.cols_[j][0], 0};
        if (c.row_support_is_single(g, j)) return {true, false, 0, c.phase_[g]};
        return {false, false, 0, 0};
    }

    /// The tableau restricted to `keep` (all other qubits discarded).
    ParityTableau restricted_to(const std::vector<int>& keep) const {
        ParityTableau out = *this;
        std::vector<int> drop;
        for (int l : out.labels_) {
            if (std::find(keep.begin(), keep.end(), l) == keep.end()) drop.push_back(l);
        }
        for (int l : drop) out.discard_qubit(l);
        for (int l : keep) {
            if (!out.has_qubit(l)) throw std::domain_error("restriction to unknown qubit");
        }
        return out;
    }

    // --- change of variables ------------------------------------------------

    /// row dst += lambda * row src: left multiplication by an invertible Q
    /// with Q e0 = e0 (src must be an indeterminate row). The represented
    /// state is unchanged.
    void apply_change_of_variables(size_t dst, size_t src, Fe lambda) {
        if (src == 0 || src >= nrows_ || dst >= nrows_ || src == dst) {
            throw std::domain_error("invalid change of variables");
        }
        add_row_multiple(dst, src, d_.reduce(lambda));
    }

    /// Rescale an indeterminate (lambda != 0); also a valid Q.
    void scale_variable(size_t row, Fe lambda) {
        Fe l = d_.reduce(lambda);
        if (row == 0 || row >= nrows_ || l == 0) {
            throw std::domain_error("invalid variable scaling");
        }
        scale_row(row, l);
    }

    // --- canonical form and comparison --------------------------------------

    /// Unique reduced row-echelon representative under the fixed pivot order
    /// (columns scanned in label order). Two tableaus over the same labels
    /// represent the same state iff their canonical forms coincide.
    ParityTableau canonical() const {
        ParityTableau c = *this;
        c.rref(std::nullopt);
        return c;
    }

    bool operator==(const ParityTableau& o) const {
        return d_ == o.d_ && labels_ == o.labels_ && cols_ == o.cols_ && phase_ == o.phase_;
    }
    bool operator!=(const ParityTableau& o) const { return !(*this == o); }

    friend bool same_state(const ParityTableau& a, const ParityTableau& b) {
        return a.canonical() == b.canonical();
    }

    /// Canonical equality ignoring p_0 (an unobservable global phase).
    friend bool same_state_up_to_phase(const ParityTableau& a, const ParityTableau& b) {
        ParityTableau ca = a.canonical();
        ParityTableau cb = b.canonical();
        if (ca.d_ != cb.d_ || ca.labels_ != cb.labels_ || ca.cols_ != cb.cols_) return false;
        for (size_t r = 1; r < ca.nrows_; ++r) {
            if (ca.phase_[r] != cb.phase_[r]) return false;
        }
        return ca.nrows_ == cb.nrows_;
    }

    // --- expansion -----------------------------------------------------------

    /// Exact amplitude vector: for each assignment x in Z_d^N, amplitude
    /// w^{phi(x)} / sqrt(d^N) at basis state (f_1(x), ..., f_n(x)).
    DenseState expand_amplitudes(uint64_t cap) const {
        size_t n = num_qubits();
        size_t N = num_indeterminates();
        uint64_t terms = 1;
        for (size_t i = 0; i < N; ++i) {
            terms *= d_.value();
            if (terms > cap) throw std::runtime_error("expansion too large");
        }
        uint64_t dim = 1;
        for (size_t i = 0; i < n; ++i) {
            dim *= d_.value();
            if (dim > (uint64_t(1) << 62)) throw std::runtime_error("expansion too large");
        }
        DenseState out(d_, n);
        out.amplitudes().assign(out.dim(), {0.0, 0.0});
        double mag = 1.0 / std::sqrt(static_cast<double>(terms));
        std::vector<Fe> x(N, 0);
        for (uint64_t t = 0; t < terms; ++t) {
            Fe ph = phase_[0];
            size_t index = 0;
            for (size_t j = 1; j <= n; ++j) {
                Fe v = cols_[j][0];
                for (size_t h = 0; h < N; ++h) {
                    if (x[h]) v = d_.add(v, d_.mul(cols_[j][h + 1], x[h]));
                }
                index = out.with_digit(index, j - 1, v);
            }
            for (size_t h = 0; h < N; ++h) {
                if (x[h]) ph = d_.add(ph, d_.mul(phase_[h + 1], x[h]));
            }
            out.amplitudes()[index] += mag * out.omega(ph);
            // odometer
            for (size_t h = N; h-- > 0;) {
                x[h] = d_.add(x[h], 1);
                if (x[h] != 0) break;
            }
        }
        return out;
    }

    // --- invariants ------------------------------------------------------------

    /// Throws std::logic_error if rank(C) != rows, column 0 != e0, or an
    /// indeterminate row has no support.
    void check_invariants() const {
        if (cols_.empty() || cols_[0][0] != 1) throw std::logic_error("column 0 is not e0");
        for (size_t r = 1; r < nrows_; ++r) {
            if (cols_[0][r] != 0) throw std::logic_error("column 0 is not e0");
        }
        for (size_t r = 1; r < nrows_; ++r) {
            bool nonzero = false;
            for (size_t j = 1; j < cols_.size() && !nonzero; ++j) {
                nonzero = cols_[j][r] != 0;
            }
            if (!nonzero) throw std::logic_error("indeterminate row with empty support");
        }
        ParityTableau c = *this;
        c.rref(std::nullopt);
        if (c.rank_after_rref_ != nrows_) {
            throw std::logic_error("rank(C) dropped below row count");
        }
    }

   private:
    static std::vector<std::pair<int, Prep>> number(const std::vector<Prep>& preps) {
        std::vector<std::pair<int, Prep>> out;
        for (size_t i = 0; i < preps.size(); ++i) out.push_back({static_cast<int>(i), preps[i]});
        return out;
    }

    size_t col_index(int label) const {
        auto it = col_of_.find(label);
        if (it == col_of_.end()) {
            throw std::domain_error("unknown qubit " + std::to_string(label));
        }
        return it->second;
    }

    void rebuild_index() {
        col_of_.clear();
        for (size_t j = 1; j < cols_.size(); ++j) col_of_[labels_[j - 1]] = j;
    }

    /// True iff column j is a pivot-style column: exactly one non-zero entry
    /// in rows >= 1 (value 1, row stored in *g) and zero constant part is not
    /// required. Callers run rref(j) first, after which the column is either
    /// e0-colinear or exactly e_g.
    bool pivot_row_of(size_t j, size_t* g) const {
        for (size_t r = 1; r < nrows_; ++r) {
            if (cols_[j][r] != 0) {
                *g = r;
                return true;
            }
        }
        return false;
    }

    bool row_support_is_single(size_t g, size_t j) const {
        for (size_t k = 1; k < cols_.size(); ++k) {
            if (k != j && cols_[k][g] != 0) return false;
        }
        return true;
    }

    void append_row() {
        for (auto& col : cols_) col.push_back(0);
        phase_.push_back(0);
        ++nrows_;
    }

    void remove_row(size_t g) {
        for (auto& col : cols_) col.erase(col.begin() + g);
        phase_.erase(phase_.begin() + g);
        --nrows_;
    }

    void remove_column(size_t j) {
        cols_.erase(cols_.begin() + j);
        labels_.erase(labels_.begin() + (j - 1));
        rebuild_index();
    }

    void drop_orphan_rows() {
        for (size_t r = nrows_; r-- > 1;) {
            bool empty = true;
            for (size_t j = 1; j < cols_.size() && empty; ++j) {
                empty = cols_[j][r] == 0;
            }
            if (empty) remove_row(r);
        }
    }

    void swap_rows(size_t a, size_t b) {
        if (a == b) return;
        for (auto& col : cols_) std::swap(col[a], col[b]);
        std::swap(phase_[a], phase_[b]);
    }

    void scale_row(size_t r, Fe lambda) {
        if (lambda == 1) return;
        for (auto& col : cols_) col[r] = d_.mul(col[r], lambda);
        phase_[r] = d_.mul(phase_[r], lambda);
    }

    // row dst += lambda * row src
    void add_row_multiple(size_t dst, size_t src, Fe lambda) {
        if (lambda == 0) return;
        for (auto& col : cols_) col[dst] = d_.add(col[dst], d_.mul(lambda, col[src]));
        phase_[dst] = d_.add(phase_[dst], d_.mul(lambda, phase_[src]));
    }

    /// Reduced row-echelon form via a change of variables fixing e0.
    /// Columns are scanned in label order, except `prefer` (if given) is
    /// pivoted immediately after column 0, so a measured qubit's column ends
    /// up either a pivot or e0-colinear.
    void rref(std::optional<size_t> prefer) {
        size_t pr = 0;
        auto reduce_col = [&](size_t j) {
            if (pr >= nrows_) return;
            size_t r = pr;
            while (r < nrows_ && cols_[j][r] == 0) ++r;
            if (r == nrows_) return;
            swap_rows(r, pr);
            scale_row(pr, d_.inv(cols_[j][pr]));
            for (size_t r2 = 0; r2 < nrows_; ++r2) {
                if (r2 != pr && cols_[j][r2] != 0) {
                    add_row_multiple(r2, pr, d_.neg(cols_[j][r2]));
                }
            }
            ++pr;
        };
        reduce_col(0);
        if (prefer && *prefer != 0) reduce_col(*prefer);
        for (size_t j = 1; j < cols_.size(); ++j) {
            if (prefer && j == *prefer) continue;
            reduce_col(j);
        }
        rank_after_rref_ = pr;
    }

    Modulus d_;
    size_t nrows_ = 1;                  // N + 1
    std::vector<std::vector<Fe>> cols_;  // cols_[0] = e0
    std::vector<Fe> phase_;
    std::vector<int> labels_;  // label of column j is labels_[j-1]
    std::unordered_map<int, size_t> col_of_;
    size_t rank_after_rref_ = 0;
};

}  // namespace qlnc

#endif  // QLNC_TABLEAU_HPP_
