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

#ifndef QLNC_DENSE_STATE_HPP_
#define QLNC_DENSE_STATE_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qlnc/field.hpp"

namespace qlnc {

inline constexpr double kDenseInternalTol = 1e-12;

/// Brute-force state vector over n qudits of prime dimension d.
///
/// Amplitudes are indexed by base-d digit strings with the most significant
/// digit belonging to qubit position 0 (the first label in whatever ordering
/// the caller fixed). This is the ground truth the tableau engine is checked
/// against; there is no attempt at being fast.
class DenseState {
   public:
    DenseState(Modulus d, size_t n) : d_(d), n_(n) {
        size_t dim = 1;
        for (size_t i = 0; i < n; ++i) dim *= d.value();
        amp_.assign(dim, {0.0, 0.0});
        if (!amp_.empty()) amp_[0] = {1.0, 0.0};
        strides_.resize(n);
        size_t s = 1;
        for (size_t q = n; q-- > 0;) {
            strides_[q] = s;
            s *= d.value();
        }
    }

    const Modulus& modulus() const { return d_; }
    size_t num_qubits() const { return n_; }
    size_t dim() const { return amp_.size(); }
    std::vector<std::complex<double>>& amplitudes() { return amp_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

    Fe digit(size_t index, size_t pos) const {
        return static_cast<Fe>((index / strides_[pos]) % d_.value());
    }

    size_t with_digit(size_t index, size_t pos, Fe v) const {
        Fe old = digit(index, pos);
        return index - static_cast<size_t>(old) * strides_[pos] +
               static_cast<size_t>(v) * strides_[pos];
    }

    std::complex<double> omega(Fe e) const {
        return std::polar(1.0, 2.0 * M_PI * e / d_.value());
    }

    // |x> -> |x+e>
    void apply_x(size_t pos, Fe e) {
        if (e % d_.value() == 0) return;
        std::vector<std::complex<double>> out(amp_.size());
        for (size_t i = 0; i < amp_.size(); ++i) {
            out[with_digit(i, pos, d_.add(digit(i, pos), e))] = amp_[i];
        }
        amp_.swap(out);
    }

    // |x> -> w^{e x} |x>
    void apply_z(size_t pos, Fe e) {
        if (e % d_.value() == 0) return;
        for (size_t i = 0; i < amp_.size(); ++i) {
            amp_[i] *= omega(d_.mul(e, digit(i, pos)));
        }
    }

    // |x>|y> -> |x>|y + r x>
    void apply_add(size_t ctl, size_t tgt, Fe reps) {
        if (reps % d_.value() == 0) return;
        std::vector<std::complex<double>> out(amp_.size());
        for (size_t i = 0; i < amp_.size(); ++i) {
            Fe shift = d_.mul(reps, digit(i, ctl));
            out[with_digit(i, tgt, d_.add(digit(i, tgt), shift))] = amp_[i];
        }
        amp_.swap(out);
    }

    // |k> -> (1/sqrt d) sum_j w^{jk} |j>  (maps |0> to the uniform plus state)
    void apply_fourier(size_t pos) { fourier_impl(pos, /*inverse=*/false); }
    void apply_fourier_inv(size_t pos) { fourier_impl(pos, /*inverse=*/true); }

    /// Project qubit `pos` onto Z-outcome b and renormalize.
    /// Returns the branch probability; throws if it is numerically zero.
    double measure_z(size_t pos, Fe b) {
        double keep = 0.0;
        for (size_t i = 0; i < amp_.size(); ++i) {
            if (digit(i, pos) == b) keep += std::norm(amp_[i]);
        }
        if (keep < kDenseInternalTol) {
            throw std::runtime_error("forced measurement branch has probability zero");
        }
        double scale = 1.0 / std::sqrt(keep);
        for (size_t i = 0; i < amp_.size(); ++i) {
            if (digit(i, pos) == b) {
                amp_[i] *= scale;
            } else {
                amp_[i] = {0.0, 0.0};
            }
        }
        return keep;
    }

    /// Project qubit `pos` onto the X_d eigenvector with eigenvalue w^s.
    double measure_x(size_t pos, Fe s) {
        // Eigenvector |chi_s> = (1/sqrt d) sum_k w^{-sk} |k>.
        size_t dval = d_.value();
        double keep = 0.0;
        std::vector<std::complex<double>> out(amp_.size(), {0.0, 0.0});
        for (size_t base = 0; base < amp_.size(); ++base) {
            if (digit(base, pos) != 0) continue;
            std::complex<double> c{0.0, 0.0};
            for (Fe k = 0; k < dval; ++k) {
                c += omega(d_.mul(s, k)) * amp_[with_digit(base, pos, k)];
            }
            c /= std::sqrt(static_cast<double>(dval));
            keep += std::norm(c);
            for (Fe k = 0; k < dval; ++k) {
                out[with_digit(base, pos, k)] =
                    c * omega(d_.neg(d_.mul(s, k))) / std::sqrt(static_cast<double>(dval));
            }
        }
        if (keep < kDenseInternalTol) {
            throw std::runtime_error("forced measurement branch has probability zero");
        }
        double scale = 1.0 / std::sqrt(keep);
        for (auto& a : out) a *= scale;
        amp_.swap(out);
        return keep;
    }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amp_) s += std::norm(a);
        return std::sqrt(s);
    }

   private:
    void fourier_impl(size_t pos, bool inverse) {
        size_t dval = d_.value();
        std::vector<std::complex<double>> out(amp_.size(), {0.0, 0.0});
        double root = std::sqrt(static_cast<double>(dval));
        for (size_t base = 0; base < amp_.size(); ++base) {
            if (digit(base, pos) != 0) continue;
            for (Fe j = 0; j < dval; ++j) {
                std::complex<double> c{0.0, 0.0};
                for (Fe k = 0; k < dval; ++k) {
                    Fe e = d_.mul(j, k);
                    c += (inverse ? std::conj(omega(e)) : omega(e)) *
                         amp_[with_digit(base, pos, k)];
                }
                out[with_digit(base, pos, j)] = c / root;
            }
        }
        amp_.swap(out);
    }

    Modulus d_;
    size_t n_;
    std::vector<std::complex<double>> amp_;
    std::vector<size_t> strides_;
};

/// True iff s2 == e^{i theta} s1 component-wise within tol, with theta fixed
/// by the first amplitude of magnitude above tol.
inline bool equal_up_to_global_phase(const DenseState& s1, const DenseState& s2,
                                     double tol) {
    if (s1.modulus() != s2.modulus() || s1.num_qubits() != s2.num_qubits()) return false;
    const auto& a = s1.amplitudes();
    const auto& b = s2.amplitudes();
    std::complex<double> phase{1.0, 0.0};
    bool found = false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i]) > tol) {
            if (std::abs(b[i]) <= tol) return false;
            phase = b[i] / a[i];
            phase /= std::abs(phase);
            found = true;
            break;
        }
    }
    if (!found) return s2.norm() < tol;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] * phase - b[i]) > tol) return false;
    }
    return true;
}

/// Fidelity |<target|psi>|^2 of the reduced state on `groups` against the
/// product of maximally-entangled group states: each group of size 2 is a
/// Phi+ pair, larger groups are GHZ states, all over Z_d.
/// Groups hold qubit positions; they must be disjoint.
inline double group_fidelity(const DenseState& s,
                             const std::vector<std::vector<size_t>>& groups) {
    size_t n = s.num_qubits();
    std::vector<int> owner(n, -1);
    size_t in_groups = 0;
    for (size_t g = 0; g < groups.size(); ++g) {
        for (size_t q : groups[g]) {
            if (q >= n) throw std::domain_error("group qubit out of range");
            if (owner[q] != -1) throw std::domain_error("overlapping groups");
            owner[q] = static_cast<int>(g);
            ++in_groups;
        }
    }
    size_t dval = s.modulus().value();

    // Enumerate target basis terms: one value x_g in Z_d per group, amplitude
    // prod_g 1/sqrt(d). For each rest-assignment r the overlap
    // <target (x) e_r | psi> contributes |.|^2.
    size_t rest = n - in_groups;
    size_t rest_dim = 1;
    for (size_t i = 0; i < rest; ++i) rest_dim *= dval;
    size_t grp_dim = 1;
    for (size_t i = 0; i < groups.size(); ++i) grp_dim *= dval;

    std::vector<size_t> rest_positions;
    for (size_t q = 0; q < n; ++q) {
        if (owner[q] == -1) rest_positions.push_back(q);
    }

    double target_amp = 1.0;
    for (size_t g = 0; g < groups.size(); ++g) target_amp /= std::sqrt(double(dval));

    double fid = 0.0;
    for (size_t r = 0; r < rest_dim; ++r) {
        std::complex<double> inner{0.0, 0.0};
        for (size_t gx = 0; gx < grp_dim; ++gx) {
            // Build the index for this (group values, rest values) term.
            size_t index = 0;
            size_t tmp = gx;
            std::vector<Fe> gv(groups.size());
            for (size_t g = groups.size(); g-- > 0;) {
                gv[g] = static_cast<Fe>(tmp % dval);
                tmp /= dval;
            }
            for (size_t g = 0; g < groups.size(); ++g) {
                for (size_t q : groups[g]) index = s.with_digit(index, q, gv[g]);
            }
            size_t rr = r;
            for (size_t i = rest_positions.size(); i-- > 0;) {
                index = s.with_digit(index, rest_positions[i], static_cast<Fe>(rr % dval));
                rr /= dval;
            }
            inner += target_amp * s.amplitudes()[index];
        }
        fid += std::norm(inner);
    }
    return fid;
}

/// Checks that `psi` factorizes across the cut (group qubits | rest) by
/// testing all 2x2 minors against the dominant amplitude.
inline bool factors_across(const DenseState& s,
                           const std::vector<std::vector<size_t>>& groups,
                           double tol) {
    size_t n = s.num_qubits();
    std::vector<bool> in_group(n, false);
    for (const auto& g : groups) {
        for (size_t q : g) in_group[q] = true;
    }
    size_t dval = s.modulus().value();
    size_t grp_dim = 1, rest_dim = 1;
    std::vector<size_t> gpos, rpos;
    for (size_t q = 0; q < n; ++q) (in_group[q] ? gpos : rpos).push_back(q);
    for (size_t i = 0; i < gpos.size(); ++i) grp_dim *= dval;
    for (size_t i = 0; i < rpos.size(); ++i) rest_dim *= dval;
    if (rest_dim == 1 || grp_dim == 1) return true;

    auto index_of = [&](size_t g, size_t r) {
        size_t index = 0;
        size_t tmp = g;
        for (size_t i = gpos.size(); i-- > 0;) {
            index = s.with_digit(index, gpos[i], static_cast<Fe>(tmp % dval));
            tmp /= dval;
        }
        tmp = r;
        for (size_t i = rpos.size(); i-- > 0;) {
            index = s.with_digit(index, rpos[i], static_cast<Fe>(tmp % dval));
            tmp /= dval;
        }
        return index;
    };

    size_t g0 = 0, r0 = 0;
    double best = -1.0;
    for (size_t g = 0; g < grp_dim; ++g) {
        for (size_t r = 0; r < rest_dim; ++r) {
            double m = std::abs(s.amplitudes()[index_of(g, r)]);
            if (m > best) {
                best = m;
                g0 = g;
                r0 = r;
            }
        }
    }
    if (best <= tol) return false;
    std::complex<double> pivot = s.amplitudes()[index_of(g0, r0)];
    for (size_t g = 0; g < grp_dim; ++g) {
        for (size_t r = 0; r < rest_dim; ++r) {
            std::complex<double> lhs = s.amplitudes()[index_of(g, r)] * pivot;
            std::complex<double> rhs =
                s.amplitudes()[index_of(g, r0)] * s.amplitudes()[index_of(g0, r)];
            if (std::abs(lhs - rhs) > tol) return false;
        }
    }
    return true;
}

}  // namespace qlnc

#endif  // QLNC_DENSE_STATE_HPP_
