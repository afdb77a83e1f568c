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

#ifndef QLNC_ORACLE_HPP_
#define QLNC_ORACLE_HPP_

#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qlnc/circuit.hpp"
#include "qlnc/dense_state.hpp"

namespace qlnc {

inline constexpr uint64_t kDenseDimCap = uint64_t(1) << 22;
inline constexpr double kCrossEngineTol = 1e-9;

/// Dense state-vector back end. Applies each operation as its literal
/// unitary or projector; forced measurement branches of probability zero
/// are an error, not a silent renormalization.
class DenseEngine : public SimEngine {
   public:
    void init(const Modulus& d, const std::vector<std::pair<int, Prep>>& preps) override {
        uint64_t dim = 1;
        for (size_t i = 0; i < preps.size(); ++i) {
            dim *= d.value();
            if (dim > kDenseDimCap) throw std::runtime_error("dense state too large");
        }
        pos_.clear();
        std::vector<std::pair<int, Prep>> sorted = preps;
        std::sort(sorted.begin(), sorted.end());
        for (size_t i = 0; i < sorted.size(); ++i) pos_[sorted[i].first] = i;
        state_ = std::make_unique<DenseState>(d, sorted.size());
        for (const auto& [label, kind] : sorted) {
            if (kind == Prep::Plus) state_->apply_fourier(pos_.at(label));
        }
    }

    void apply_x(int q, Fe e) override { state_->apply_x(pos_.at(q), e); }
    void apply_z(int q, Fe e) override { state_->apply_z(pos_.at(q), e); }
    void apply_cnot(int c, int t, Fe reps) override {
        state_->apply_add(pos_.at(c), pos_.at(t), reps);
    }
    void measure_x(int q, Fe outcome) override { state_->measure_x(pos_.at(q), outcome); }
    void measure_z(int q, Fe outcome) override { state_->measure_z(pos_.at(q), outcome); }

    void reset_from_constant(int q, Fe c, Prep target) override {
        size_t p = pos_.at(q);
        state_->measure_z(p, c);  // probability 1; asserts the planner's claim
        if (c != 0) state_->apply_x(p, state_->modulus().neg(c));
        if (target == Prep::Plus) state_->apply_fourier(p);
    }

    void reset_from_plus(int q, Fe phase, Prep target) override {
        size_t p = pos_.at(q);
        const Modulus& d = state_->modulus();
        state_->measure_x(p, d.neg(phase));  // Z^phase |+>, probability 1
        if (phase != 0) state_->apply_z(p, d.neg(phase));
        if (target == Prep::Zero) state_->apply_fourier_inv(p);
    }

    const DenseState& state() const { return *state_; }
    size_t position(int label) const { return pos_.at(label); }

    /// Positions for a list of labels (for group_fidelity and friends).
    std::vector<std::vector<size_t>> positions(const std::vector<std::vector<int>>& groups)
        const {
        std::vector<std::vector<size_t>> out;
        for (const auto& g : groups) {
            std::vector<size_t> row;
            for (int l : g) row.push_back(pos_.at(l));
            out.push_back(row);
        }
        return out;
    }

   private:
    std::unique_ptr<DenseState> state_;
    std::map<int, size_t> pos_;
};

struct DenseExecution {
    DenseState state;
    ExecutionResult result;
    std::map<int, size_t> positions;
};

/// Run the circuit against the dense oracle (with the parity tableau as the
/// classical controller, as always). Branches follow `src`.
inline DenseExecution dense_execute(const QlncCircuit& c, OutcomeSource& src) {
    DenseEngine engine;
    ExecutionResult res = execute(c, src, &engine);
    std::map<int, size_t> pos;
    for (int l : res.tableau.labels()) pos[l] = engine.position(l);
    return {engine.state(), std::move(res), std::move(pos)};
}

}  // namespace qlnc

#endif  // QLNC_ORACLE_HPP_
