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

#ifndef QLNC_OUTCOME_HPP_
#define QLNC_OUTCOME_HPP_

#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "qlnc/field.hpp"

namespace qlnc {

/// Supplier of measurement outcomes. Simulators never roll their own dice;
/// every "uniformly at random" outcome is drawn here, which makes any branch
/// reproducible (seeded mode) or directly addressable (forced modes).
///
/// Forced-by-record keys outcomes by measurement record id instead of by
/// consumption order, so a branch label stays meaningful when operations
/// within a time step are reordered.
class OutcomeSource {
   public:
    static OutcomeSource seeded(uint64_t seed) {
        OutcomeSource s;
        s.mode_ = Mode::kSeeded;
        s.rng_.seed(seed);
        return s;
    }

    static OutcomeSource forced(std::vector<Fe> outcomes) {
        OutcomeSource s;
        s.mode_ = Mode::kForcedSeq;
        s.seq_ = std::move(outcomes);
        return s;
    }

    static OutcomeSource forced_by_record(std::map<int, Fe> outcomes) {
        OutcomeSource s;
        s.mode_ = Mode::kForcedByRecord;
        s.by_record_ = std::move(outcomes);
        return s;
    }

    /// Draw the next outcome in Z_d. `record` identifies the measurement for
    /// keyed mode; sequence and seeded modes ignore it.
    Fe draw(const Modulus& d, int record = -1) {
        ++consumed_;
        switch (mode_) {
            case Mode::kSeeded:
                return static_cast<Fe>(rng_() % d.value());
            case Mode::kForcedSeq: {
                if (next_ >= seq_.size()) {
                    throw std::runtime_error("forced outcome sequence exhausted");
                }
                Fe v = seq_[next_++];
                if (v >= d.value()) throw std::runtime_error("forced outcome out of range");
                return v;
            }
            case Mode::kForcedByRecord: {
                auto it = by_record_.find(record);
                if (it == by_record_.end()) {
                    throw std::runtime_error("no forced outcome for record " +
                                             std::to_string(record));
                }
                if (it->second >= d.value()) {
                    throw std::runtime_error("forced outcome out of range");
                }
                return it->second;
            }
        }
        throw std::logic_error("unreachable");
    }

    size_t consumed() const { return consumed_; }

   private:
    enum class Mode { kSeeded, kForcedSeq, kForcedByRecord };

    OutcomeSource() = default;

    Mode mode_ = Mode::kSeeded;
    std::mt19937_64 rng_;
    std::vector<Fe> seq_;
    size_t next_ = 0;
    std::map<int, Fe> by_record_;
    size_t consumed_ = 0;
};

}  // namespace qlnc

#endif  // QLNC_OUTCOME_HPP_
