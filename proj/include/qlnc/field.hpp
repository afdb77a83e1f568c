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

#ifndef QLNC_FIELD_HPP_
#define QLNC_FIELD_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qlnc {

/// A field element in [0, d). Values are kept reduced by routing all
/// arithmetic through Modulus.
using Fe = uint32_t;

inline bool is_prime(uint64_t v) {
    if (v < 2) return false;
    if (v < 4) return true;
    if (v % 2 == 0) return false;
    for (uint64_t f = 3; f * f <= v; f += 2) {
        if (v % f == 0) return false;
    }
    return true;
}

/// Arithmetic modulo a prime d. Construction is the primality gate: every
/// other module carries a Modulus and never re-checks.
class Modulus {
   public:
    explicit Modulus(uint32_t d) : d_(d) {
        if (d < 2 || !is_prime(d)) {
            throw std::domain_error("dimension must be prime, got " + std::to_string(d));
        }
    }

    uint32_t value() const { return d_; }

    Fe reduce(int64_t x) const {
        int64_t r = x % static_cast<int64_t>(d_);
        return static_cast<Fe>(r < 0 ? r + d_ : r);
    }

    Fe add(Fe a, Fe b) const { return (a + b) % d_; }
    Fe sub(Fe a, Fe b) const { return (a + d_ - b) % d_; }
    Fe mul(Fe a, Fe b) const {
        return static_cast<Fe>((static_cast<uint64_t>(a) * b) % d_);
    }
    Fe neg(Fe a) const { return a == 0 ? 0 : d_ - a; }

    Fe pow(Fe a, uint64_t e) const {
        uint64_t base = a % d_;
        uint64_t acc = 1;
        while (e) {
            if (e & 1) acc = (acc * base) % d_;
            base = (base * base) % d_;
            e >>= 1;
        }
        return static_cast<Fe>(acc);
    }

    // Fermat inverse; d is prime so every non-zero element has one.
    Fe inv(Fe a) const {
        if (a % d_ == 0) throw std::domain_error("no inverse of zero");
        return pow(a % d_, d_ - 2);
    }

    bool operator==(const Modulus& other) const { return d_ == other.d_; }
    bool operator!=(const Modulus& other) const { return d_ != other.d_; }

   private:
    uint32_t d_;
};

}  // namespace qlnc

#endif  // QLNC_FIELD_HPP_
