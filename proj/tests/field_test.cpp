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

#include "qlnc/field.hpp"

#include <gtest/gtest.h>

using namespace qlnc;

TEST(Modulus, AcceptsPrimes) {
    EXPECT_EQ(Modulus(2).value(), 2u);
    EXPECT_EQ(Modulus(3).value(), 3u);
    EXPECT_EQ(Modulus(13).value(), 13u);
}

TEST(Modulus, RejectsCompositesAndSmall) {
    EXPECT_THROW(Modulus(4), std::domain_error);
    EXPECT_THROW(Modulus(1), std::domain_error);
    EXPECT_THROW(Modulus(0), std::domain_error);
    EXPECT_THROW(Modulus(15), std::domain_error);
}

TEST(Modulus, InverseExamples) {
    EXPECT_EQ(Modulus(2).inv(1), 1u);
    EXPECT_EQ(Modulus(5).inv(2), 3u);  // 2*3 = 6 = 1 mod 5
}

TEST(Modulus, InverseOfZeroThrows) {
    EXPECT_THROW(Modulus(7).inv(0), std::domain_error);
}

TEST(Modulus, InverseExhaustiveMod7) {
    Modulus d(7);
    for (Fe a = 1; a < 7; ++a) {
        EXPECT_EQ(d.mul(a, d.inv(a)), 1u);
        EXPECT_EQ(d.inv(d.inv(a)), a);
    }
}

TEST(Modulus, RingAxiomsExhaustive) {
    for (uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        Modulus d(p);
        for (Fe a = 0; a < p; ++a) {
            for (Fe b = 0; b < p; ++b) {
                EXPECT_EQ(d.add(a, b), d.add(b, a));
                EXPECT_EQ(d.mul(a, b), d.mul(b, a));
                for (Fe c = 0; c < p; ++c) {
                    EXPECT_EQ(d.add(d.add(a, b), c), d.add(a, d.add(b, c)));
                    EXPECT_EQ(d.mul(d.mul(a, b), c), d.mul(a, d.mul(b, c)));
                    EXPECT_EQ(d.mul(a, d.add(b, c)), d.add(d.mul(a, b), d.mul(a, c)));
                }
            }
        }
    }
}

TEST(Modulus, ReduceHandlesNegatives) {
    Modulus d(5);
    EXPECT_EQ(d.reduce(-1), 4u);
    EXPECT_EQ(d.reduce(-10), 0u);
    EXPECT_EQ(d.reduce(12), 2u);
}

TEST(Modulus, PowMatchesRepeatedMul) {
    Modulus d(11);
    for (Fe a = 0; a < 11; ++a) {
        Fe acc = 1;
        for (int e = 0; e < 15; ++e) {
            EXPECT_EQ(d.pow(a, e), acc);
            acc = d.mul(acc, a);
        }
    }
}
