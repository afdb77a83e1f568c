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

#ifndef QLNC_QLNC_HPP_
#define QLNC_QLNC_HPP_

#include "qlnc/bench.hpp"
#include "qlnc/circuit.hpp"
#include "qlnc/coloring.hpp"
#include "qlnc/compiler.hpp"
#include "qlnc/dense_state.hpp"
#include "qlnc/examples.hpp"
#include "qlnc/field.hpp"
#include "qlnc/io.hpp"
#include "qlnc/network.hpp"
#include "qlnc/oracle.hpp"
#include "qlnc/outcome.hpp"
#include "qlnc/stabref.hpp"
#include "qlnc/tableau.hpp"

#endif  // QLNC_QLNC_HPP_
