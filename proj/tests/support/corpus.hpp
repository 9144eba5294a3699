// Copyright 2026 The MVTO Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string_view>

namespace mvto::testing {

// Four transactions over x, y, z. T1, T2 and T3 commit; T4 is still live.
inline constexpr std::string_view kH1 =
    "r 1 x 0\n"
    "r 2 x 0\n"
    "r 1 y 0\n"
    "r 3 z 0\n"
    "w 1 x 5\n"
    "w 3 y 15\n"
    "w 2 y 10\n"
    "w 1 z 10\n"
    "c 1\n"
    "c 2\n"
    "r 4 x 5\n"
    "r 4 y 10\n"
    "w 3 z 15\n"
    "c 3\n"
    "r 4 z 10\n";

// The same schedule as a replay script, with explicit begins so that each
// transaction receives the id it has in kH1. Objects x, y, z are 1, 2, 3.
inline constexpr std::string_view kH1Script =
    "step 1 b\n"
    "step 2 b\n"
    "step 3 b\n"
    "step 4 b\n"
    "step 1 r 1\n"
    "step 2 r 1\n"
    "step 1 r 2\n"
    "step 3 r 3\n"
    "step 1 w 1 5\n"
    "step 3 w 2 15\n"
    "step 2 w 2 10\n"
    "step 1 w 3 10\n"
    "step 1 c\n"
    "step 2 c\n"
    "step 4 r 1\n"
    "step 4 r 2\n"
    "step 3 w 3 15\n"
    "step 3 c\n"
    "step 4 r 3\n";

}  // namespace mvto::testing
