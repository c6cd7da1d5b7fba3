// Copyright 2026 The lhvkit Authors.
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

// Umbrella header: the whole library except the CLI (which drags in the
// argument-parsing dependency).

#include "lhvkit/complex_matrix.hpp"
#include "lhvkit/density_operator.hpp"
#include "lhvkit/eigen.hpp"
#include "lhvkit/errors.hpp"
#include "lhvkit/fixtures.hpp"
#include "lhvkit/io.hpp"
#include "lhvkit/lhv_model.hpp"
#include "lhvkit/montecarlo.hpp"
#include "lhvkit/povm.hpp"
#include "lhvkit/reconstruction.hpp"
#include "lhvkit/rng.hpp"
#include "lhvkit/separability.hpp"
#include "lhvkit/tolerances.hpp"
#include "lhvkit/vec3.hpp"
