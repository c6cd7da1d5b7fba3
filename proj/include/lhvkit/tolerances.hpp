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

// Single ledger of numerical tolerances. Every module reads from here so the
// thresholds cannot drift apart.

namespace lhvkit::tol {

inline constexpr double hermitian = 1e-10;      // max |M - M^dag| entry
inline constexpr double positivity = 1e-10;     // min eigenvalue >= -positivity
inline constexpr double trace_one = 1e-10;      // |tr - 1|
inline constexpr double probability_sum = 1e-10;
inline constexpr double unit_vector = 1e-10;
inline constexpr double completeness = 1e-10;   // entrywise, sum of weighted effects vs identity
inline constexpr double constraint_residual = 1e-9;  // weighted-effect combination
inline constexpr double null_space_rel = 1e-10; // Gram eigenvalue cut, relative to max
inline constexpr double response_range = 1e-10;
inline constexpr double response_normalization = 1e-9;
// Consistency is looser than the algebraic tolerances: constraint vectors
// come out of an eigensolver.
inline constexpr double consistency = 1e-8;
inline constexpr double born_extension = 1e-8;
inline constexpr double polarization_norm = 1e-10; // |s| <= 1 + this
inline constexpr double additivity = 1e-8;      // rank-1 pair vs rank-2 response
inline constexpr double tomography_residual = 1e-9;
inline constexpr double decomposition = 1e-7;   // default Frobenius residual target
inline constexpr double entangled_certificate = -1e-9; // PT eigenvalue at or below
inline constexpr double direction_match = 1e-9; // locating a direction in a POVM

inline constexpr double jacobi_off_diagonal = 1e-14;
inline constexpr int jacobi_max_sweeps = 100;

inline constexpr double chi_square_significance = 0.003;

} // namespace lhvkit::tol
