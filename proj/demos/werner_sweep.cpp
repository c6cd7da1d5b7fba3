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

// Sweep the Werner family p * singlet + (1 - p) * I/4 across the
// separability boundary: print the partial-transpose minimum eigenvalue and
// the verdict at each step, then locate the zero crossing by bisection.

#include <cstdio>

#include "lhvkit/lhvkit.hpp"

int main() {
    using namespace lhvkit;

    std::printf("%6s  %14s  %s\n", "p", "min PT eig", "verdict");
    SearchParams params;
    params.restarts = 8; // light search, demo scale
    params.seed = 2026;
    for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        const DensityOperator rho = werner_state(p);
        const double pt = ppt_min_eigenvalue(rho);
        const LocalityVerdict verdict = locality_verdict(rho, params);
        std::printf("%6.2f  %14.6e  %s\n", p, pt, to_string(verdict.kind));
    }

    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (ppt_min_eigenvalue(werner_state(mid)) > 0.0 ? lo : hi) = mid;
    }
    std::printf("\nPT eigenvalue crosses zero at p = %.9f\n", 0.5 * (lo + hi));
    return 0;
}
