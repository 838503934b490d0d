/*
 * Copyright 2026 tabforge authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tabforge {

inline int default_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs fn(i) for i in [0, n). jobs <= 1 takes the serial reference path,
/// which is kept as the behavioural baseline the parallel path is tested
/// against. Results must be written to per-index slots; the first exception
/// is rethrown after the loop completes.
template <class Fn>
void parallel_for(std::int64_t n, int jobs, Fn&& fn) {
    if (n <= 0) return;
    if (jobs <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(tabforge_parallel_for_error)
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
#else
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
#endif
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace tabforge
