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

#include <stdexcept>
#include <string>

namespace tabforge {

enum class ErrorCode {
    invalid_matrix,
    non_tiling,
    out_of_bounds,
    dimension_mismatch,
    unpartitionable,
    malformed_markup,
    multiple_tables,
    overlapping_spans,
    param_out_of_range,
    no_valid_instruction,
    no_compatible_source,
    retry_budget_exhausted,
    ground_truth_malformed,
    unreadable_path,
    empty_corpus,
    external_client,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tabforge
