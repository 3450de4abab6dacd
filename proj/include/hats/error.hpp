/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_ERROR_HPP
#define HATS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hats {

enum class ErrorCode {
    DimensionMismatch,
    RankDeficient,
    Singular,
    LevelOutOfRange,
    NotDescendant,
    TooLargeToEnumerate,
    CapacityTooSmall,
    NoEvictable,
    EmptyBatch,
    ShapeMismatch,
    FormatViolation,
    SizeMismatch,
    MissingModel,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/** Every library failure is reported through this one exception type. */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/** Model file corruption; carries the byte offset where parsing gave up. */
class FormatViolation : public Error {
public:
    FormatViolation(std::size_t offset, const std::string& what)
        : Error(ErrorCode::FormatViolation, what + " at byte " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace hats

#endif
