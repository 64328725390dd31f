#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rankfuse {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validation of recommendation sets.
struct DuplicateItemError : Error { using Error::Error; };
struct TooFewSourcesError : Error { using Error::Error; };
struct UserMismatchError : Error { using Error::Error; };
struct EmptyListError : Error { using Error::Error; };

// Sampling.
struct EmptyPoolError : Error { using Error::Error; };
struct ZeroPopulationError : Error { using Error::Error; };

// Evaluation.
struct IdenticalHoldoutError : Error { using Error::Error; };
struct EmptyUserSetError : Error { using Error::Error; };

// Recommenders.
struct ColdUserError : Error { using Error::Error; };

// Data loading.
struct FileAccessError : Error { using Error::Error; };
struct EmptyFileError : Error { using Error::Error; };
struct DuplicateUserError : Error { using Error::Error; };
struct DuplicateItemInLineError : Error { using Error::Error; };

struct MalformedLineError : Error {
    MalformedLineError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

// Tuning / benchmarking.
struct NoFeasibleNError : Error { using Error::Error; };
struct MissingBaselineError : Error { using Error::Error; };

}  // namespace rankfuse
