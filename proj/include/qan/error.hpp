#pragma once

#include <stdexcept>
#include <string>

namespace qan {

enum class ErrorCode {
    InvalidSpec,
    CosetCapExceeded,
    CapExceeded,
    NotGenerating,
    NotProperNEC,
    NonexistentSignature,
    NonIntegralGenus,
    BudgetExceeded,
    InconsistentConstraint,
    MixedInputs,
    MoveNotAutomorphism,
    WrongSignatureShape,
    WitnessFails,
    NotConformalAction,
    MissingSubgroupStructure,
    UnsupportedGenus,
    EmbeddingFails,
    NoSolution,
    NotTransitive,
    NoActionFound,
    ParseError,
    UsageError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace qan
