#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qeig {

/// Failure categories raised by the library. Each maps to a stable
/// machine-readable reason string (see reason()).
enum class ErrorCode {
    ZeroQuaternion,
    NotUnit,
    NotSameEigenclass,
    DimensionMismatch,
    OddDimension,
    NonSquare,
    SingularMatrix,
    NoConvergence,
    DimensionTooLarge,
    UnpairedEigenvalue,
    NotDiagonalizable,
    SingularEigenvectorMatrix,
    NotAntiHermitian,
    NotCommuting,
    NotSimultaneouslyDiagonalizable,
    NoRootsFound,
    NotTwoByTwo,
    Unsupported,
};

constexpr std::string_view reason(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ZeroQuaternion: return "zero-quaternion";
    case ErrorCode::NotUnit: return "not-unit";
    case ErrorCode::NotSameEigenclass: return "not-same-eigenclass";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::OddDimension: return "odd-dimension";
    case ErrorCode::NonSquare: return "non-square";
    case ErrorCode::SingularMatrix: return "singular-matrix";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::DimensionTooLarge: return "dimension-too-large";
    case ErrorCode::UnpairedEigenvalue: return "unpaired-eigenvalue";
    case ErrorCode::NotDiagonalizable: return "not-diagonalizable";
    case ErrorCode::SingularEigenvectorMatrix: return "singular-eigenvector-matrix";
    case ErrorCode::NotAntiHermitian: return "not-anti-hermitian";
    case ErrorCode::NotCommuting: return "not-commuting";
    case ErrorCode::NotSimultaneouslyDiagonalizable: return "not-simultaneously-diagonalizable";
    case ErrorCode::NoRootsFound: return "no-roots-found";
    case ErrorCode::NotTwoByTwo: return "not-two-by-two";
    case ErrorCode::Unsupported: return "unsupported";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view reason() const noexcept { return qeig::reason(code_); }

private:
    ErrorCode code_;
};

}  // namespace qeig
