#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace willmore {

enum class ErrorKind {
    DegenerateLattice,
    PoleProximity,
    InvalidInitialValue,
    NoSolutionOnSegment,
    InvalidX0,
    TargetOutOfRange,
    WrongDiscriminant,
    BranchPoint,
    ChartSingularity,
    IntegrationFailure,
    ProfileCrossesBoundary,
    KindMismatch,
    NonSphericalCase,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
        case ErrorKind::DegenerateLattice: return "DegenerateLattice";
        case ErrorKind::PoleProximity: return "PoleProximity";
        case ErrorKind::InvalidInitialValue: return "InvalidInitialValue";
        case ErrorKind::NoSolutionOnSegment: return "NoSolutionOnSegment";
        case ErrorKind::InvalidX0: return "InvalidX0";
        case ErrorKind::TargetOutOfRange: return "TargetOutOfRange";
        case ErrorKind::WrongDiscriminant: return "WrongDiscriminant";
        case ErrorKind::BranchPoint: return "BranchPoint";
        case ErrorKind::ChartSingularity: return "ChartSingularity";
        case ErrorKind::IntegrationFailure: return "IntegrationFailure";
        case ErrorKind::ProfileCrossesBoundary: return "ProfileCrossesBoundary";
        case ErrorKind::KindMismatch: return "KindMismatch";
        case ErrorKind::NonSphericalCase: return "NonSphericalCase";
    }
    return "Unknown";
}

/// Numerical or domain failure raised by the library. The kind is stable and
/// meant for programmatic dispatch; the message is for humans.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind)
    {
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace willmore
