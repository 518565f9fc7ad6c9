#pragma once
#include <stdexcept>
#include <string>

namespace fracdim {

/// Evaluation requested at a point where the measure or operator is singular.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// A dimension parameter violates alpha > 0 (or the D <= 3 constraint).
struct InvalidDimension : std::domain_error {
    explicit InvalidDimension(const std::string& msg) : std::domain_error(msg) {}
};

struct NegativeRadius : std::domain_error {
    explicit NegativeRadius(const std::string& msg) : std::domain_error(msg) {}
};

/// Panel-refinement disagreement stayed above the requested tolerance.
struct ToleranceNotMet : std::runtime_error {
    ToleranceNotMet(const std::string& msg, double disagreement_)
        : std::runtime_error(msg), disagreement(disagreement_) {}
    double disagreement;
};

/// The 2x2 boundary-condition system is numerically rank-deficient.
struct SingularBoundarySystem : std::runtime_error {
    SingularBoundarySystem(const std::string& msg, double cond_)
        : std::runtime_error(msg), condition_number(cond_) {}
    double condition_number;
};

struct GridTooCoarse : std::runtime_error {
    GridTooCoarse(const std::string& msg, double error_estimate_)
        : std::runtime_error(msg), error_estimate(error_estimate_) {}
    double error_estimate;
};

struct RootBracketFailure : std::runtime_error {
    explicit RootBracketFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct StabilityViolation : std::runtime_error {
    explicit StabilityViolation(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fracdim
