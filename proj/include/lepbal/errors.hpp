#pragma once

#include <stdexcept>
#include <string>

namespace lepbal {

// Parameter validation failure; `constraint` names the first violated inequality.
struct ConstraintViolation : std::invalid_argument {
    explicit ConstraintViolation(const std::string& constraint_name)
        : std::invalid_argument("constraint violated: " + constraint_name),
          constraint(constraint_name) {}
    std::string constraint;
};

struct DegenerateDimension : std::invalid_argument {
    DegenerateDimension() : std::invalid_argument("k_max must be positive") {}
};

struct LevelOutOfRange : std::out_of_range {
    explicit LevelOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

struct GridTooCoarse : std::invalid_argument {
    explicit GridTooCoarse(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroNoiseBehavior : std::runtime_error {
    explicit ZeroNoiseBehavior(int level)
        : std::runtime_error("noise behavior vanishes at level " + std::to_string(level)) {}
};

struct NoBalancePoint : std::runtime_error {
    NoBalancePoint() : std::runtime_error("no level satisfies B(n) <= kappa") {}
};

struct NoFastPoint : std::runtime_error {
    NoFastPoint() : std::runtime_error("no level satisfies b(n) < tau") {}
};

struct PreconditionViolated : std::invalid_argument {
    explicit PreconditionViolated(const std::string& what) : std::invalid_argument(what) {}
};

struct IoFailure : std::runtime_error {
    explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lepbal
