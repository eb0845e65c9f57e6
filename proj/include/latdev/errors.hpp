#ifndef LATDEV_ERRORS_HPP
#define LATDEV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace latdev {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural condition on the model failed machine validation.
struct ConditionViolated : Error {
    std::string condition;
    ConditionViolated(std::string cond, const std::string& msg)
        : Error("condition violated [" + cond + "]: " + msg), condition(std::move(cond)) {}
};

// Operands live on different windows / grids, or an index is out of range.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// The explicit scheme produced a non-finite state.
struct SimulationBlowup : Error {
    long step;
    SimulationBlowup(long step_index, const std::string& msg)
        : Error("simulation blowup at step " + std::to_string(step_index) + ": " + msg),
          step(step_index) {}
};

// A deterministic solve left the configured stability ball.
struct StepUnstable : Error {
    long step;
    StepUnstable(long step_index, const std::string& msg)
        : Error("unstable step " + std::to_string(step_index) + ": " + msg), step(step_index) {}
};

// Target path does not start at the prescribed initial state.
struct TargetMismatch : Error {
    explicit TargetMismatch(const std::string& msg) : Error(msg) {}
};

// The closed-form control oracle was called on a model outside its menu.
struct OraclePreconditionViolated : Error {
    explicit OraclePreconditionViolated(const std::string& msg) : Error(msg) {}
};

// Configuration file could not be parsed or failed field validation.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace latdev

#endif
