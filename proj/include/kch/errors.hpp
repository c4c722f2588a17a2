#pragma once

#include <stdexcept>
#include <string>

namespace kch {

/// Failure classes map onto CLI exit codes (config=2, compatibility=3, numerics=4).
enum class FailureClass { Config = 2, Compatibility = 3, Numerics = 4 };

class Error : public std::runtime_error {
public:
    Error(FailureClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    FailureClass failure_class() const noexcept { return cls_; }
    int exit_code() const noexcept { return static_cast<int>(cls_); }

private:
    FailureClass cls_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(FailureClass::Config, what) {}
};

class CompatibilityError : public Error {
public:
    explicit CompatibilityError(const std::string& what) : Error(FailureClass::Compatibility, what) {}
};

class NumericsError : public Error {
public:
    explicit NumericsError(const std::string& what) : Error(FailureClass::Numerics, what) {}
};

/// J = d3 psi dropped below the admissible floor somewhere in the channel.
class NondegeneracyError : public NumericsError {
public:
    NondegeneracyError(const std::string& what, int i, int j, int k, double value)
        : NumericsError(what), i_(i), j_(j), k_(k), value_(value) {}
    int i() const noexcept { return i_; }
    int j() const noexcept { return j_; }
    int k() const noexcept { return k_; }
    double value() const noexcept { return value_; }

private:
    int i_, j_, k_;
    double value_;
};

/// Geometry left the small-perturbation regime (|E-I|, |F-I| or |J-1| above epsilon).
class SmallnessError : public NumericsError {
public:
    using NumericsError::NumericsError;
};

class CflError : public NumericsError {
public:
    CflError(const std::string& what, double cfl, double suggested_dt)
        : NumericsError(what), cfl_(cfl), suggested_dt_(suggested_dt) {}
    double cfl() const noexcept { return cfl_; }
    double suggested_dt() const noexcept { return suggested_dt_; }

private:
    double cfl_;
    double suggested_dt_;
};

/// An iteration (pressure fixed point, projection, Picard) hit its cap.
class ConvergenceError : public NumericsError {
public:
    ConvergenceError(const std::string& what, double ratio) : NumericsError(what), ratio_(ratio) {}
    double contraction_ratio() const noexcept { return ratio_; }

private:
    double ratio_;
};

}  // namespace kch
