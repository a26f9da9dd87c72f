#pragma once

#include <stdexcept>
#include <string>

namespace freefront {

/// Coarse error families. The CLI maps them onto exit codes.
enum class ErrorFamily {
    Validation,  ///< bad input, regime or premise not met
    Numerical,   ///< solver failure or blow-up
    Property,    ///< an ordering/monotonicity property was violated
};

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, const std::string& what)
        : std::runtime_error(what), family_(family) {}

    ErrorFamily family() const noexcept { return family_; }

private:
    ErrorFamily family_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorFamily::Validation, what) {}
};

/// A parameter-regime inequality failed; the message names it.
struct OutOfRegime : Error {
    explicit OutOfRegime(const std::string& what) : Error(ErrorFamily::Validation, what) {}
};

struct PremiseViolated : Error {
    explicit PremiseViolated(const std::string& what) : Error(ErrorFamily::Validation, what) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(ErrorFamily::Validation, what) {}
};

struct ConfigParseError : Error {
    ConfigParseError(const std::string& what, int line, std::string field)
        : Error(ErrorFamily::Validation, what), line(line), field(std::move(field)) {}
    int line;
    std::string field;
};

struct NumericalBlowup : Error {
    NumericalBlowup(const std::string& what, double t, int node)
        : Error(ErrorFamily::Numerical, what), t(t), node(node) {}
    double t;
    int node;
};

struct StefanViolation : Error {
    StefanViolation(const std::string& what, double t, double hPrime)
        : Error(ErrorFamily::Numerical, what), t(t), hPrime(hPrime) {}
    double t;
    double hPrime;
};

struct SolverFailure : Error {
    SolverFailure(const std::string& what, double residual)
        : Error(ErrorFamily::Numerical, what), residual(residual) {}
    double residual;
};

struct BracketFailure : Error {
    explicit BracketFailure(const std::string& what) : Error(ErrorFamily::Numerical, what) {}
};

struct EstimateUnavailable : Error {
    explicit EstimateUnavailable(const std::string& what) : Error(ErrorFamily::Numerical, what) {}
};

/// Endpoint verdicts of a parameter bracket do not straddle the threshold.
struct BracketError : Error {
    explicit BracketError(const std::string& what) : Error(ErrorFamily::Validation, what) {}
};

struct PropertyViolation : Error {
    PropertyViolation(const std::string& what, double t, double x, double margin)
        : Error(ErrorFamily::Property, what), t(t), x(x), margin(margin) {}
    double t;
    double x;
    double margin;
};

}  // namespace freefront
