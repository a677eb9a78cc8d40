#ifndef RCMC_ERRORS_HPP
#define RCMC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rcmc
{

enum class ErrorKind
{
    NegativeRate,
    DetailedBalanceViolation,
    NonpositivePi,
    AsymmetricPattern,
    SingularPivot,
    OracleOutOfRange,
    NegativeDiagonal,
    SingularPrefix,
    NegativeLeaf,
    IndexOutOfRange,
    PreconditionViolation,
    IncompatibleFactor,
    DisconnectedNetwork,
    ZeroPivotColumn,
    BankInvariantViolation,
    InvalidSpec,
    ParseError,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Base of every exception thrown by the library. `kind()` identifies the
/// failed contract so callers can branch without parsing messages.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class DetailedBalanceViolation : public Error
{
public:
    DetailedBalanceViolation(int u, int v, double relative_residual);

    // 0-based states of the worst offending pair.
    int u() const noexcept { return u_; }
    int v() const noexcept { return v_; }
    double relative_residual() const noexcept { return residual_; }

private:
    int u_;
    int v_;
    double residual_;
};

class DisconnectedNetwork : public Error
{
public:
    explicit DisconnectedNetwork(std::vector<std::vector<int>> components);

    const std::vector<std::vector<int>>& components() const noexcept
    {
        return components_;
    }

private:
    std::vector<std::vector<int>> components_;
};

class ParseError : public Error
{
public:
    ParseError(std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace rcmc

#endif
