#include "rcmc/errors.hpp"

#include <sstream>

namespace rcmc
{

std::string_view to_string(ErrorKind kind)
{
    switch(kind) {
        case ErrorKind::NegativeRate: return "NegativeRate";
        case ErrorKind::DetailedBalanceViolation:
            return "DetailedBalanceViolation";
        case ErrorKind::NonpositivePi: return "NonpositivePi";
        case ErrorKind::AsymmetricPattern: return "AsymmetricPattern";
        case ErrorKind::SingularPivot: return "SingularPivot";
        case ErrorKind::OracleOutOfRange: return "OracleOutOfRange";
        case ErrorKind::NegativeDiagonal: return "NegativeDiagonal";
        case ErrorKind::SingularPrefix: return "SingularPrefix";
        case ErrorKind::NegativeLeaf: return "NegativeLeaf";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::PreconditionViolation: return "PreconditionViolation";
        case ErrorKind::IncompatibleFactor: return "IncompatibleFactor";
        case ErrorKind::DisconnectedNetwork: return "DisconnectedNetwork";
        case ErrorKind::ZeroPivotColumn: return "ZeroPivotColumn";
        case ErrorKind::BankInvariantViolation:
            return "BankInvariantViolation";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
  : std::runtime_error(std::string(to_string(kind)) + ": " + message),
    kind_(kind)
{}

namespace
{

std::string balance_message(int u, int v, double residual)
{
    std::ostringstream os;
    os << "worst pair (" << u + 1 << ", " << v + 1
       << ") has relative residual " << residual;
    return os.str();
}

std::string components_message(const std::vector<std::vector<int>>& comps)
{
    std::ostringstream os;
    os << comps.size() << " components:";
    for(const auto& comp : comps) {
        os << " {";
        for(std::size_t i = 0; i < comp.size(); ++i) {
            os << (i ? "," : "") << comp[i] + 1;
        }
        os << "}";
    }
    return os.str();
}

}  // namespace

DetailedBalanceViolation::DetailedBalanceViolation(int u,
                                                   int v,
                                                   double relative_residual)
  : Error(ErrorKind::DetailedBalanceViolation,
          balance_message(u, v, relative_residual)),
    u_(u),
    v_(v),
    residual_(relative_residual)
{}

DisconnectedNetwork::DisconnectedNetwork(
    std::vector<std::vector<int>> components)
  : Error(ErrorKind::DisconnectedNetwork, components_message(components)),
    components_(std::move(components))
{}

ParseError::ParseError(std::size_t line, const std::string& message)
  : Error(ErrorKind::ParseError,
          "line " + std::to_string(line) + ": " + message),
    line_(line)
{}

}  // namespace rcmc
