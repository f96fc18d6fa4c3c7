#include "gompcert/errors.hpp"

#include <sstream>

namespace gompcert {

ZeroColumn::ZeroColumn(std::size_t column)
    : Error(ErrorClass::kValidation,
            "column " + std::to_string(column) + " has (near-)zero norm"),
      column_(column) {}

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& detail)
    : Error(ErrorClass::kValidation,
            "parse error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + detail),
      line_(line),
      column_(column) {}

namespace {
std::string bound_message(double delta, double bound) {
  std::ostringstream os;
  os.precision(17);
  os << "RIC " << delta << " is not below the sharp bound " << bound;
  return os.str();
}
}  // namespace

BoundViolated::BoundViolated(double delta, double bound)
    : Error(ErrorClass::kValidation, bound_message(delta, bound)) {}

SpecError::SpecError(const std::string& field, const std::string& detail)
    : Error(ErrorClass::kValidation, "invalid field '" + field + "': " + detail),
      field_(field) {}

NotSymmetric::NotSymmetric(double asymmetry)
    : Error(ErrorClass::kNumerical,
            "matrix is not symmetric (max asymmetry " +
                std::to_string(asymmetry) + ")") {}

NoConvergence::NoConvergence(int sweeps)
    : Error(ErrorClass::kNumerical,
            "Jacobi iteration did not converge after " +
                std::to_string(sweeps) + " sweeps") {}

TooManySubsets::TooManySubsets(std::size_t n, std::size_t order, double limit)
    : Error(ErrorClass::kGuard,
            "C(" + std::to_string(n) + ", " + std::to_string(order) +
                ") exceeds the enumeration limit of " +
                std::to_string(static_cast<long long>(limit)) + " subsets") {}

}  // namespace gompcert
