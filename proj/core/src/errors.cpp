#include "ssakit/errors.hpp"

namespace ssa {

FormatError::FormatError(std::size_t line, const std::string& what)
    : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

ConvergenceError::ConvergenceError(std::size_t converged, std::size_t requested,
                                   const std::string& what)
    : NumericalError(what + " (" + std::to_string(converged) + " of " +
                     std::to_string(requested) + " triples converged)"),
      converged_(converged),
      requested_(requested) {}

VerticalityError::VerticalityError(double nu2, const std::string& what)
    : NumericalError(what), nu2_(nu2) {}

}  // namespace ssa
