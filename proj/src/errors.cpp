#include "fjmm/errors.hpp"

#include <sstream>

namespace fjmm {

NormalizationError::NormalizationError(int node, const std::string& what)
    : Error(what), node_(node) {}

namespace {

std::string bracket_message(double lower, double upper, long iterations) {
  std::ostringstream os;
  os.precision(15);
  os << "power iteration did not converge after " << iterations
     << " iterations; spectral radius bracketed in [" << lower << ", " << upper << "]";
  return os.str();
}

}  // namespace

AccuracyError::AccuracyError(double lower, double upper, long iterations)
    : Error(bracket_message(lower, upper, iterations)),
      lower_(lower),
      upper_(upper),
      iterations_(iterations) {}

}  // namespace fjmm
