#ifndef STOCHELM_ERRORS_HPP
#define STOCHELM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stochelm
{

// Malformed input: bad parameters, inconsistent lengths, unreadable documents.
class InputError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A mathematical hypothesis of a bound (nontrapping, star-shapedness, k >= k0, ...)
// does not hold for the supplied data.
class HypothesisViolation : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace stochelm

#endif  // STOCHELM_ERRORS_HPP
