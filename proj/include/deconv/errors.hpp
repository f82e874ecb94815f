#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace deconv {

// Leading coefficient u(0) or p(l, 0) vanishes where an inverse is needed.
class SingularLeadingCoefficient : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

class SizeError : public std::length_error
{
public:
  using std::length_error::length_error;
};

// Malformed input: bad parameters, incompatible scenario, violated precondition.
class ValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A series that was expected to converge did not.
class DivergenceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace deconv
