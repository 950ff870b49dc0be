#pragma once

#include <stdexcept>
#include <string>

namespace kerrcat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct DivergentSeries : Error {
  using Error::Error;
};

struct DegenerateState : Error {
  using Error::Error;
};

struct UnderResolvedGrid : Error {
  using Error::Error;
};

struct SigmaOutOfRange : Error {
  using Error::Error;
};

struct UnsupportedSelection : Error {
  using Error::Error;
};

struct WrongKappa : Error {
  using Error::Error;
};

struct CacheError : Error {
  using Error::Error;
};

}  // namespace kerrcat
