#ifndef KGSHIELD_ERRORS_HPP
#define KGSHIELD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kgshield {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidVertex : Error {
  using Error::Error;
};
struct InvalidParameter : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct UnsupportedProgram : Error {
  using Error::Error;
};
struct QueryProgramMismatch : Error {
  using Error::Error;
};
struct NotWeaklyConnected : Error {
  using Error::Error;
};

}  // namespace kgshield

#endif
