#pragma once

#include <stdexcept>
#include <string>

namespace rlbrush {

// Every failure raised by the library derives from Error so callers (the
// service, the CLI) can map them to a response in one place.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define RLBRUSH_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                         \
      public:                                                           \
        using Error::Error;                                             \
        const char* kind() const noexcept override { return #Name; }    \
    }

RLBRUSH_DEFINE_ERROR(FormatError);
RLBRUSH_DEFINE_ERROR(DimensionError);
RLBRUSH_DEFINE_ERROR(BoundsError);
RLBRUSH_DEFINE_ERROR(StaleDiffError);
RLBRUSH_DEFINE_ERROR(ActionError);
RLBRUSH_DEFINE_ERROR(ShapeError);
RLBRUSH_DEFINE_ERROR(ConfigError);
RLBRUSH_DEFINE_ERROR(VersionError);
RLBRUSH_DEFINE_ERROR(InconsistentBaseError);
RLBRUSH_DEFINE_ERROR(ClockError);
RLBRUSH_DEFINE_ERROR(EmptyError);
RLBRUSH_DEFINE_ERROR(UndefinedError);
RLBRUSH_DEFINE_ERROR(SessionError);

#undef RLBRUSH_DEFINE_ERROR

} // namespace rlbrush
