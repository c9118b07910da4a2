#pragma once

#include <stdexcept>
#include <string>

namespace rigidchern {

/// Base class of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define RIGIDCHERN_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}   \
    }

RIGIDCHERN_DEFINE_ERROR(InvalidArgument);
RIGIDCHERN_DEFINE_ERROR(ValuationError);
RIGIDCHERN_DEFINE_ERROR(PrecisionExhausted);
RIGIDCHERN_DEFINE_ERROR(UnsupportedSpace);
RIGIDCHERN_DEFINE_ERROR(WindowOverflow);
RIGIDCHERN_DEFINE_ERROR(NotAUnit);
RIGIDCHERN_DEFINE_ERROR(NotClosed);
RIGIDCHERN_DEFINE_ERROR(NotInSpan);
RIGIDCHERN_DEFINE_ERROR(WindowTooSmall);
RIGIDCHERN_DEFINE_ERROR(GaugeMismatch);

#undef RIGIDCHERN_DEFINE_ERROR

} // namespace rigidchern
