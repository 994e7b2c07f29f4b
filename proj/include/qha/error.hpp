#pragma once

#include <stdexcept>
#include <string>

namespace qha {

// Every failure raised by the library derives from Error so that callers
// (the CLI in particular) can map the whole family onto one exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define QHA_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                         \
    public:                                                             \
        using Error::Error;                                             \
        const char* kind() const noexcept override { return #Name; }   \
    };

QHA_DEFINE_ERROR(InvalidArgument)
QHA_DEFINE_ERROR(RadiusExceeded)
QHA_DEFINE_ERROR(QuadratureOrderTooLow)
QHA_DEFINE_ERROR(SequenceTooShort)
QHA_DEFINE_ERROR(TailTooHeavy)
QHA_DEFINE_ERROR(NotIntegrable)
QHA_DEFINE_ERROR(OutOfRange)
QHA_DEFINE_ERROR(ShiftTooLarge)
QHA_DEFINE_ERROR(UnboundedSymbol)
QHA_DEFINE_ERROR(NotDifferentiable)

#undef QHA_DEFINE_ERROR

class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column)
        : Error(message + " at line " + std::to_string(line) + ", column " +
                std::to_string(column)),
          line_(line),
          column_(column) {}

    const char* kind() const noexcept override { return "ParseError"; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace qha
