#ifndef PADIC_ERRORS_HPP
#define PADIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace padic {

// Every throwable condition carries a stable machine-readable code; the CLI
// maps codes to exit statuses and JSON error objects.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline Error make_error(const std::string& code, const std::string& what) {
    return Error(code, what);
}

#define PADIC_DEFINE_ERROR(NAME)                                     \
    class NAME : public Error {                                      \
    public:                                                          \
        explicit NAME(const std::string& what) : Error(#NAME, what) {} \
    }

PADIC_DEFINE_ERROR(InsufficientPrecision);
PADIC_DEFINE_ERROR(NonPolynomialSeries);
PADIC_DEFINE_ERROR(NotEisenstein);
PADIC_DEFINE_ERROR(HenselFails);
PADIC_DEFINE_ERROR(NotLubinTate);
PADIC_DEFINE_ERROR(LinearStepSingular);
PADIC_DEFINE_ERROR(WindowTooShort);
PADIC_DEFINE_ERROR(WindowExhausted);
PADIC_DEFINE_ERROR(DegreeNotPositive);
PADIC_DEFINE_ERROR(LevelTooLow);
PADIC_DEFINE_ERROR(LevelRaiseRequired);
PADIC_DEFINE_ERROR(PositiveSupport);
PADIC_DEFINE_ERROR(DivisionWindowExhausted);
PADIC_DEFINE_ERROR(NotOverconvergent);
PADIC_DEFINE_ERROR(NotSolvable);
PADIC_DEFINE_ERROR(PatternViolation);
PADIC_DEFINE_ERROR(NotIntegralError);
PADIC_DEFINE_ERROR(IntegralityViolation);
PADIC_DEFINE_ERROR(ParseError);
PADIC_DEFINE_ERROR(ValidationError);
PADIC_DEFINE_ERROR(InternalError);

#undef PADIC_DEFINE_ERROR

} // namespace padic

#endif
