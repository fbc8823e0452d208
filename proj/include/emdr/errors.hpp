#pragma once

#include <stdexcept>
#include <string>

namespace emdr {

// Error category drives the CLI exit code (2 config, 3 data, 4 numerical).
enum class ErrorKind { Config, Data, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& code, const std::string& what)
        : std::runtime_error(code + ": " + what), kind_(kind), code_(code) {}

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

#define EMDR_DEFINE_ERROR(Name, Kind)                                  \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& what)                         \
            : Error(ErrorKind::Kind, #Name, what) {}                   \
    }

EMDR_DEFINE_ERROR(SeriesTooShort, Data);
EMDR_DEFINE_ERROR(NonFiniteInput, Data);
EMDR_DEFINE_ERROR(ChannelLengthMismatch, Data);
EMDR_DEFINE_ERROR(MissingDateLabel, Data);
EMDR_DEFINE_ERROR(ParseError, Data);
EMDR_DEFINE_ERROR(DateGap, Data);
EMDR_DEFINE_ERROR(TooFewRows, Data);

EMDR_DEFINE_ERROR(InsufficientExtrema, Numeric);
EMDR_DEFINE_ERROR(TooFewPeaks, Numeric);
EMDR_DEFINE_ERROR(TooFewExtrema, Numeric);
EMDR_DEFINE_ERROR(BadDimension, Numeric);
EMDR_DEFINE_ERROR(AllZeroCorrelation, Numeric);
EMDR_DEFINE_ERROR(ZeroVarianceResponse, Numeric);
EMDR_DEFINE_ERROR(DegenerateSeries, Numeric);
EMDR_DEFINE_ERROR(DesignMismatch, Numeric);
EMDR_DEFINE_ERROR(BadBlockLength, Numeric);
EMDR_DEFINE_ERROR(NoConvergence, Numeric);

EMDR_DEFINE_ERROR(ConfigError, Config);

#undef EMDR_DEFINE_ERROR

} // namespace emdr
