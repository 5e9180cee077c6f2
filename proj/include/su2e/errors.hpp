#pragma once

#include <stdexcept>
#include <string>

namespace su2e {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pole or branch point lies inside an input enclosure.
struct DomainError : Error { using Error::Error; };
// Radius overflowed; retry at higher precision.
struct PrecisionError : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
// A Ball pivot straddles zero.
struct IndeterminatePivot : Error { using Error::Error; };
// Some enclosure straddles zero where a sign is required.
struct IndeterminateSign : Error { using Error::Error; };
struct DenominatorVanishes : Error { using Error::Error; };
struct SearchFailed : Error { using Error::Error; };
struct DomainMismatch : Error { using Error::Error; };
struct ZeroConstantTerm : Error { using Error::Error; };
struct ZeroCenter : Error { using Error::Error; };
struct StalledStep : Error { using Error::Error; };
struct ParameterOutOfRange : Error { using Error::Error; };
struct InvalidBoltParams : Error { using Error::Error; };
struct ThetaNegative : Error { using Error::Error; };
struct QuadratureTooWide : Error { using Error::Error; };
struct InflationUnjustified : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace su2e
