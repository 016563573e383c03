#pragma once

#include <stdexcept>
#include <string>

namespace curvedim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct DegenerateCurve : Error {
    using Error::Error;
};
struct IndexError : Error {
    using Error::Error;
};
struct BadIndices : Error {
    using Error::Error;
};
struct InvalidSequence : Error {
    using Error::Error;
};
struct CapExceeded : Error {
    using Error::Error;
};
struct ParamOutOfRange : Error {
    using Error::Error;
};
struct TooFewCurves : Error {
    using Error::Error;
};
struct CandidateBudgetExceeded : Error {
    using Error::Error;
};
struct PreconditionFailed : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct Infeasible : Error {
    using Error::Error;
};

}  // namespace curvedim
