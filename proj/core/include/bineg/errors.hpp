#pragma once

#include <stdexcept>
#include <string>

namespace bineg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHermitianInput : Error {
    using Error::Error;
};
struct NotPSD : Error {
    using Error::Error;
};
struct NotNormalizable : Error {
    using Error::Error;
};
struct InvalidProbabilityVector : Error {
    using Error::Error;
};
struct DegenerateNegativeSpectrum : Error {
    using Error::Error;
};
struct NotEntangled : Error {
    using Error::Error;
};
struct FullRankInput : Error {
    using Error::Error;
};
struct RankAlready3 : Error {
    using Error::Error;
};
struct P0TooLarge : Error {
    using Error::Error;
};
struct NonConvergent : Error {
    using Error::Error;
};
struct DegeneratePlane : Error {
    using Error::Error;
};

// Carries the first broken invariant of a certificate build together with
// the margins observed at the point of failure.
struct CertificateFailure : Error {
    explicit CertificateFailure(const std::string& what, std::string invariant_name = {})
        : Error(what), invariant(std::move(invariant_name)) {}
    std::string invariant;
};

} // namespace bineg
