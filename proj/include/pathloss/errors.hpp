#pragma once

#include <stdexcept>
#include <string>

namespace pathloss {

// Base of all library errors. `name()` is the stable machine-readable error
// class; the CLI maps the category subclasses to exit codes (config=2,
// data=3, compute=4).
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& msg)
        : std::runtime_error(name + ": " + msg), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ConfigError : public Error {
public:
    using Error::Error;
    explicit ConfigError(const std::string& msg) : Error("ConfigError", msg) {}
};

class DataError : public Error {
public:
    using Error::Error;
    explicit DataError(const std::string& msg) : Error("DataError", msg) {}
};

class ComputeError : public Error {
public:
    using Error::Error;
    explicit ComputeError(const std::string& msg) : Error("ComputeError", msg) {}
};

#define PATHLOSS_DEFINE_ERROR(NAME, CATEGORY)                                  \
    class NAME : public CATEGORY {                                             \
    public:                                                                    \
        explicit NAME(const std::string& msg) : CATEGORY(#NAME, msg) {}        \
    }

// geodesy
PATHLOSS_DEFINE_ERROR(OutOfProjectionRange, ComputeError);
PATHLOSS_DEFINE_ERROR(MixedOrigins, ComputeError);
PATHLOSS_DEFINE_ERROR(CoincidentPoints, ComputeError);
PATHLOSS_DEFINE_ERROR(ZeroDistance, ComputeError);

// raster
PATHLOSS_DEFINE_ERROR(MalformedHeader, DataError);
PATHLOSS_DEFINE_ERROR(RowLengthMismatch, DataError);
PATHLOSS_DEFINE_ERROR(NonNumericCell, DataError);
PATHLOSS_DEFINE_ERROR(OutOfExtent, ComputeError);
PATHLOSS_DEFINE_ERROR(NoDataNeighborhood, ComputeError);
PATHLOSS_DEFINE_ERROR(ZeroLengthPath, ComputeError);
PATHLOSS_DEFINE_ERROR(EmptyNeighborhood, ComputeError);
PATHLOSS_DEFINE_ERROR(GridMismatch, DataError);

// diffraction
PATHLOSS_DEFINE_ERROR(NonPositiveGeometry, ComputeError);
PATHLOSS_DEFINE_ERROR(DegenerateProfile, ComputeError);

// empirical
PATHLOSS_DEFINE_ERROR(UnsupportedModel, ConfigError);

// reference
PATHLOSS_DEFINE_ERROR(InsufficientReferencePoints, ComputeError);
PATHLOSS_DEFINE_ERROR(BaselineMismatch, ComputeError);
PATHLOSS_DEFINE_ERROR(UnknownModelBaseline, ComputeError);
PATHLOSS_DEFINE_ERROR(UnknownEarfcn, DataError);

// simulator
PATHLOSS_DEFINE_ERROR(EmptyGrid, ComputeError);

// augment
PATHLOSS_DEFINE_ERROR(TooFewSamples, ComputeError);
PATHLOSS_DEFINE_ERROR(InvalidK, ConfigError);

// learner
PATHLOSS_DEFINE_ERROR(NonFiniteFeature, ComputeError);
PATHLOSS_DEFINE_ERROR(DimensionMismatch, ComputeError);
PATHLOSS_DEFINE_ERROR(VersionMismatch, DataError);
PATHLOSS_DEFINE_ERROR(CorruptModel, DataError);

// ensemble / evaluation
PATHLOSS_DEFINE_ERROR(EmptyValidation, ComputeError);
PATHLOSS_DEFINE_ERROR(EmptyInput, ComputeError);
PATHLOSS_DEFINE_ERROR(LengthMismatch, ComputeError);
PATHLOSS_DEFINE_ERROR(MissingDataset, DataError);

#undef PATHLOSS_DEFINE_ERROR

} // namespace pathloss
