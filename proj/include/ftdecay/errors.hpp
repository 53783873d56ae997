#pragma once

#include <stdexcept>
#include <string>

namespace ftdecay {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct UnboundedBody : Error {
    explicit UnboundedBody(const std::string& what) : Error(what) {}
};

struct EmptyInterior : Error {
    explicit EmptyInterior(const std::string& what) : Error(what) {}
};

struct NonSmoothPoint : Error {
    explicit NonSmoothPoint(const std::string& what) : Error(what) {}
};

struct DegeneratePatch : Error {
    explicit DegeneratePatch(const std::string& what) : Error(what) {}
};

struct QuadratureBudgetExceeded : Error {
    explicit QuadratureBudgetExceeded(const std::string& what) : Error(what) {}
};

struct InsufficientData : Error {
    explicit InsufficientData(const std::string& what) : Error(what) {}
};

struct AllZeros : Error {
    explicit AllZeros(const std::string& what) : Error(what) {}
};

struct DimensionUnsupported : Error {
    explicit DimensionUnsupported(const std::string& what) : Error(what) {}
};

}  // namespace ftdecay
