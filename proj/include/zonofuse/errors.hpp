#ifndef ZONOFUSE_ERRORS_HPP_
#define ZONOFUSE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace zonofuse {

/// Base class for all zonofuse errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error { using Error::Error; };
struct InvalidOrderError : Error { using Error::Error; };
struct InvalidDirectionError : Error { using Error::Error; };
struct InvalidWeightError : Error { using Error::Error; };
struct EmptySetError : Error { using Error::Error; };

struct DegenerateZonotopeError : Error { using Error::Error; };
struct FlatSetError : Error { using Error::Error; };
struct EmptyIntersectionError : Error { using Error::Error; };
struct UnboundedError : Error { using Error::Error; };
struct DegenerateStripError : Error { using Error::Error; };
struct NotCentrallySymmetricError : Error { using Error::Error; };

struct SingularInnovationError : Error { using Error::Error; };
struct RankDeficiencyError : Error { using Error::Error; };
struct SingularSumError : Error { using Error::Error; };

struct ParseError : Error { using Error::Error; };

} // namespace zonofuse

#endif
