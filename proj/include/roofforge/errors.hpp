#pragma once

#include <stdexcept>
#include <string>

namespace roofforge {

enum class ErrorCode {
    InvalidGraph,
    FaceWithoutOutlineEdge,
    NonRealizableAdjacency,
    TooFewPoints,
    DegenerateEdge,
    SingularSystem,
    SelfIntersectingOutline,
    NotConverged,
    DegenerateGraph,
    AllHeightsFree,
    InvalidInput2D,
    InconsistentSystem,
    InvalidSolveSpec,
    InvalidTarget,
    WouldCreateDegenerateFace,
    RegionIsAllRoofVertices,
    EmptyAdjacency,
    CandidateExplosion,
    ParseError,
    SchemaError,
    NonPlanarInput,
};

const char* error_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code)
    {
    }
    ErrorCode code() const { return code_; }
    const char* name() const { return error_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace roofforge
