#include "roofforge/errors.hpp"

namespace roofforge {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::FaceWithoutOutlineEdge: return "FaceWithoutOutlineEdge";
    case ErrorCode::NonRealizableAdjacency: return "NonRealizableAdjacency";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateEdge: return "DegenerateEdge";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::SelfIntersectingOutline: return "SelfIntersectingOutline";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::DegenerateGraph: return "DegenerateGraph";
    case ErrorCode::AllHeightsFree: return "AllHeightsFree";
    case ErrorCode::InvalidInput2D: return "InvalidInput2D";
    case ErrorCode::InconsistentSystem: return "InconsistentSystem";
    case ErrorCode::InvalidSolveSpec: return "InvalidSolveSpec";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::WouldCreateDegenerateFace: return "WouldCreateDegenerateFace";
    case ErrorCode::RegionIsAllRoofVertices: return "RegionIsAllRoofVertices";
    case ErrorCode::EmptyAdjacency: return "EmptyAdjacency";
    case ErrorCode::CandidateExplosion: return "CandidateExplosion";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NonPlanarInput: return "NonPlanarInput";
    }
    return "Unknown";
}

}  // namespace roofforge
