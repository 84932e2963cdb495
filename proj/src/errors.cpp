#include "screenlab/errors.hpp"

namespace screenlab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::DegenerateAssignment: return "DegenerateAssignment";
        case ErrorCode::InvalidRetention: return "InvalidRetention";
        case ErrorCode::MissingTypes: return "MissingTypes";
        case ErrorCode::MissingStatedTypes: return "MissingStatedTypes";
        case ErrorCode::EmptyScreen: return "EmptyScreen";
        case ErrorCode::EmptyArm: return "EmptyArm";
        case ErrorCode::WeakFirstStage: return "WeakFirstStage";
        case ErrorCode::AllCompliers: return "AllCompliers";
        case ErrorCode::DegenerateBootstrap: return "DegenerateBootstrap";
        case ErrorCode::AllDiscarded: return "AllDiscarded";
        case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

}  // namespace screenlab
