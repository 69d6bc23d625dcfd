#include "ivtree/error.hpp"

namespace ivtree {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveTemperature: return "non_positive_temperature";
    case ErrorCode::TreeOrderTooSmall: return "tree_order_too_small";
    case ErrorCode::NonFiniteInput: return "non_finite_input";
    case ErrorCode::WeightOverflow: return "weight_overflow";
    case ErrorCode::MissingVertex: return "missing_vertex";
    case ErrorCode::InvalidSpin: return "invalid_spin";
    case ErrorCode::IndexOutOfRange: return "index_out_of_range";
    case ErrorCode::NonPositiveArgument: return "non_positive_argument";
    case ErrorCode::FieldOverflow: return "field_overflow";
    case ErrorCode::ParityMismatch: return "parity_mismatch";
    case ErrorCode::NonPositiveSum: return "non_positive_sum";
    case ErrorCode::NotAFixedPoint: return "not_a_fixed_point";
    case ErrorCode::EnumerationTooLarge: return "enumeration_too_large";
    case ErrorCode::InvalidDepth: return "invalid_depth";
    case ErrorCode::SameIndicator: return "same_indicator";
    case ErrorCode::InvalidAxis: return "invalid_axis";
    case ErrorCode::InvalidFieldVector: return "invalid_field_vector";
    case ErrorCode::MapOverflow: return "map_overflow";
  }
  return "unknown";
}

}  // namespace ivtree
