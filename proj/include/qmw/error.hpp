#pragma once

#include <stdexcept>
#include <string>

namespace qmw {

/// Error codes carried by every qmw::Error. The CLI maps these to module
/// tags and exit codes; tests match on them.
enum class errc {
    malformed_document,
    non_positive_mass,
    disconnected_graph,
    duplicate_id,
    unknown_vertex,
    bad_dimension,
    nonzero_external_momentum,
    self_loop_unsupported,
    empty_loop_space,
    schedule_inconsistent,
    dimension_mismatch,
    unsupported_net_shape,
    search_exhausted,
    divergent_exponent,
    out_of_half_plane,
    dimension_too_small,
    unknown_dimension,
    unsupported_exotic_product,
    truncation_exceeded,
    bad_character_table,
    internal,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::malformed_document: return "MalformedDocument";
        case errc::non_positive_mass: return "NonPositiveMass";
        case errc::disconnected_graph: return "DisconnectedGraph";
        case errc::duplicate_id: return "DuplicateId";
        case errc::unknown_vertex: return "UnknownVertex";
        case errc::bad_dimension: return "BadDimension";
        case errc::nonzero_external_momentum: return "NonzeroExternalMomentum";
        case errc::self_loop_unsupported: return "SelfLoopUnsupported";
        case errc::empty_loop_space: return "EmptyLoopSpace";
        case errc::schedule_inconsistent: return "ScheduleInconsistent";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::unsupported_net_shape: return "UnsupportedNetShape";
        case errc::search_exhausted: return "SearchExhausted";
        case errc::divergent_exponent: return "DivergentExponent";
        case errc::out_of_half_plane: return "OutOfHalfPlane";
        case errc::dimension_too_small: return "DimensionTooSmall";
        case errc::unknown_dimension: return "UnknownDimension";
        case errc::unsupported_exotic_product: return "UnsupportedExoticProduct";
        case errc::truncation_exceeded: return "TruncationExceeded";
        case errc::bad_character_table: return "BadCharacterTable";
        case errc::internal: return "Internal";
    }
    return "Unknown";
}

/// Exception type used throughout the library. `where()` names the field or
/// site the problem was detected at (e.g. "internal_edges[2].mass").
class Error : public std::runtime_error {
public:
    Error(errc code, std::string where, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) +
                             (where.empty() ? "" : " at " + where) + ": " + what),
          code_(code),
          where_(std::move(where)) {}

    errc code() const { return code_; }
    const std::string& where() const { return where_; }

private:
    errc code_;
    std::string where_;
};

[[noreturn]] inline void fail(errc code, const std::string& where, const std::string& what) {
    throw Error(code, where, what);
}

} // namespace qmw
