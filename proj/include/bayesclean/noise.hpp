#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bayesclean/relation.hpp"

namespace bayesclean {

enum class ErrorType { Spelling, Replacement, Deletion };

std::string to_string(ErrorType t);
ErrorType error_type_from_string(const std::string& s);

struct NoiseSpec {
    double tau = 0.01;  // per-cell corruption probability
    std::array<double, 3> mix{1.0 / 3, 1.0 / 3, 1.0 / 3};  // spelling, replacement, deletion
    int spelling_min = 1;
    int spelling_max = 4;
    std::uint64_t seed = 0;
};

struct Corruption {
    std::size_t row = 0;
    std::size_t attr = 0;
    Cell clean;
    Cell dirty;
    ErrorType type = ErrorType::Spelling;
};

struct GroundTruth {
    std::vector<Corruption> entries;
    // corruptions where the requested error type was impossible and another
    // was substituted (e.g. replacement on a single-valued attribute)
    std::size_t fallback_count = 0;

    nlohmann::json to_json() const;
    static GroundTruth from_json(const nlohmann::json& j);
};

/// Corrupt each cell independently with probability tau; error type drawn
/// from the mix. Bit-exact reproducible from (relation, spec).
std::pair<Relation, GroundTruth> inject(const Relation& r, const NoiseSpec& spec);

/// Write the recorded clean values back over the dirty relation. Errors if a
/// ground-truth entry does not match the dirty relation's coordinates/cells.
Relation replay(const GroundTruth& gt, const Relation& dirty);

}  // namespace bayesclean
