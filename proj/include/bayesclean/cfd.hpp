#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "bayesclean/relation.hpp"

namespace bayesclean {

/// Exact conditional functional dependency. lhs_values aligns with
/// lhs_attrs; nullopt marks a wildcard slot, a value of kNull is the NULL
/// constant. Mined rules are either all-constant (constant rhs) or
/// all-wildcard (variable rhs).
struct CFDRule {
    std::vector<std::size_t> lhs_attrs;  // sorted, never contains rhs_attr
    std::vector<std::optional<ValueId>> lhs_values;
    std::size_t rhs_attr = 0;
    std::optional<ValueId> rhs_value;
    std::uint32_t support = 0;
};

/// All exact CFDs (zero violating tuples) with |lhs| <= max_lhs and support
/// >= min_support, in lattice order (lhs size, then attrs, then variable
/// rule first, then lhs constants, then rhs).
std::vector<CFDRule> mine_cfds(const Relation& r, std::uint32_t min_support,
                               std::size_t max_lhs);

/// Tuples matching the lhs whose rhs value disagrees with the rule. For a
/// variable rhs this counts, within each lhs-value group, the tuples outside
/// the group's majority rhs value.
std::uint32_t count_violations(const Relation& r, const CFDRule& rule);

nlohmann::json rules_to_json(const Relation& r, const std::vector<CFDRule>& rules);

}  // namespace bayesclean
