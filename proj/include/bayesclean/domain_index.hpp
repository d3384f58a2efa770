#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bayesclean/relation.hpp"

namespace bayesclean {

/// Frequency counts over a relation: per-attribute value counts, global
/// per-tuple value counts #(v), and tuple-level co-occurrence counts #(c,v).
/// NULL participates as an ordinary value. Immutable once built.
class DomainIndex {
public:
    static DomainIndex build(const Relation& r);

    std::size_t tuple_count() const { return tuple_count_; }
    std::size_t arity() const { return per_attr_counts_.size(); }

    /// #(v) within one attribute column.
    std::uint32_t attr_count(std::size_t attr, ValueId v) const;

    /// #(v): tuples containing v in any position (each tuple counted once).
    std::uint32_t count(ValueId v) const;

    /// #(a,b): tuples containing both a and b at different positions.
    /// Symmetric; (v,v) counts tuples where v occupies two or more cells.
    std::uint32_t pair_count(ValueId a, ValueId b) const;

    /// Distinct values of one attribute, ordered by first occurrence.
    const std::vector<ValueId>& attr_domain(std::size_t attr) const {
        return attr_domains_.at(attr);
    }

    bool operator==(const DomainIndex& other) const;

private:
    std::size_t tuple_count_ = 0;
    std::vector<std::unordered_map<ValueId, std::uint32_t>> per_attr_counts_;
    std::vector<std::vector<ValueId>> attr_domains_;
    std::unordered_map<ValueId, std::uint32_t> value_counts_;
    std::unordered_map<std::uint64_t, std::uint32_t> pair_counts_;
};

}  // namespace bayesclean
