#include "bayesclean/domain_index.hpp"

#include <algorithm>

namespace bayesclean {

namespace {

inline std::uint64_t pair_key(ValueId a, ValueId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

DomainIndex DomainIndex::build(const Relation& r) {
    DomainIndex idx;
    idx.tuple_count_ = r.size();
    const std::size_t m = r.arity();
    idx.per_attr_counts_.resize(m);
    idx.attr_domains_.resize(m);

    std::vector<ValueId> distinct;       // reused per tuple
    std::vector<std::uint64_t> pair_keys;
    for (const Row& row : r.rows()) {
        for (std::size_t j = 0; j < m; ++j) {
            auto [it, inserted] = idx.per_attr_counts_[j].try_emplace(row[j], 0);
            if (inserted) idx.attr_domains_[j].push_back(row[j]);
            ++it->second;
        }
        // per-tuple counting: each value and unordered value pair once
        distinct.assign(row.begin(), row.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (ValueId v : distinct) ++idx.value_counts_[v];

        pair_keys.clear();
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b)
                pair_keys.push_back(pair_key(row[a], row[b]));
        std::sort(pair_keys.begin(), pair_keys.end());
        pair_keys.erase(std::unique(pair_keys.begin(), pair_keys.end()),
                        pair_keys.end());
        for (std::uint64_t key : pair_keys) ++idx.pair_counts_[key];
    }
    return idx;
}

std::uint32_t DomainIndex::attr_count(std::size_t attr, ValueId v) const {
    const auto& counts = per_attr_counts_.at(attr);
    auto it = counts.find(v);
    return it == counts.end() ? 0 : it->second;
}

std::uint32_t DomainIndex::count(ValueId v) const {
    auto it = value_counts_.find(v);
    return it == value_counts_.end() ? 0 : it->second;
}

std::uint32_t DomainIndex::pair_count(ValueId a, ValueId b) const {
    auto it = pair_counts_.find(pair_key(a, b));
    return it == pair_counts_.end() ? 0 : it->second;
}

bool DomainIndex::operator==(const DomainIndex& other) const {
    return tuple_count_ == other.tuple_count_ &&
           per_attr_counts_ == other.per_attr_counts_ &&
           attr_domains_ == other.attr_domains_ &&
           value_counts_ == other.value_counts_ &&
           pair_counts_ == other.pair_counts_;
}

}  // namespace bayesclean
