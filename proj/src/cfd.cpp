#include "bayesclean/cfd.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <unordered_map>

namespace bayesclean {

namespace {

std::string pack_projection(const Row& row, const std::vector<std::size_t>& attrs) {
    std::string key;
    key.reserve(attrs.size() * sizeof(ValueId));
    for (std::size_t a : attrs) {
        ValueId v = row[a];
        key.append(reinterpret_cast<const char*>(&v), sizeof(ValueId));
    }
    return key;
}

// all index subsets of {0..m-1} with the given size, ascending lex order
void enumerate_subsets(std::size_t m, std::size_t size,
                       std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t next) -> void {
        if (cur.size() == size) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = next; i < m; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
}

// token-wise comparison of constant lhs values, NULL first
bool values_less(const ValuePool& pool, const std::vector<ValueId>& a,
                 const std::vector<ValueId>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        if (a[i] == kNull) return true;
        if (b[i] == kNull) return false;
        int c = pool.token(a[i]).compare(pool.token(b[i]));
        if (c != 0) return c < 0;
    }
    return false;
}

}  // namespace

std::vector<CFDRule> mine_cfds(const Relation& r, std::uint32_t min_support,
                               std::size_t max_lhs) {
    if (min_support < 1) throw std::invalid_argument("min_support must be >= 1");
    if (max_lhs < 1) throw std::invalid_argument("max_lhs must be >= 1");
    const std::size_t m = r.arity();
    const std::size_t n = r.size();
    std::vector<CFDRule> rules;
    if (m < 2) return rules;

    struct Group {
        std::vector<ValueId> key_values;
        std::uint32_t count = 0;
        // per non-lhs attribute: observed rhs value, or mixed
        std::vector<ValueId> rhs_value;
        std::vector<bool> rhs_mixed;
    };

    for (std::size_t size = 1; size <= std::min(max_lhs, m - 1); ++size) {
        std::vector<std::vector<std::size_t>> subsets;
        enumerate_subsets(m, size, subsets);
        for (const auto& lhs : subsets) {
            std::unordered_map<std::string, std::uint32_t> group_of;
            std::vector<Group> groups;
            for (const Row& row : r.rows()) {
                auto [it, inserted] = group_of.try_emplace(
                    pack_projection(row, lhs),
                    static_cast<std::uint32_t>(groups.size()));
                if (inserted) {
                    Group grp;
                    for (std::size_t a : lhs) grp.key_values.push_back(row[a]);
                    grp.rhs_value.assign(m, kNull);
                    grp.rhs_mixed.assign(m, false);
                    grp.count = 0;
                    for (std::size_t a = 0; a < m; ++a) grp.rhs_value[a] = row[a];
                    groups.push_back(std::move(grp));
                }
                Group& grp = groups[it->second];
                ++grp.count;
                for (std::size_t a = 0; a < m; ++a)
                    if (!grp.rhs_mixed[a] && grp.rhs_value[a] != row[a])
                        grp.rhs_mixed[a] = true;
            }

            for (std::size_t rhs = 0; rhs < m; ++rhs) {
                if (std::find(lhs.begin(), lhs.end(), rhs) != lhs.end()) continue;

                bool fd_holds = true;
                for (const Group& grp : groups)
                    if (grp.rhs_mixed[rhs]) { fd_holds = false; break; }
                if (fd_holds && n >= min_support) {
                    CFDRule rule;
                    rule.lhs_attrs = lhs;
                    rule.lhs_values.assign(lhs.size(), std::nullopt);  // wildcards
                    rule.rhs_attr = rhs;
                    rule.rhs_value = std::nullopt;
                    rule.support = static_cast<std::uint32_t>(n);
                    rules.push_back(std::move(rule));
                }

                // constant rules, one per pure group with enough support
                std::vector<std::uint32_t> order;
                for (std::uint32_t gi = 0; gi < groups.size(); ++gi)
                    if (!groups[gi].rhs_mixed[rhs] && groups[gi].count >= min_support)
                        order.push_back(gi);
                std::sort(order.begin(), order.end(),
                          [&](std::uint32_t a, std::uint32_t b) {
                              return values_less(r.pool(), groups[a].key_values,
                                                 groups[b].key_values);
                          });
                for (std::uint32_t gi : order) {
                    CFDRule rule;
                    rule.lhs_attrs = lhs;
                    for (ValueId v : groups[gi].key_values)
                        rule.lhs_values.emplace_back(v);
                    rule.rhs_attr = rhs;
                    rule.rhs_value = groups[gi].rhs_value[rhs];
                    rule.support = groups[gi].count;
                    rules.push_back(std::move(rule));
                }
            }
        }
    }
    return rules;
}

std::uint32_t count_violations(const Relation& r, const CFDRule& rule) {
    if (rule.lhs_attrs.size() != rule.lhs_values.size())
        throw std::invalid_argument("malformed rule");

    auto matches = [&](const Row& row) {
        for (std::size_t k = 0; k < rule.lhs_attrs.size(); ++k)
            if (rule.lhs_values[k] && row[rule.lhs_attrs[k]] != *rule.lhs_values[k])
                return false;
        return true;
    };

    if (rule.rhs_value) {
        std::uint32_t v = 0;
        for (const Row& row : r.rows())
            if (matches(row) && row[rule.rhs_attr] != *rule.rhs_value) ++v;
        return v;
    }

    // variable rhs: within each group of matching tuples that agree on all
    // lhs attributes, tuples outside the majority rhs value violate
    std::unordered_map<std::string, std::unordered_map<ValueId, std::uint32_t>> groups;
    for (const Row& row : r.rows())
        if (matches(row))
            ++groups[pack_projection(row, rule.lhs_attrs)][row[rule.rhs_attr]];
    std::uint32_t v = 0;
    for (const auto& [key, counts] : groups) {
        std::uint32_t total = 0, top = 0;
        for (const auto& [val, c] : counts) {
            total += c;
            top = std::max(top, c);
        }
        v += total - top;
    }
    return v;
}

nlohmann::json rules_to_json(const Relation& r, const std::vector<CFDRule>& rules) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CFDRule& rule : rules) {
        nlohmann::json lhs = nlohmann::json::array();
        for (std::size_t k = 0; k < rule.lhs_attrs.size(); ++k) {
            nlohmann::json pat;
            pat["attr"] = r.schema().name(rule.lhs_attrs[k]);
            if (rule.lhs_values[k]) {
                ValueId v = *rule.lhs_values[k];
                pat["value"] = v == kNull ? nlohmann::json(nullptr)
                                          : nlohmann::json(r.pool().token(v));
            } else {
                pat["wildcard"] = true;
            }
            lhs.push_back(std::move(pat));
        }
        nlohmann::json rhs;
        rhs["attr"] = r.schema().name(rule.rhs_attr);
        if (rule.rhs_value) {
            ValueId v = *rule.rhs_value;
            rhs["value"] = v == kNull ? nlohmann::json(nullptr)
                                      : nlohmann::json(r.pool().token(v));
        } else {
            rhs["wildcard"] = true;
        }
        arr.push_back({{"lhs", lhs}, {"rhs", rhs}, {"support", rule.support}});
    }
    return arr;
}

}  // namespace bayesclean
