#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bayesclean/relation.hpp"

namespace bayesclean {

/// DAG over the schema's attributes. Parent lists are kept sorted.
class NetworkStructure {
public:
    NetworkStructure() = default;
    explicit NetworkStructure(std::size_t node_count)
        : parents_(node_count) {}

    std::size_t node_count() const { return parents_.size(); }
    const std::vector<std::size_t>& parents(std::size_t node) const {
        return parents_.at(node);
    }
    bool has_edge(std::size_t parent, std::size_t child) const;
    void add_edge(std::size_t parent, std::size_t child);
    void remove_edge(std::size_t parent, std::size_t child);

    bool is_acyclic() const;
    /// Would adding parent->child close a cycle?
    bool creates_cycle(std::size_t parent, std::size_t child) const;

    /// Edges as (parent, child) pairs, sorted.
    std::vector<std::pair<std::size_t, std::size_t>> edge_list() const;

    bool operator==(const NetworkStructure&) const = default;

private:
    std::vector<std::vector<std::size_t>> parents_;
};

struct StructureConfig {
    std::size_t max_parents = 3;
    std::size_t restarts = 5;
    std::uint64_t seed = 0;
};

/// BIC of a structure against a relation (MLE log-likelihood minus
/// (ln n)/2 times the free-parameter count). Decomposable per family.
double bic_score(const Relation& r, const NetworkStructure& s);

/// Greedy hill climbing on BIC with add/delete/reverse moves and seeded
/// random restarts. Deterministic for fixed (relation, config); ties broken
/// by lexicographic order of the edge list (attribute names).
NetworkStructure learn_structure(const Relation& r, const StructureConfig& cfg);

/// Generative model Pr[T*]: structure plus Laplace-smoothed CPTs. Counts are
/// stored (not probabilities) so serialization round-trips exactly.
class BayesNet {
public:
    static BayesNet learn(const Relation& r, const NetworkStructure& s,
                          double smoothing);

    double joint_probability(const Row& t) const;
    double log_joint(const Row& t) const;

    /// Pr[t[node] | t[parents(node)]] with smoothing; out-of-domain values
    /// get the smoothed floor, unseen parent assignments fall back to
    /// uniform (counted in unseen_parent_queries).
    double conditional(std::size_t node, const Row& t) const;

    const NetworkStructure& structure() const { return structure_; }
    double smoothing() const { return smoothing_; }
    const std::vector<ValueId>& domain(std::size_t node) const {
        return domains_.at(node);
    }
    std::uint64_t unseen_parent_queries() const { return unseen_parent_queries_; }

    nlohmann::json to_json(const Schema& schema, const ValuePool& pool) const;
    static BayesNet from_json(const nlohmann::json& j, const Schema& schema,
                              ValuePool& pool);

private:
    struct Family {
        // key: parent value ids packed in parent order; empty key when root
        struct Entry {
            std::unordered_map<ValueId, std::uint32_t> counts;
            std::uint32_t total = 0;
        };
        std::unordered_map<std::string, Entry> table;
    };

    static std::string pack_key(const Row& t, const std::vector<std::size_t>& parents);

    NetworkStructure structure_;
    double smoothing_ = 1.0;
    std::vector<std::vector<ValueId>> domains_;
    std::vector<std::unordered_set<ValueId>> domain_sets_;
    std::vector<Family> families_;
    mutable std::uint64_t unseen_parent_queries_ = 0;
};

}  // namespace bayesclean
