#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "bayesclean/bayes_net.hpp"
#include "bayesclean/domain_index.hpp"
#include "bayesclean/error_model.hpp"
#include "bayesclean/relation.hpp"

namespace bayesclean {

struct CleanConfig {
    ErrorModelParams error;
    std::size_t edit_threshold = 4;  // tuple-level candidate distance bound
    double smoothing = 1.0;          // CPT Laplace smoothing
    StructureConfig structure;
};

/// Candidate clean tuples for one observed tuple: the distinct relation
/// tuples within the edit-distance bound, in relation order, plus the
/// observed tuple itself (appended last when not already present).
struct CandidateSet {
    Row observed;
    std::vector<Row> candidates;
};

struct Repair {
    Row original;
    Row chosen;
    double log_posterior = 0.0;
    std::vector<std::size_t> changed_attributes;
    // log-posterior gap to the runner-up; empty when there is no second
    // candidate
    std::optional<double> runner_up_margin;
};

/// Sum of per-attribute edit distances, saturated at cap.
std::size_t tuple_distance(const ValuePool& pool, const Row& a, const Row& b,
                           std::size_t cap);

CandidateSet generate_candidates(const Relation& r, const Row& t,
                                 std::size_t threshold);

/// log Pr[observed | candidate] + log Pr[candidate]; per-attribute error
/// pools are the value sets projected from the candidate set.
double score_candidate(const Relation& r, const DomainIndex& idx,
                       const BayesNet& bn, const ErrorModelParams& params,
                       const Row& observed, const Row& candidate,
                       const CandidateSet& set);

/// Binds a relation and its trained models; repairs tuples one at a time.
/// Models are frozen: repairs never feed back into counts or CPTs.
class TupleCleaner {
public:
    TupleCleaner(const Relation& r, const DomainIndex& idx, const BayesNet& bn,
                 const CleanConfig& cfg);
    ~TupleCleaner();

    Repair clean_tuple(const Row& t) const;
    CandidateSet candidates(const Row& t) const;

    const DomainIndex& index() const { return idx_; }
    const BayesNet& net() const { return bn_; }

private:
    struct Impl;
    const Relation& rel_;
    const DomainIndex& idx_;
    const BayesNet& bn_;
    CleanConfig cfg_;
    std::unique_ptr<Impl> impl_;
};

/// Full pipeline on one relation: build the index, learn the generative
/// model on r itself, then repair every tuple independently. Output rows
/// stay in input order; exactly one Repair per tuple.
std::pair<Relation, std::vector<Repair>> clean_relation(const Relation& r,
                                                        const CleanConfig& cfg);

}  // namespace bayesclean
