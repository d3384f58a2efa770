#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bayesclean/domain_index.hpp"
#include "bayesclean/relation.hpp"

namespace bayesclean {

struct ErrorModelParams {
    double alpha = 2.3;  // weight of the edit-distance feature
    double beta = 3.5;   // weight of the distributional-similarity feature
    double mu = 1.0;     // Laplace smoothing inside f_ds
};

/// Unit-cost Levenshtein distance. NULL counts as the empty string:
/// ed(v, NULL) = |v|, ed(NULL, NULL) = 0.
std::size_t edit_distance(std::optional<std::string_view> a,
                          std::optional<std::string_view> b);

/// Same, but saturates at cap (never returns more than cap).
std::size_t edit_distance_capped(std::optional<std::string_view> a,
                                 std::optional<std::string_view> b,
                                 std::size_t cap);

std::size_t edit_distance(const ValuePool& pool, ValueId a, ValueId b);

/// exp(-edit_distance); 1.0 iff the values are identical.
double f_ed(const ValuePool& pool, ValueId observed, ValueId candidate);

/// Context of an (observed tuple, attribute, candidate) triple: the observed
/// tuple's other cells that co-occur (tuple-level, anywhere in the relation)
/// with both the observed value and the candidate value. Deduplicated,
/// ordered by position.
std::vector<ValueId> context_set(const DomainIndex& idx, const Row& observed,
                                 std::size_t attr, ValueId candidate);

/// Distributional similarity: sum over the context of
///   Pr[c|candidate] * Pr[c|observed] * Pr[observed] / Pr[c]
/// with Pr[c|v] = (#(c,v)+mu)/#(v), Pr[v] = #(v)/n, Pr[c] = #(c)/n.
/// An unseen candidate (count 0) scores 0.
double f_ds(const DomainIndex& idx, ValueId observed, ValueId candidate,
            std::span<const ValueId> context, double mu);

/// Log of the max-entropy attribute error probabilities over a candidate
/// pool, for one attribute of one observed tuple: softmax over
/// alpha*f_ed + beta*f_ds. Returned in pool order; sums to 1 in exp space.
std::vector<double> attribute_error_log_probs(const Relation& r,
                                              const DomainIndex& idx,
                                              const Row& observed,
                                              std::size_t attr,
                                              std::span<const ValueId> pool,
                                              const ErrorModelParams& params);

/// Pr[observed_value | candidate_value] normalized over the pool, which must
/// contain the candidate.
double attribute_error_probability(const Relation& r, const DomainIndex& idx,
                                   const Row& observed, std::size_t attr,
                                   ValueId candidate,
                                   std::span<const ValueId> pool,
                                   const ErrorModelParams& params);

/// log Pr[observed tuple | candidate tuple]: attributes corrupt
/// independently, so this is the sum of per-attribute log probabilities.
/// pools[i] is the candidate pool for attribute i.
double tuple_error_log_prob(const Relation& r, const DomainIndex& idx,
                            const Row& observed, const Row& candidate,
                            std::span<const std::vector<ValueId>> pools,
                            const ErrorModelParams& params);

}  // namespace bayesclean
