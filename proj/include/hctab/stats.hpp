#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>

namespace hctab {

// Engine-wide counters. All space figures are in cells; `term_cells`,
// `chain_cells` and `record_cells` attribute the arena total to copied term
// blocks, terms-table chain nodes, and subgoal/answer record blocks.
struct Stats {
    // copy counters
    std::uint64_t cells_copied = 0;
    std::uint64_t traversal_steps = 0;
    std::uint64_t hash_combines = 0;

    // arena attribution
    std::uint64_t term_cells = 0;
    std::uint64_t chain_cells = 0;
    std::uint64_t record_cells = 0;

    // terms-table counters
    std::uint64_t hashcons_calls = 0;
    std::uint64_t terms_hits = 0;
    std::uint64_t terms_misses = 0;
    std::uint64_t terms_comparisons = 0;
    std::uint64_t terms_struct_comparisons = 0;
    std::uint64_t terms_expansions = 0;

    // subgoal/answer table counters
    std::uint64_t subgoal_comparisons = 0;
    std::uint64_t answer_comparisons = 0;

    std::uint64_t subgoals = 0;
    std::uint64_t answers = 0;
    std::uint64_t tabled_resolutions = 0;

    std::uint64_t chain_comparisons() const {
        return terms_comparisons + subgoal_comparisons + answer_comparisons;
    }
};

}  // namespace hctab
