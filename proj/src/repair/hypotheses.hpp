#pragma once

#include <functional>
#include <tuple>

#include "gr1shield/repair.hpp"

namespace gr1shield::detail {

struct RankedEdit {
    Edit edit;
    int kind_rank = 0;
    std::vector<int> literal_ids;
};

bool ranked_less(const RankedEdit& a, const RankedEdit& b);

struct RankedHypothesis {
    Hypothesis hyp;
    std::vector<std::tuple<int, int, std::string, std::vector<int>>> key;
};

bool hypothesis_less(const RankedHypothesis& a, const RankedHypothesis& b);
RankedHypothesis combine(const std::vector<const RankedEdit*>& parts);

/// Candidate literals for editing `unit`, in vocabulary order.
std::vector<FormulaPtr> unit_literals(const Spec& spec, const Unit& unit, const Vocabulary& vocab);

/// All edits of `unit` with up to `max_literals` literals plus deletion,
/// keeping only those accepted by `keep`.
std::vector<RankedEdit> unit_edits(const Spec& spec, const Unit& unit, const Vocabulary& vocab, int max_literals,
                                   int delete_cost, const std::function<bool(const Edit&)>& keep);

int delete_cost(const Spec& spec, int max_literals);

}  // namespace gr1shield::detail
