#pragma once

#include <cstdint>
#include <vector>

namespace gr1shield::detail {

/// Explicit parity game, max-priority convention: player 0 wins plays whose
/// highest infinitely-recurring priority is even.
struct ParityGame {
    std::vector<std::uint8_t> owner;
    std::vector<std::uint8_t> priority;
    std::vector<std::vector<std::uint32_t>> succ;

    std::uint32_t add(std::uint8_t who, std::uint8_t prio) {
        owner.push_back(who);
        priority.push_back(prio);
        succ.emplace_back();
        return static_cast<std::uint32_t>(owner.size() - 1);
    }
    std::size_t size() const { return owner.size(); }
};

struct ParitySolution {
    /// Winner per node (0 or 1).
    std::vector<std::uint8_t> winner;
    /// Successor chosen by the winner at nodes it owns; kNone elsewhere.
    std::vector<std::uint32_t> strategy;
    static constexpr std::uint32_t kNone = 0xffffffffu;
};

/// Zielonka's recursive algorithm. Every node must have a successor.
ParitySolution solve_parity(const ParityGame& game);

}  // namespace gr1shield::detail
