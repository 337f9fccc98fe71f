#pragma once

#include <cstddef>
#include <vector>

#include "oran/rng.hpp"

namespace oran::rl {

struct Transition {
    std::vector<double> state;
    int action_index = -1;       // DQN action
    std::vector<double> action;  // TD3 action as fed to the critics
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

/// Fixed-capacity FIFO ring with uniform sampling (with replacement).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    /// Oldest item is index 0.
    const Transition& at(std::size_t i) const;
    /// Throws std::logic_error when fewer than `batch` items are stored.
    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next slot to overwrite once full
    std::vector<Transition> items_;
};

}  // namespace oran::rl
