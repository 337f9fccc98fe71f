#include "oran/replay_buffer.hpp"

#include <stdexcept>
#include <string>

namespace oran::rl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be >= 1");
}

void ReplayBuffer::push(Transition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
        return;
    }
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= items_.size()) throw std::out_of_range("replay index out of range");
    return items_[(head_ + i) % items_.size()];
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
    if (items_.size() < batch || batch == 0) {
        throw std::logic_error("replay holds " + std::to_string(items_.size()) +
                               " transitions, cannot sample a batch of " + std::to_string(batch));
    }
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
    std::vector<const Transition*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) out.push_back(&items_[pick(rng)]);
    return out;
}

}  // namespace oran::rl
