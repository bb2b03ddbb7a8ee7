#include "coast/sim/random_walk.hpp"

#include <unordered_map>

#include "coast/sim/oracle.hpp"

namespace coast::sim {

double random_click_success_probability(const EnvState& start, int steps, std::size_t node_cap) {
    if (steps <= 0) return start.success ? 1.0 : 0.0;
    if (start.success) return 1.0;

    // Node 0 is the absorbing success state.
    struct Edge {
        int to;
        double weight;
    };
    std::vector<std::vector<Edge>> edges(1);
    std::vector<EnvState> states{start};
    std::vector<int> node_of_state{1};
    std::unordered_map<std::string, int> index;
    index.emplace(abstract_key(start), 1);
    edges.emplace_back();

    for (std::size_t i = 0; i < states.size(); ++i) {
        const int from = node_of_state[i];
        const auto refs = visible_refs(states[i]);
        if (refs.empty()) continue;
        const double share = 1.0 / static_cast<double>(refs.size());
        std::unordered_map<int, double> out;
        for (const auto& ref : refs) {
            EnvState next = states[i];
            const auto c = ref.rect.center();
            step_in_place(next, env::Action::left_click(c.x, c.y), false);
            int to = 0;
            if (!next.success) {
                auto key = abstract_key(next);
                auto it = index.find(key);
                if (it == index.end()) {
                    if (states.size() >= node_cap) {
                        throw StateSpaceBudgetExceeded("random walk exceeded " + std::to_string(node_cap) + " states");
                    }
                    to = static_cast<int>(edges.size());
                    edges.emplace_back();
                    index.emplace(std::move(key), to);
                    states.push_back(std::move(next));
                    node_of_state.push_back(to);
                } else {
                    to = it->second;
                }
            }
            out[to] += share;
        }
        for (auto [to, w] : out) edges[static_cast<std::size_t>(from)].push_back({to, w});
    }
    states.clear();

    std::vector<double> mass(edges.size(), 0.0), next(edges.size(), 0.0);
    mass[1] = 1.0;
    for (int t = 0; t < steps; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        next[0] = mass[0];
        for (std::size_t n = 1; n < edges.size(); ++n) {
            if (mass[n] == 0.0) continue;
            for (const auto& e : edges[n]) next[static_cast<std::size_t>(e.to)] += mass[n] * e.weight;
        }
        mass.swap(next);
    }
    return mass[0];
}

}  // namespace coast::sim
