#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hambias {

// Bipartite graph given by the right side's adjacency into the left side.
struct BipartiteGraph {
    int left_count = 0;                       // X
    std::vector<std::vector<int>> right_adj;  // per y in Y, its neighbours in X

    int right_count() const { return static_cast<int>(right_adj.size()); }
};

// Outcome of the doubled Hall search: either two matchings covering Y whose
// X-images are disjoint, or a set Z with |N(Z)| < 2|Z| certifying failure.
struct BigamyHallResult {
    bool success = false;
    std::vector<int> first_partner;   // per y, X-vertex of the first matching
    std::vector<int> second_partner;  // per y, X-vertex of the second matching
    std::vector<int> violating_set;   // Z, on failure
};

// Duplicates every y into two copies and runs augmenting paths into X. Full
// success needs |N(Z)| >= 2|Z| for every Z, and the alternating-reachability
// set of an unmatched copy projects to a violating Z otherwise.
inline BigamyHallResult bigamy_hall_matchings(const BipartiteGraph& b) {
    const int ny = b.right_count();
    const int copies = 2 * ny;
    for (const auto& adj : b.right_adj)
        for (int x : adj)
            if (x < 0 || x >= b.left_count)
                throw std::out_of_range("bigamy_hall: neighbour id out of range");

    std::vector<int> match_left(b.left_count, -1);  // X -> copy
    std::vector<int> match_copy(copies, -1);        // copy -> X
    std::vector<char> visited(b.left_count, 0);

    std::function<bool(int)> try_augment = [&](int copy) -> bool {
        for (int x : b.right_adj[copy / 2]) {
            if (visited[x]) continue;
            visited[x] = 1;
            if (match_left[x] == -1 || try_augment(match_left[x])) {
                match_left[x] = copy;
                match_copy[copy] = x;
                return true;
            }
        }
        return false;
    };

    int matched = 0;
    for (int copy = 0; copy < copies; ++copy) {
        std::fill(visited.begin(), visited.end(), 0);
        if (try_augment(copy)) ++matched;
    }

    BigamyHallResult out;
    if (matched == copies) {
        out.success = true;
        out.first_partner.resize(ny);
        out.second_partner.resize(ny);
        for (int y = 0; y < ny; ++y) {
            out.first_partner[y] = match_copy[2 * y];
            out.second_partner[y] = match_copy[2 * y + 1];
        }
        return out;
    }

    // Alternating BFS from every unmatched copy; the reachable copies project
    // to a Hall violator because all reachable X-vertices are matched within
    // the reachable set.
    std::vector<char> copy_reached(copies, 0), x_reached(b.left_count, 0);
    std::vector<int> queue;
    for (int copy = 0; copy < copies; ++copy)
        if (match_copy[copy] == -1) {
            copy_reached[copy] = 1;
            queue.push_back(copy);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int copy = queue[head];
        for (int x : b.right_adj[copy / 2]) {
            if (x_reached[x]) continue;
            x_reached[x] = 1;
            int back = match_left[x];
            if (back != -1 && !copy_reached[back]) {
                copy_reached[back] = 1;
                queue.push_back(back);
            }
        }
    }
    std::vector<char> in_z(ny, 0);
    for (int copy = 0; copy < copies; ++copy)
        if (copy_reached[copy]) in_z[copy / 2] = 1;
    for (int y = 0; y < ny; ++y)
        if (in_z[y]) out.violating_set.push_back(y);
    return out;
}

}  // namespace hambias
