/*
   Copyright 2026 The toomcook Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <vector>

#include "toomcook/errors.hpp"
#include "toomcook/rational.hpp"

namespace toomcook {

enum class DotOrder { linear, huffman };

/// Summation tree for one matrix row. Leaves are (column, coefficient) for
/// the nonzero coefficients; internal nodes are additions. An all-zero row
/// gives an empty tree.
struct EvalTree {
    struct Node {
        int left = -1;
        int right = -1;
        int column = -1; // leaves only
        Rational coefficient;
        Rational weight; // |coefficient| for leaves, sum of children otherwise

        [[nodiscard]] bool is_leaf() const { return left < 0; }
    };

    std::vector<Node> nodes;
    int root = -1;

    [[nodiscard]] bool empty() const { return root < 0; }

    [[nodiscard]] std::size_t leaf_count() const {
        return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.is_leaf(); }));
    }

    /// Additions on the longest root-to-leaf path.
    [[nodiscard]] int depth() const {
        if (empty())
            return 0;
        return depth_of(root);
    }

    /// Leaf columns in evaluation (left-to-right) order.
    [[nodiscard]] std::vector<int> leaf_columns() const {
        std::vector<int> out;
        if (!empty())
            collect(root, out);
        return out;
    }

  private:
    [[nodiscard]] int depth_of(int id) const {
        const Node& n = nodes[static_cast<std::size_t>(id)];
        if (n.is_leaf())
            return 0;
        return 1 + std::max(depth_of(n.left), depth_of(n.right));
    }
    void collect(int id, std::vector<int>& out) const {
        const Node& n = nodes[static_cast<std::size_t>(id)];
        if (n.is_leaf()) {
            out.push_back(n.column);
            return;
        }
        collect(n.left, out);
        collect(n.right, out);
    }
};

/// Left-to-right accumulation over the nonzero coefficients.
inline EvalTree linear_order(std::span<const Rational> row) {
    EvalTree t;
    for (std::size_t c = 0; c < row.size(); ++c) {
        if (row[c].is_zero())
            continue;
        t.nodes.push_back({-1, -1, static_cast<int>(c), row[c], row[c].abs()});
        const int leaf = static_cast<int>(t.nodes.size()) - 1;
        if (t.root < 0) {
            t.root = leaf;
            continue;
        }
        const Rational w = t.nodes[static_cast<std::size_t>(t.root)].weight + t.nodes.back().weight;
        t.nodes.push_back({t.root, leaf, -1, Rational(), w});
        t.root = static_cast<int>(t.nodes.size()) - 1;
    }
    return t;
}

/// Huffman tree over |coefficient| weights; zero coefficients are skipped.
///
/// Ties on weight: a leaf is taken before an internal node; two leaves by
/// ascending rank (rank[c] defaults to the column index c); two internal
/// nodes by creation order. The two nodes popped first become the left and
/// right child of the new node.
inline EvalTree huffman_order(std::span<const Rational> row, std::span<const int> rank = {}) {
    if (!rank.empty() && rank.size() != row.size())
        throw ValidationError("huffman_order: rank size differs from row size");
    EvalTree t;
    for (std::size_t c = 0; c < row.size(); ++c)
        if (!row[c].is_zero())
            t.nodes.push_back({-1, -1, static_cast<int>(c), row[c], row[c].abs()});
    if (t.nodes.empty())
        return t;

    auto key_of = [&](int id) {
        const auto& n = t.nodes[static_cast<std::size_t>(id)];
        return rank.empty() ? n.column : rank[static_cast<std::size_t>(n.column)];
    };
    // Returns true when a should be popped after b.
    auto later = [&](int a, int b) {
        const auto& na = t.nodes[static_cast<std::size_t>(a)];
        const auto& nb = t.nodes[static_cast<std::size_t>(b)];
        if (na.weight != nb.weight)
            return na.weight > nb.weight;
        if (na.is_leaf() != nb.is_leaf())
            return !na.is_leaf();
        if (na.is_leaf()) {
            const int ka = key_of(a);
            const int kb = key_of(b);
            if (ka != kb)
                return ka > kb;
        }
        return a > b;
    };
    std::priority_queue<int, std::vector<int>, decltype(later)> heap(later);
    for (int i = 0; i < static_cast<int>(t.nodes.size()); ++i)
        heap.push(i);
    while (heap.size() > 1) {
        const int a = heap.top();
        heap.pop();
        const int b = heap.top();
        heap.pop();
        const Rational w = t.nodes[static_cast<std::size_t>(a)].weight + t.nodes[static_cast<std::size_t>(b)].weight;
        t.nodes.push_back({a, b, -1, Rational(), w});
        heap.push(static_cast<int>(t.nodes.size()) - 1);
    }
    t.root = heap.top();
    return t;
}

inline EvalTree make_tree(std::span<const Rational> row, DotOrder order, std::span<const int> rank = {}) {
    return order == DotOrder::huffman ? huffman_order(row, rank) : linear_order(row);
}

/// A tree flattened to postfix form for fast evaluation in precision T.
/// Coefficients are rounded to nearest T once, at compile time.
template <std::floating_point T>
class DotProgram {
  public:
    struct Op {
        int column; // -1: add the top two stack entries
        T coefficient;
    };

    DotProgram() = default;
    explicit DotProgram(const EvalTree& tree) {
        if (!tree.empty())
            emit(tree, tree.root);
        int depth = 0;
        for (const auto& op : ops_) {
            depth += op.column >= 0 ? 1 : -1;
            max_stack_ = std::max(max_stack_, depth);
        }
        if (max_stack_ > kMaxStack)
            throw ValidationError("DotProgram: row too long");
    }

    [[nodiscard]] const std::vector<Op>& ops() const { return ops_; }
    [[nodiscard]] bool empty() const { return ops_.empty(); }

    /// Products at leaves, additions along the tree, every operation rounded in T.
    template <typename Get>
    [[nodiscard]] T evaluate(Get&& get) const {
        if (ops_.empty())
            return T(0);
        T stack[kMaxStack];
        T* top = stack;
        for (const auto& op : ops_) {
            if (op.column >= 0) {
                *top++ = op.coefficient * static_cast<T>(get(op.column));
            } else {
                --top;
                top[-1] = top[-1] + top[0];
            }
        }
        return stack[0];
    }

    [[nodiscard]] T evaluate(std::span<const T> v) const {
        return evaluate([&](int c) { return v[static_cast<std::size_t>(c)]; });
    }

  private:
    static constexpr int kMaxStack = 128;

    void emit(const EvalTree& tree, int id) {
        const auto& n = tree.nodes[static_cast<std::size_t>(id)];
        if (n.is_leaf()) {
            ops_.push_back({n.column, to_nearest<T>(n.coefficient)});
            return;
        }
        emit(tree, n.left);
        emit(tree, n.right);
        ops_.push_back({-1, T(0)});
    }

    std::vector<Op> ops_;
    int max_stack_ = 0;
};

/// Evaluates the dot product of the tree's row with v in precision T.
template <std::floating_point T>
T dot_with_order(const EvalTree& tree, std::span<const T> v) {
    for (const auto& n : tree.nodes)
        if (n.is_leaf() && static_cast<std::size_t>(n.column) >= v.size())
            throw ValidationError("dot_with_order: vector shorter than the row");
    return DotProgram<T>(tree).evaluate(v);
}

} // namespace toomcook
