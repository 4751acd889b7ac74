#include "edgesync/graph.hpp"

#include <stdexcept>
#include <string>

namespace edgesync {

CompleteGraphModel complete_graph(std::size_t n) {
    if (n < 2) throw std::invalid_argument("complete_graph: need at least 2 agents, got " + std::to_string(n));

    CompleteGraphModel g;
    g.n_ = n;
    g.m_ = n * (n - 1);

    for (std::size_t j = 2; j <= n; ++j) g.labels_.push_back({g.labels_.size() + 1, 1, j});
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (i == j || i == 1) continue;  // tail 1 edges are the tree
            g.labels_.push_back({g.labels_.size() + 1, i, j});
        }
    }

    g.e_bar_ = Matrix(n, g.m_);
    g.e_odot_ = Matrix(n, g.m_);
    for (const EdgeLabel& e : g.labels_) {
        g.e_bar_(e.tail - 1, e.index - 1) = 1.0;
        g.e_bar_(e.head - 1, e.index - 1) = -1.0;
        g.e_odot_(e.head - 1, e.index - 1) = -1.0;
    }

    const std::size_t nt = n - 1;
    g.e_tree_ = g.e_bar_.block(0, 0, n, nt);
    g.e_cotree_ = g.e_bar_.block(0, nt, n, g.m_ - nt);

    const Matrix ett = g.e_tree_.transpose();
    g.t_ = pinv(ett * g.e_tree_) * (ett * g.e_cotree_);
    g.r_ = hcat(Matrix::identity(nt), g.t_);
    g.e_pinv_ = pinv(g.e_bar_);
    g.et_pinv_ = g.e_pinv_.transpose();
    g.b_ = ett * g.e_odot_;
    return g;
}

std::size_t CompleteGraphModel::edge_index(std::size_t tail, std::size_t head) const {
    if (tail == head || tail < 1 || head < 1 || tail > n_ || head > n_)
        throw std::invalid_argument("edge_index: no such edge");
    if (tail == 1) return head - 2;
    // Rows for tails 2..N each hold N-1 heads, skipping the tail itself.
    const std::size_t row_start = (n_ - 1) * (tail - 1);
    return row_start + (head < tail ? head - 1 : head - 2);
}

Matrix edge_laplacian(const CompleteGraphModel& model, std::span<const double> weights) {
    if (weights.size() != model.edges()) throw DimensionError("edge_laplacian: weight vector has wrong length");
    return model.reduced_input() * Matrix::diagonal(weights) * model.r_matrix().transpose();
}

Vector node_to_edge(const CompleteGraphModel& model, std::span<const double> x) {
    if (x.size() != model.agents()) throw DimensionError("node_to_edge: state has wrong length");
    Vector z(model.edges());
    for (const EdgeLabel& e : model.labels()) z[e.index - 1] = x[e.tail - 1] - x[e.head - 1];
    return z;
}

Vector tree_to_edge(const CompleteGraphModel& model, std::span<const double> z_tree) {
    if (z_tree.size() != model.tree_edges()) throw DimensionError("tree_to_edge: tree state has wrong length");
    return model.r_matrix().transpose() * z_tree;
}

Vector node_to_tree(const CompleteGraphModel& model, std::span<const double> x) {
    if (x.size() != model.agents()) throw DimensionError("node_to_tree: state has wrong length");
    Vector zt(model.tree_edges());
    for (std::size_t j = 0; j < zt.size(); ++j) zt[j] = x[0] - x[j + 1];
    return zt;
}

}  // namespace edgesync
