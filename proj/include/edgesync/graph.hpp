#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "edgesync/numerics.hpp"

namespace edgesync {

/// Directed edge e_k = (tail, head): the head agent receives the tail's state.
/// Indices and node ids are 1-based to match the usual labelling.
struct EdgeLabel {
    std::size_t index;
    std::size_t tail;
    std::size_t head;

    friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

/// Complete directed graph on N agents together with every fixed matrix of the
/// edge-agreement reduction.
///
/// Edge order: the star (1,2),(1,3),...,(1,N) first, which is the spanning
/// tree, then every remaining ordered pair lexicographically by (tail, head).
/// Incidence sign convention: +1 at the tail, -1 at the head, so
/// z_k = x_tail - x_head.
class CompleteGraphModel {
public:
    std::size_t agents() const noexcept { return n_; }
    std::size_t edges() const noexcept { return m_; }
    std::size_t tree_edges() const noexcept { return n_ - 1; }

    const std::vector<EdgeLabel>& labels() const noexcept { return labels_; }

    const Matrix& incidence() const noexcept { return e_bar_; }            // N x M
    const Matrix& in_incidence() const noexcept { return e_odot_; }        // N x M
    const Matrix& tree_incidence() const noexcept { return e_tree_; }      // N x (N-1)
    const Matrix& cotree_incidence() const noexcept { return e_cotree_; }  // N x (M-N+1)
    const Matrix& t_matrix() const noexcept { return t_; }                 // (N-1) x (M-N+1)
    const Matrix& r_matrix() const noexcept { return r_; }                 // (N-1) x M
    const Matrix& incidence_pinv() const noexcept { return e_pinv_; }      // M x N, pinv(E)
    /// pinv(E^T) = pinv(E)^T, N x M; maps edge states back to the minimum-norm
    /// node vector.
    const Matrix& incidence_transpose_pinv() const noexcept { return et_pinv_; }
    /// E_T^T * E_odot, (N-1) x M; the input matrix of the reduced edge system.
    const Matrix& reduced_input() const noexcept { return b_; }

    /// Index of edge (tail, head) in the canonical order, 0-based.
    std::size_t edge_index(std::size_t tail, std::size_t head) const;

    friend CompleteGraphModel complete_graph(std::size_t n);

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<EdgeLabel> labels_;
    Matrix e_bar_, e_odot_, e_tree_, e_cotree_, t_, r_, e_pinv_, et_pinv_, b_;
};

/// Builds the complete-graph model for n >= 2 agents; throws
/// std::invalid_argument otherwise.
CompleteGraphModel complete_graph(std::size_t n);

/// L_e = E_T^T E_odot diag(w) R^T.
Matrix edge_laplacian(const CompleteGraphModel& model, std::span<const double> weights);

/// z = E^T x.
Vector node_to_edge(const CompleteGraphModel& model, std::span<const double> x);

/// z = R^T z_T.
Vector tree_to_edge(const CompleteGraphModel& model, std::span<const double> z_tree);

/// E_T^T x, the tree-edge states of a node vector.
Vector node_to_tree(const CompleteGraphModel& model, std::span<const double> x);

}  // namespace edgesync
