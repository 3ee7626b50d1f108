#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mlc/data.hpp"
#include "mlc/linear.hpp"
#include "mlc/matrix.hpp"

namespace mlc {

using ParentSets = std::vector<std::vector<std::size_t>>;

/// Symmetric L x L matrix with a zero diagonal. Stored densely so that a
/// label's row is contiguous.
class MiMatrix {
public:
    MiMatrix() = default;
    explicit MiMatrix(std::size_t l) : l_(l), values_(l * l, 0.0) {}

    std::size_t size() const noexcept { return l_; }

    double operator()(std::size_t a, std::size_t b) const { return values_[a * l_ + b]; }
    void set(std::size_t a, std::size_t b, double value) {
        if (a == b) return;
        values_[a * l_ + b] = value;
        values_[b * l_ + a] = value;
    }

private:
    std::size_t l_ = 0;
    std::vector<double> values_;
};

/// Parent patterns of the directed trellis. Positions are laid out row by
/// row, `width` per row; the last row may be partial.
enum class ParentPattern {
    LeftAbove,              // (r, c-1), (r-1, c)
    LeftAboveDiagonal,      // (r, c-1), (r-1, c-1), (r-1, c)
    LeftAboveBothDiagonals  // (r, c-1), (r-1, c-1), (r-1, c), (r-1, c+1)
};

ParentPattern parse_pattern(std::string_view name);
std::string_view pattern_name(ParentPattern pattern);

/// Trellis positions (not labels) that feed `position`, in pattern order.
std::vector<std::size_t> trellis_parent_positions(std::size_t position, std::size_t width,
                                                  ParentPattern pattern);

/// Per-label parent sets plus a topological order.
struct DirectedStructure {
    ParentSets parents;
    std::vector<std::size_t> topo_order;

    std::size_t l() const noexcept { return parents.size(); }

    /// Computes a topological order (smallest ready index first). Throws
    /// InputError on a cycle or an out-of-range parent.
    static DirectedStructure from_parents(ParentSets parents);
};

struct TrellisStructure {
    std::vector<std::size_t> order;  // order[position] = label
    std::size_t width = 1;
    ParentPattern pattern = ParentPattern::LeftAbove;
    ParentSets parents;              // indexed by label

    std::size_t l() const noexcept { return order.size(); }
    DirectedStructure directed() const;
    /// Directionality dropped and symmetrized.
    ParentSets neighbors() const;
};

std::size_t default_trellis_width(std::size_t l);

MiMatrix mutual_information_matrix(const BitMatrix& labels);

/// Places labels into trellis positions by greedy MI hill climbing. The
/// first position gets the first label of a seeded shuffle; every later
/// position gets the unplaced label maximizing the summed MI with that
/// position's already-placed parents. Ties go to the label earliest in the
/// shuffle.
TrellisStructure build_trellis(const MiMatrix& mi, std::size_t width, ParentPattern pattern,
                               std::uint64_t seed);

/// Frequent-sets style structure from a label (or residual) matrix: under a
/// seeded random ordering, each label takes as parents its `max_parents`
/// highest-MI predecessors whose MI exceeds `threshold`.
DirectedStructure fs_structure(const BitMatrix& labels, std::size_t max_parents,
                               double threshold, std::uint64_t seed = 0);

/// Same edge rule applied to the residual-error indicators of L
/// independently trained base classifiers.
DirectedStructure lead_structure(const Dataset& dataset, const SgdConfig& base,
                                 std::size_t max_parents, double threshold,
                                 std::uint64_t seed = 0);

/// Error-indicator matrix e(n, l) = [y_l != yhat_l] from independent models.
BitMatrix residual_errors(const Dataset& dataset, const SgdConfig& base);

/// Maximum-weight spanning tree of the MI graph, rooted at a seeded random
/// label with edges pointing away from the root.
DirectedStructure spanning_tree_structure(const MiMatrix& mi, std::uint64_t seed);

DirectedStructure truth_structure(const GroundTruthGraph& truth);

/// F-measure between the undirected edge sets of two structures.
double edge_f_measure(const DirectedStructure& predicted, const GroundTruthGraph& truth);
double edge_f_measure(const DirectedStructure& predicted, const DirectedStructure& truth);

/// `child: parent,parent` lines, one per label in index order.
std::string format_adjacency(const ParentSets& parents);
ParentSets parse_adjacency(std::string_view text);

}  // namespace mlc
