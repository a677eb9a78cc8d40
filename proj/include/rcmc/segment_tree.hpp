#ifndef RCMC_SEGMENT_TREE_HPP
#define RCMC_SEGMENT_TREE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rcmc
{

/// Segment tree over (R_{>=0}, +) with 0 adjoined as the identity.
///
/// Leaves live in the second half of a power-of-two padded array and every
/// internal node is the sum of its two children. The only arithmetic the
/// type performs is addition of nonnegative numbers; there is no
/// subtraction path, so range sums never suffer cancellation.
///
/// Ranges are 0-based and half-open: sum(first, last) folds leaves
/// first..last-1 and sum(i, i) is 0.
class NonnegSegmentTree
{
public:
    NonnegSegmentTree() = default;

    /// Theta(m) construction. Throws NegativeLeaf on a negative or NaN value.
    explicit NonnegSegmentTree(std::span<const double> values);

    std::size_t size() const noexcept { return size_; }

    double sum(std::size_t first, std::size_t last) const;
    double total() const noexcept { return capacity_ ? nodes_[1] : 0.0; }
    double leaf(std::size_t i) const;

    void update(std::size_t i, double value);

    /// Nodes read or written by the most recent sum/update call.
    std::size_t last_visits() const noexcept { return visits_; }

private:
    std::size_t size_     = 0;
    std::size_t capacity_ = 0;  // power of two >= size_
    std::vector<double> nodes_;
    mutable std::size_t visits_ = 0;
};

}  // namespace rcmc

#endif
