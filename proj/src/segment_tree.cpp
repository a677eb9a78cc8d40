#include "rcmc/segment_tree.hpp"

#include <bit>
#include <string>

#include "rcmc/errors.hpp"

namespace rcmc
{

namespace
{

void check_leaf(double value)
{
    if(!(value >= 0.0)) {
        throw Error(ErrorKind::NegativeLeaf,
                    "leaf value " + std::to_string(value));
    }
}

}  // namespace

NonnegSegmentTree::NonnegSegmentTree(std::span<const double> values)
  : size_(values.size()),
    capacity_(values.empty() ? 0 : std::bit_ceil(values.size())),
    nodes_(2 * capacity_, 0.0)
{
    for(std::size_t i = 0; i < size_; ++i) {
        check_leaf(values[i]);
        nodes_[capacity_ + i] = values[i];
    }
    for(std::size_t i = capacity_ - 1; i >= 1 && capacity_ > 0; --i) {
        nodes_[i] = nodes_[2 * i] + nodes_[2 * i + 1];
    }
}

double NonnegSegmentTree::sum(std::size_t first, std::size_t last) const
{
    if(first > last || last > size_) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "range [" + std::to_string(first) + ", "
                        + std::to_string(last) + ") outside size "
                        + std::to_string(size_));
    }
    visits_ = 0;
    double left  = 0.0;
    double right = 0.0;
    std::size_t l = first + capacity_;
    std::size_t r = last + capacity_;
    while(l < r) {
        if(l & 1) {
            left += nodes_[l++];
            ++visits_;
        }
        if(r & 1) {
            right = nodes_[--r] + right;
            ++visits_;
        }
        l >>= 1;
        r >>= 1;
    }
    return left + right;
}

double NonnegSegmentTree::leaf(std::size_t i) const
{
    if(i >= size_) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "leaf " + std::to_string(i) + " outside size "
                        + std::to_string(size_));
    }
    return nodes_[capacity_ + i];
}

void NonnegSegmentTree::update(std::size_t i, double value)
{
    if(i >= size_) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "leaf " + std::to_string(i) + " outside size "
                        + std::to_string(size_));
    }
    check_leaf(value);
    std::size_t node = capacity_ + i;
    nodes_[node]     = value;
    visits_          = 1;
    for(node >>= 1; node >= 1; node >>= 1) {
        nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
        ++visits_;
    }
}

}  // namespace rcmc
