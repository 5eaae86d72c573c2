#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace geoweb {

/// Dense square-index array: every slot ranges over 0..dim-1.
/// Used for Christoffel symbols (rank 3) and curvature (rank 2..4).
template <class T>
class Tensor {
public:
    Tensor() = default;
    Tensor(int dim, int rank, const T& fill = T{}) : dim_(dim), rank_(rank)
    {
        std::size_t count = 1;
        for (int r = 0; r < rank; ++r) count *= static_cast<std::size_t>(dim);
        data_.assign(count, fill);
    }

    int dim() const noexcept { return dim_; }
    int rank() const noexcept { return rank_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    template <class... Idx>
    T& operator()(Idx... idx) { return data_[offset(idx...)]; }

    template <class... Idx>
    const T& operator()(Idx... idx) const { return data_[offset(idx...)]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    /// Slot values of a flat position, slowest index first.
    std::vector<int> unflatten(std::size_t pos) const
    {
        std::vector<int> idx(static_cast<std::size_t>(rank_));
        for (int r = rank_ - 1; r >= 0; --r) {
            idx[static_cast<std::size_t>(r)] = static_cast<int>(pos % static_cast<std::size_t>(dim_));
            pos /= static_cast<std::size_t>(dim_);
        }
        return idx;
    }

private:
    template <class... Idx>
    std::size_t offset(Idx... idx) const
    {
        assert(sizeof...(Idx) == static_cast<std::size_t>(rank_));
        std::size_t pos = 0;
        ((pos = pos * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
        return pos;
    }

    int dim_ = 0;
    int rank_ = 0;
    std::vector<T> data_;
};

} // namespace geoweb
