#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace liefield {

// Dense row-major array with a runtime shape (last index fastest).
template <class T>
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, const T& fill = T{})
        : shape_(std::move(shape)), data_(count(shape_), fill) {}

    [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t rank() const noexcept { return shape_.size(); }
    [[nodiscard]] std::size_t dim(std::size_t i) const { return shape_.at(i); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    template <class... I>
    T& operator()(I... idx) {
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }
    template <class... I>
    const T& operator()(I... idx) const {
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }

    T& flat(std::size_t i) { return data_[i]; }
    const T& flat(std::size_t i) const { return data_[i]; }
    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    // Multi-index of a flat position.
    [[nodiscard]] std::vector<std::size_t> unravel(std::size_t flat_index) const {
        std::vector<std::size_t> idx(shape_.size());
        for (std::size_t d = shape_.size(); d-- > 0;) {
            idx[d] = flat_index % shape_[d];
            flat_index /= shape_[d];
        }
        return idx;
    }

private:
    static std::size_t count(const std::vector<std::size_t>& s) {
        return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
    }

    std::size_t offset(std::initializer_list<std::size_t> idx) const {
        assert(idx.size() == shape_.size());
        std::size_t off = 0;
        std::size_t d = 0;
        for (std::size_t i : idx) {
            assert(i < shape_[d]);
            off = off * shape_[d] + i;
            ++d;
        }
        return off;
    }

    std::vector<std::size_t> shape_;
    std::vector<T> data_;
};

inline double max_abs(const Tensor<double>& t) {
    double m = 0.0;
    for (double v : t) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace liefield
