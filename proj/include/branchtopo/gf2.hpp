#pragma once

// Dense linear algebra over the two-element field.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace branchtopo::gf2 {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t bits) : words_((bits + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
    [[nodiscard]] bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

    BitVector& operator^=(const BitVector& other)
    {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }

    /// Index of the highest set bit, or -1 for the zero vector.
    [[nodiscard]] long highest() const
    {
        for (std::size_t w = words_.size(); w-- > 0;) {
            if (words_[w] != 0) {
                return static_cast<long>(w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[w])));
            }
        }
        return -1;
    }

    [[nodiscard]] bool none() const { return highest() < 0; }

private:
    std::vector<std::uint64_t> words_;
};

/// Row-echelon basis keyed by leading bit; insert() is one elimination step.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t bits) : pivots_(bits), present_(bits, false) {}

    /// Reduces v against the basis and keeps the remainder. Returns true when
    /// v was independent (the rank grew).
    bool insert(BitVector v)
    {
        for (long p = v.highest(); p >= 0; p = v.highest()) {
            const auto i = static_cast<std::size_t>(p);
            if (!present_[i]) {
                pivots_[i] = std::move(v);
                present_[i] = true;
                ++rank_;
                return true;
            }
            v ^= pivots_[i];
        }
        return false;
    }

    [[nodiscard]] std::size_t rank() const { return rank_; }

private:
    std::vector<BitVector> pivots_;
    std::vector<bool> present_;
    std::size_t rank_ = 0;
};

/// Rank of a set of column vectors, by fresh elimination.
inline std::size_t rank(const std::vector<BitVector>& columns, std::size_t bits)
{
    EchelonBasis basis(bits);
    for (const BitVector& c : columns) {
        basis.insert(c);
    }
    return basis.rank();
}

/// Basis of the kernel of the linear map whose i-th column image is columns[i];
/// vectors live in a space of dimension columns.size().
inline std::vector<BitVector> kernel_basis(const std::vector<BitVector>& columns, std::size_t image_bits)
{
    const std::size_t n = columns.size();
    // Track each column's combination alongside its reduced image.
    std::vector<BitVector> image_pivot(image_bits);
    std::vector<BitVector> combo_pivot(image_bits);
    std::vector<bool> present(image_bits, false);
    std::vector<BitVector> kernel;
    for (std::size_t j = 0; j < n; ++j) {
        BitVector image = columns[j];
        BitVector combo(n);
        combo.set(j);
        for (long p = image.highest(); p >= 0; p = image.highest()) {
            const auto i = static_cast<std::size_t>(p);
            if (!present[i]) {
                break;
            }
            image ^= image_pivot[i];
            combo ^= combo_pivot[i];
        }
        const long p = image.highest();
        if (p < 0) {
            kernel.push_back(std::move(combo));
        } else {
            const auto i = static_cast<std::size_t>(p);
            image_pivot[i] = std::move(image);
            combo_pivot[i] = std::move(combo);
            present[i] = true;
        }
    }
    return kernel;
}

}  // namespace branchtopo::gf2
