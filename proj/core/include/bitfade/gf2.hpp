#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Bit-vector and binary-matrix algebra over GF(2): level vectors with
// most-significant-bit-first indexing, bit-packed matrices, rank by
// forward elimination, and the shift/truncation blocks that model a
// faded edge.

namespace bitfade {

// Ordered sequence of bit levels. Index 1 is the most significant bit.
class LevelVector {
public:
    LevelVector() = default;
    explicit LevelVector(std::size_t length) : bits_(length, 0) {}

    // Parses "10110" with the leftmost character as bit 1 (MSB).
    static LevelVector from_string(std::string_view s);

    std::size_t length() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    // 1-based level access; level 1 is the MSB.
    int bit(std::size_t level) const { return bits_[level - 1]; }
    void set_bit(std::size_t level, int value) { bits_[level - 1] = value ? 1 : 0; }

    // First `count` levels, in order.
    LevelVector prefix(std::size_t count) const;

    LevelVector operator^(const LevelVector& other) const;
    bool operator==(const LevelVector& other) const = default;

    std::string to_string() const;

private:
    std::vector<std::uint8_t> bits_;
};

// Binary matrix with 64-bit packed rows.
class Gf2Matrix {
public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t rows, std::size_t cols);

    static Gf2Matrix identity(std::size_t n);
    // One string per row, e.g. {"110", "011"}.
    static Gf2Matrix from_rows(std::initializer_list<std::string_view> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return words_per_row_; }

    int at(std::size_t r, std::size_t c) const {
        return (words_[r * words_per_row_ + c / 64] >> (c % 64)) & 1u;
    }
    void set(std::size_t r, std::size_t c, int value);
    void flip(std::size_t r, std::size_t c) {
        words_[r * words_per_row_ + c / 64] ^= std::uint64_t{1} << (c % 64);
    }

    std::span<const std::uint64_t> row_words(std::size_t r) const {
        return {words_.data() + r * words_per_row_, words_per_row_};
    }
    std::span<std::uint64_t> row_words(std::size_t r) {
        return {words_.data() + r * words_per_row_, words_per_row_};
    }

    // dst_row ^= src row of `other`, where both matrices share a column count.
    void xor_row_from(std::size_t dst_row, const Gf2Matrix& other, std::size_t src_row);

    bool operator==(const Gf2Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> words_;
};

// GF(2) rank by forward elimination on packed rows. Pivot choice is the
// lowest row index with a 1 in the current column, so results are
// reproducible. Empty matrices have rank 0.
std::size_t gf2_rank(const Gf2Matrix& m);

// y = M x over GF(2). Throws std::invalid_argument on dimension mismatch.
LevelVector mat_vec_mul(const Gf2Matrix& m, const LevelVector& x);

// The m_hat x l block mapping a transmitter's l input levels to its
// contribution at a receiver aligned to m_hat rows: the top (m_hat - m)
// rows are zero and the remaining rows select input levels 1..m.
// Requires 0 <= m <= l and m <= m_hat.
Gf2Matrix shift_truncate_block(std::size_t l, std::size_t m, std::size_t m_hat);

// Horizontal concatenation; all blocks must share a row count.
Gf2Matrix hconcat(std::span<const Gf2Matrix> blocks);

// Incremental row-reduction basis over GF(2), with an optional augmented
// tail carried through the elimination (for linear solves). Rows are fed
// one at a time; the basis keeps one row per pivot column.
class Gf2Eliminator {
public:
    explicit Gf2Eliminator(std::size_t cols, std::size_t aug_cols = 0);

    // Reduces `row` (packed cols then aug bits, as produced by pack_row)
    // against the basis and inserts it if independent. Returns true if
    // the rank grew.
    bool add_row(std::span<const std::uint64_t> row);

    std::size_t rank() const { return rank_; }
    std::size_t cols() const { return cols_; }
    bool full_rank() const { return rank_ == cols_; }

    std::size_t row_words() const { return row_words_; }

    // Unique solution of the accumulated system (requires full rank and
    // aug_cols == 1): bit i of the result is the value of unknown i.
    std::vector<std::uint64_t> solve_unique() const;

private:
    std::size_t cols_;
    std::size_t aug_cols_;
    std::size_t main_words_;
    std::size_t row_words_;
    std::size_t rank_ = 0;
    std::vector<std::int32_t> pivot_row_;     // column -> basis slot or -1
    std::vector<std::uint64_t> basis_;        // packed basis rows
    std::vector<std::uint32_t> basis_pivot_;  // basis slot -> pivot column
};

}  // namespace bitfade
