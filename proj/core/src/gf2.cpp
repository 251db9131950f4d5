#include "bitfade/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace bitfade {

LevelVector LevelVector::from_string(std::string_view s) {
    LevelVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("LevelVector: expected '0'/'1', got '" + std::string(1, s[i]) + "'");
        v.bits_[i] = s[i] - '0';
    }
    return v;
}

LevelVector LevelVector::prefix(std::size_t count) const {
    if (count > bits_.size())
        throw std::invalid_argument("LevelVector::prefix: count " + std::to_string(count) +
                                    " exceeds length " + std::to_string(bits_.size()));
    LevelVector v(count);
    for (std::size_t i = 0; i < count; ++i) v.bits_[i] = bits_[i];
    return v;
}

LevelVector LevelVector::operator^(const LevelVector& other) const {
    if (length() != other.length())
        throw std::invalid_argument("LevelVector xor: lengths " + std::to_string(length()) +
                                    " vs " + std::to_string(other.length()));
    LevelVector v(length());
    for (std::size_t i = 0; i < bits_.size(); ++i) v.bits_[i] = bits_[i] ^ other.bits_[i];
    return v;
}

std::string LevelVector::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = '0' + bits_[i];
    return s;
}

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64), words_(rows * words_per_row_, 0) {}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Gf2Matrix Gf2Matrix::from_rows(std::initializer_list<std::string_view> rows) {
    std::size_t nrows = rows.size();
    std::size_t ncols = nrows ? rows.begin()->size() : 0;
    Gf2Matrix m(nrows, ncols);
    std::size_t r = 0;
    for (auto row : rows) {
        if (row.size() != ncols) throw std::invalid_argument("Gf2Matrix::from_rows: ragged rows");
        for (std::size_t c = 0; c < ncols; ++c) {
            if (row[c] == '1')
                m.set(r, c, 1);
            else if (row[c] != '0')
                throw std::invalid_argument("Gf2Matrix::from_rows: expected '0'/'1'");
        }
        ++r;
    }
    return m;
}

void Gf2Matrix::set(std::size_t r, std::size_t c, int value) {
    std::uint64_t& w = words_[r * words_per_row_ + c / 64];
    std::uint64_t bit = std::uint64_t{1} << (c % 64);
    if (value)
        w |= bit;
    else
        w &= ~bit;
}

void Gf2Matrix::xor_row_from(std::size_t dst_row, const Gf2Matrix& other, std::size_t src_row) {
    if (cols_ != other.cols_)
        throw std::invalid_argument("Gf2Matrix::xor_row_from: column mismatch " +
                                    std::to_string(cols_) + " vs " + std::to_string(other.cols_));
    auto dst = row_words(dst_row);
    auto src = other.row_words(src_row);
    for (std::size_t w = 0; w < words_per_row_; ++w) dst[w] ^= src[w];
}

std::size_t gf2_rank(const Gf2Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    std::vector<std::uint64_t> work(m.row_words(0).data(),
                                    m.row_words(0).data() + m.rows() * m.words_per_row());
    const std::size_t wpr = m.words_per_row();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        const std::size_t word = col / 64;
        const std::uint64_t bit = std::uint64_t{1} << (col % 64);
        // lowest unprocessed row with a 1 in this column
        std::size_t pivot = rank;
        while (pivot < m.rows() && !(work[pivot * wpr + word] & bit)) ++pivot;
        if (pivot == m.rows()) continue;
        if (pivot != rank)
            for (std::size_t w = 0; w < wpr; ++w)
                std::swap(work[rank * wpr + w], work[pivot * wpr + w]);
        for (std::size_t r = rank + 1; r < m.rows(); ++r)
            if (work[r * wpr + word] & bit)
                for (std::size_t w = word; w < wpr; ++w) work[r * wpr + w] ^= work[rank * wpr + w];
        ++rank;
    }
    return rank;
}

LevelVector mat_vec_mul(const Gf2Matrix& m, const LevelVector& x) {
    if (x.length() != m.cols())
        throw std::invalid_argument("mat_vec_mul: matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + " but vector length is " +
                                    std::to_string(x.length()));
    std::vector<std::uint64_t> packed(m.words_per_row(), 0);
    for (std::size_t i = 0; i < x.length(); ++i)
        if (x.bit(i + 1)) packed[i / 64] |= std::uint64_t{1} << (i % 64);
    LevelVector y(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row_words(r);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < row.size(); ++w) acc ^= row[w] & packed[w];
        y.set_bit(r + 1, std::popcount(acc) & 1);
    }
    return y;
}

Gf2Matrix shift_truncate_block(std::size_t l, std::size_t m, std::size_t m_hat) {
    if (m > l)
        throw std::invalid_argument("shift_truncate_block: level m=" + std::to_string(m) +
                                    " exceeds input length l=" + std::to_string(l));
    if (m > m_hat)
        throw std::invalid_argument("shift_truncate_block: level m=" + std::to_string(m) +
                                    " exceeds alignment m_hat=" + std::to_string(m_hat));
    Gf2Matrix block(m_hat, l);
    // row i (1-based) reads input level i - (m_hat - m)
    const std::size_t shift = m_hat - m;
    for (std::size_t i = 1; i <= m; ++i) block.set(shift + i - 1, i - 1, 1);
    return block;
}

Gf2Matrix hconcat(std::span<const Gf2Matrix> blocks) {
    if (blocks.empty()) return {};
    const std::size_t rows = blocks.front().rows();
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        if (b.rows() != rows)
            throw std::invalid_argument("hconcat: row mismatch " + std::to_string(b.rows()) +
                                        " vs " + std::to_string(rows));
        cols += b.cols();
    }
    Gf2Matrix m(rows, cols);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < b.cols(); ++c)
                if (b.at(r, c)) m.set(r, offset + c, 1);
        offset += b.cols();
    }
    return m;
}

Gf2Eliminator::Gf2Eliminator(std::size_t cols, std::size_t aug_cols)
    : cols_(cols),
      aug_cols_(aug_cols),
      main_words_((cols + 63) / 64),
      row_words_(main_words_ + (aug_cols + 63) / 64),
      pivot_row_(cols, -1) {}

bool Gf2Eliminator::add_row(std::span<const std::uint64_t> row) {
    if (row.size() != row_words_)
        throw std::invalid_argument("Gf2Eliminator::add_row: expected " + std::to_string(row_words_) +
                                    " words, got " + std::to_string(row.size()));
    std::vector<std::uint64_t> work(row.begin(), row.end());
    for (;;) {
        // leading set bit among the main columns
        std::size_t lead = cols_;
        for (std::size_t w = 0; w < main_words_; ++w) {
            if (work[w]) {
                lead = w * 64 + std::countr_zero(work[w]);
                break;
            }
        }
        if (lead >= cols_) return false;  // dependent (aug bits of a dependent row are unused)
        const std::int32_t slot = pivot_row_[lead];
        if (slot < 0) {
            pivot_row_[lead] = static_cast<std::int32_t>(basis_pivot_.size());
            basis_pivot_.push_back(static_cast<std::uint32_t>(lead));
            basis_.insert(basis_.end(), work.begin(), work.end());
            ++rank_;
            return true;
        }
        const std::uint64_t* b = basis_.data() + static_cast<std::size_t>(slot) * row_words_;
        for (std::size_t w = lead / 64; w < row_words_; ++w) work[w] ^= b[w];
    }
}

std::vector<std::uint64_t> Gf2Eliminator::solve_unique() const {
    if (!full_rank()) throw std::logic_error("Gf2Eliminator::solve_unique: system is not full rank");
    if (aug_cols_ == 0) throw std::logic_error("Gf2Eliminator::solve_unique: no augmented column");
    // Back-substitution, highest pivot first. Basis rows are only
    // forward-reduced, so each row may still reference later pivots; those
    // unknowns are already solved when the row is processed, and columns
    // below the pivot carry solution bits of 0.
    std::vector<std::size_t> order(rank_);
    for (std::size_t i = 0; i < rank_; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return basis_pivot_[a] > basis_pivot_[b]; });
    std::vector<std::uint64_t> solution((cols_ + 63) / 64, 0);
    for (std::size_t slot : order) {
        const std::uint64_t* row = basis_.data() + slot * row_words_;
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < main_words_; ++w) acc ^= row[w] & solution[w];
        const int value = (std::popcount(acc) & 1) ^ static_cast<int>(row[main_words_] & 1u);
        const std::uint32_t pivot = basis_pivot_[slot];
        if (value) solution[pivot / 64] |= std::uint64_t{1} << (pivot % 64);
    }
    return solution;
}

}  // namespace bitfade
