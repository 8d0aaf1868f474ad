#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "tmk/binreal.hpp"
#include "tmk/core.hpp"

// Thue-Morse sequence t_n, evil/odious integer streams, and the 8-block /
// quadruple combinatorics of the Thue-Morse real.
//
// Index convention used everywhere in this library: (n_k) and (m_k) are
// 1-based with n_1 = 0 and m_1 = 1, so n_k = 2(k-1) + t_{k-1} and
// m_k = 2(k-1) + 1 - t_{k-1}.
namespace tmk::thue {

/// t_n = s_2(n) mod 2.
inline int tm_bit(std::uint64_t n) { return std::popcount(n) & 1; }

/// k-th evil number (even digit sum), k >= 1.
inline std::uint64_t evil(std::uint64_t k) { return 2 * (k - 1) + tm_bit(k - 1); }

/// k-th odious number (odd digit sum), k >= 1.
inline std::uint64_t odious(std::uint64_t k) { return 2 * (k - 1) + 1 - tm_bit(k - 1); }

/// Streaming cursor over the evil (or odious) integers. O(1) per step: within
/// each pair (2m, 2m+1) exactly one member is evil, selected by t_m, and t_m
/// is updated incrementally from the trailing-zero count.
class EvilCursor {
  public:
    explicit EvilCursor(bool odious_stream = false)
        : odious_(odious_stream), k_(1), t_(0) {}

    std::uint64_t index() const { return k_; }
    std::uint64_t value() const {
        return 2 * (k_ - 1) + (odious_ ? 1 - t_ : t_);
    }
    void advance() {
        // t_{k} from t_{k-1}: popcount changes by 1 - (trailing ones of k-1).
        const std::uint64_t k = k_;
        t_ ^= static_cast<int>((std::countr_zero(k) + 1) & 1);
        ++k_;
    }
    std::uint64_t next() {
        const std::uint64_t v = value();
        advance();
        return v;
    }

  private:
    bool odious_;
    std::uint64_t k_;  // 1-based index of the value about to be emitted
    int t_;            // t_{k_-1}
};

inline std::vector<std::uint64_t> evil_stream(std::uint64_t count) {
    if (count < 1) throw SizeError("evil_stream: count >= 1");
    std::vector<std::uint64_t> out;
    out.reserve(count);
    EvilCursor c;
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(c.next());
    return out;
}

inline std::vector<std::uint64_t> odious_stream(std::uint64_t count) {
    if (count < 1) throw SizeError("odious_stream: count >= 1");
    std::vector<std::uint64_t> out;
    out.reserve(count);
    EvilCursor c(true);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(c.next());
    return out;
}

/// m_k via the pairing with n_k.
inline std::uint64_t partner_rule(std::uint64_t k) {
    if (k < 1) throw SizeError("partner_rule: k >= 1");
    return evil(k) == 2 * k - 2 ? 2 * k - 1 : 2 * k - 2;
}

/// n_{N_mu + k} for N_mu a multiple of 2^mu and 1 <= k <= 2^(mu-1):
/// 2 N_mu + n_k when s_2(N_mu) is even, else 2 N_mu + m_k.
inline std::uint64_t shift_rule(std::uint64_t N_mu, std::uint64_t k) {
    return 2 * N_mu + (tm_bit(N_mu) == 0 ? evil(k) : odious(k));
}

// --- 8-block / quadruple combinatorics ------------------------------------

inline constexpr std::uint32_t block_A = 0b10010110u;  // complement of t_0..t_7
inline constexpr std::uint32_t block_B = 0b01101001u;

/// The ten quadruples of consecutive 8-blocks that occur in the Thue-Morse
/// real, encoded as 4-bit words with A=0, B=1 (MSB = first block).
inline constexpr std::array<std::uint8_t, 10> quadruple_classes = {
    0b0010,  // c1  = AABA
    0b0011,  // c2  = AABB
    0b0100,  // c3  = ABAA
    0b0110,  // c4  = ABBA
    0b0101,  // c5  = ABAB
    0b1101,  // c6  = BBAB
    0b1100,  // c7  = BBAA
    0b1011,  // c8  = BABB
    0b1001,  // c9  = BAAB
    0b1010,  // c10 = BABA
};

/// 1-based class index (1..10) of a 4-letter word, or 0 if it never occurs.
inline int quadruple_class_of(std::uint8_t word) {
    for (std::size_t i = 0; i < quadruple_classes.size(); ++i)
        if (quadruple_classes[i] == word) return static_cast<int>(i) + 1;
    return 0;
}

struct BlockProfile {
    std::array<std::uint64_t, 10> counts{};  // counts[i] = occurrences of c_{i+1}
    std::uint64_t total = 0;

    double frequency(int cls) const {
        return total == 0 ? 0.0 : static_cast<double>(counts[cls - 1]) / total;
    }
};

/// Letter (A=0, B=1) of the v-th 8-block of x (v >= 0), or -1 if the block is
/// neither A nor B.
inline int block_letter(const BinaryReal& x, std::uint64_t v) {
    const auto w = x.window_value(8 * v + 1, 8).convert_to<std::uint32_t>();
    if (w == block_A) return 0;
    if (w == block_B) return 1;
    return -1;
}

/// Classifies the quadruple contexts (blocks j..j+3) for j = 0..U-1. Each
/// context must be one of the ten admissible classes; anything else means x
/// is not the Thue-Morse real (or the alignment is off) and raises DataError.
inline BlockProfile classify_quadruples(const BinaryReal& x, std::uint64_t U) {
    if (U < 1) throw SizeError("classify_quadruples: U >= 1");
    x.ensure_digits(8 * (U + 3));
    BlockProfile profile;
    // letters for blocks 0..U+2, reusing the previous three per step
    std::array<int, 4> letters{};
    for (int i = 0; i < 4; ++i) letters[i] = block_letter(x, i);
    for (std::uint64_t j = 0;; ++j) {
        std::uint8_t word = 0;
        for (int i = 0; i < 4; ++i) {
            if (letters[i] < 0)
                throw DataError("classify_quadruples: 8-block " +
                                std::to_string(j + i) + " is neither A nor B");
            word = static_cast<std::uint8_t>((word << 1) | letters[i]);
        }
        const int cls = quadruple_class_of(word);
        if (cls == 0)
            throw DataError("classify_quadruples: quadruple at block " +
                            std::to_string(j) + " matches no admissible class");
        ++profile.counts[cls - 1];
        ++profile.total;
        if (j + 1 == U) break;
        letters = {letters[1], letters[2], letters[3],
                   block_letter(x, j + 4)};
    }
    return profile;
}

}  // namespace tmk::thue
