#ifndef CANTORQ_WORD_HPP
#define CANTORQ_WORD_HPP

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cantorq {

/// A finite word over the alphabet {1,2}, addressing the cylinder J_w.
///
/// Symbols are packed most-significant-bit first (symbol 1 -> bit 0,
/// symbol 2 -> bit 1) so that comparing the packed bits and then the
/// length yields plain lexicographic string order ("12" < "121" < "2").
class Word {
public:
    static constexpr std::size_t kMaxLength = 64;

    constexpr Word() = default;

    /// Parses a string of '1'/'2' characters. The empty string is the empty word.
    static Word parse(std::string_view text) {
        Word w;
        for (char c : text) {
            if (c == '1') {
                w = w.child(1);
            } else if (c == '2') {
                w = w.child(2);
            } else {
                throw std::invalid_argument("word symbol must be 1 or 2: '" + std::string(text) + "'");
            }
        }
        return w;
    }

    constexpr std::size_t size() const { return length_; }
    constexpr bool empty() const { return length_ == 0; }

    /// Number of 1-symbols.
    constexpr std::size_t ones() const {
        return length_ - static_cast<std::size_t>(std::popcount(bits_));
    }
    constexpr std::size_t twos() const { return static_cast<std::size_t>(std::popcount(bits_)); }

    /// Symbol at position i (0-based), 1 or 2.
    constexpr int operator[](std::size_t i) const {
        return ((bits_ >> (63 - i)) & 1u) ? 2 : 1;
    }

    /// The word extended by one symbol on the right.
    constexpr Word child(int symbol) const {
        if (length_ >= kMaxLength) throw std::length_error("word longer than 64 symbols");
        Word w = *this;
        if (symbol == 2) w.bits_ |= std::uint64_t{1} << (63 - length_);
        else if (symbol != 1) throw std::invalid_argument("word symbol must be 1 or 2");
        ++w.length_;
        return w;
    }

    /// True if *this is a (not necessarily proper) prefix of other.
    constexpr bool is_prefix_of(const Word& other) const {
        if (length_ > other.length_) return false;
        if (length_ == 0) return true;
        const std::uint64_t mask = ~std::uint64_t{0} << (64 - length_);
        return (bits_ & mask) == (other.bits_ & mask);
    }

    std::string str() const {
        std::string s;
        s.reserve(length_);
        for (std::size_t i = 0; i < length_; ++i) s.push_back((*this)[i] == 2 ? '2' : '1');
        return s;
    }

    constexpr std::uint64_t packed_bits() const { return bits_; }

    friend constexpr bool operator==(const Word&, const Word&) = default;
    friend constexpr std::strong_ordering operator<=>(const Word& a, const Word& b) {
        if (auto c = a.bits_ <=> b.bits_; c != 0) return c;
        return a.length_ <=> b.length_;
    }

private:
    std::uint64_t bits_ = 0;
    std::uint8_t length_ = 0;
};

}  // namespace cantorq

template <>
struct std::hash<cantorq::Word> {
    std::size_t operator()(const cantorq::Word& w) const noexcept {
        return std::hash<std::uint64_t>{}(w.packed_bits() ^ (std::uint64_t{w.size()} * 0x9e3779b97f4a7c15ULL));
    }
};

#endif  // CANTORQ_WORD_HPP
