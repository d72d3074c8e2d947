#pragma once

#include <bit>
#include <cstddef>
#include <initializer_list>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

namespace apfree {

// Default cap on the universe size of any set an operation will allocate.
inline constexpr std::uint64_t kDefaultUniverseLimit = 0xFFFF'FFFFull;

// A finite subset of {1..universe_max} stored as a dense bit vector.
//
// Member m occupies bit (m - 1). Bits past universe_max are always zero.
// Instances are immutable once built; use IntegerSet::Builder to assemble one
// element at a time.
class IntegerSet {
public:
    class Builder;
    class const_iterator;

    // Members may be given in any order; duplicates collapse.
    // Throws InvalidParameter when universe_max == 0 or a member is out of range.
    static IntegerSet from_members(std::uint64_t universe_max, std::span<const std::uint64_t> members);
    static IntegerSet from_members(std::uint64_t universe_max, std::initializer_list<std::uint64_t> members);

    // Takes ownership of a raw word vector. Bits beyond universe_max are cleared.
    static IntegerSet from_words(std::uint64_t universe_max, std::vector<std::uint64_t> words);

    // {1..count} inside a universe of `universe_max`.
    static IntegerSet interval(std::uint64_t universe_max, std::uint64_t count);

    static IntegerSet empty(std::uint64_t universe_max);

    std::uint64_t universe_max() const noexcept { return universe_max_; }
    std::uint64_t size() const noexcept { return cardinality_; }
    bool empty() const noexcept { return cardinality_ == 0; }

    bool contains(std::uint64_t m) const noexcept {
        if (m == 0 || m > universe_max_) return false;
        const std::uint64_t bit = m - 1;
        return (words_[bit >> 6] >> (bit & 63)) & 1u;
    }

    std::optional<std::uint64_t> min() const noexcept;
    std::optional<std::uint64_t> max() const noexcept;

    std::vector<std::uint64_t> members() const;
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    // Recounts the bits and checks the padding. Returns false on any mismatch.
    bool check_invariants() const noexcept;

    const_iterator begin() const noexcept;
    const_iterator end() const noexcept;

    friend bool operator==(const IntegerSet& a, const IntegerSet& b) noexcept {
        return a.universe_max_ == b.universe_max_ && a.words_ == b.words_;
    }

    // Same members, universes ignored.
    bool same_members(const IntegerSet& other) const noexcept;

    static std::size_t word_count(std::uint64_t universe_max) noexcept {
        return static_cast<std::size_t>((universe_max + 63) / 64);
    }

private:
    IntegerSet(std::uint64_t universe_max, std::vector<std::uint64_t> words);

    std::uint64_t universe_max_ = 0;
    std::uint64_t cardinality_ = 0;
    std::vector<std::uint64_t> words_;
};

// Ascending iteration over members.
class IntegerSet::const_iterator {
public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::uint64_t*;
    using reference = std::uint64_t;

    const_iterator() = default;

    std::uint64_t operator*() const noexcept { return (word_index_ << 6) + std::countr_zero(current_) + 1; }

    const_iterator& operator++() noexcept {
        current_ &= current_ - 1;
        advance();
        return *this;
    }
    const_iterator operator++(int) noexcept {
        auto copy = *this;
        ++*this;
        return copy;
    }

    friend bool operator==(const const_iterator& a, const const_iterator& b) noexcept {
        return a.word_index_ == b.word_index_ && a.current_ == b.current_;
    }

private:
    friend class IntegerSet;
    const_iterator(std::span<const std::uint64_t> words, std::size_t index) noexcept
        : words_(words), word_index_(index), current_(index < words.size() ? words[index] : 0) {
        advance();
    }

    void advance() noexcept {
        while (current_ == 0 && word_index_ < words_.size()) {
            if (++word_index_ < words_.size()) current_ = words_[word_index_];
        }
    }

    std::span<const std::uint64_t> words_;
    std::size_t word_index_ = 0;
    std::uint64_t current_ = 0;
};

class IntegerSet::Builder {
public:
    explicit Builder(std::uint64_t universe_max);

    // Out-of-range members throw InvalidParameter.
    Builder& insert(std::uint64_t m);
    // Inserts lo..hi inclusive.
    Builder& insert_range(std::uint64_t lo, std::uint64_t hi);

    std::uint64_t universe_max() const noexcept { return universe_max_; }

    IntegerSet build() &&;

private:
    std::uint64_t universe_max_;
    std::vector<std::uint64_t> words_;
};

}  // namespace apfree
