#include "apfree/integer_set.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

void require_universe(std::uint64_t universe_max) {
    if (universe_max == 0) throw InvalidParameter("universe_max must be positive");
}

void clear_padding(std::vector<std::uint64_t>& words, std::uint64_t universe_max) {
    const unsigned tail = static_cast<unsigned>(universe_max & 63);
    if (tail != 0 && !words.empty()) words.back() &= (std::uint64_t{1} << tail) - 1;
}

}  // namespace

IntegerSet::IntegerSet(std::uint64_t universe_max, std::vector<std::uint64_t> words)
    : universe_max_(universe_max), words_(std::move(words)) {
    for (std::uint64_t w : words_) cardinality_ += static_cast<std::uint64_t>(std::popcount(w));
}

IntegerSet IntegerSet::from_members(std::uint64_t universe_max, std::span<const std::uint64_t> members) {
    Builder builder(universe_max);
    for (std::uint64_t m : members) builder.insert(m);
    return std::move(builder).build();
}

IntegerSet IntegerSet::from_members(std::uint64_t universe_max, std::initializer_list<std::uint64_t> members) {
    return from_members(universe_max, std::span<const std::uint64_t>(members.begin(), members.size()));
}

IntegerSet IntegerSet::from_words(std::uint64_t universe_max, std::vector<std::uint64_t> words) {
    require_universe(universe_max);
    words.resize(word_count(universe_max), 0);
    clear_padding(words, universe_max);
    return IntegerSet(universe_max, std::move(words));
}

IntegerSet IntegerSet::interval(std::uint64_t universe_max, std::uint64_t count) {
    Builder builder(universe_max);
    if (count > 0) builder.insert_range(1, count);
    return std::move(builder).build();
}

IntegerSet IntegerSet::empty(std::uint64_t universe_max) {
    require_universe(universe_max);
    return IntegerSet(universe_max, std::vector<std::uint64_t>(word_count(universe_max), 0));
}

std::optional<std::uint64_t> IntegerSet::min() const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (words_[i]) return (static_cast<std::uint64_t>(i) << 6) + std::countr_zero(words_[i]) + 1;
    }
    return std::nullopt;
}

std::optional<std::uint64_t> IntegerSet::max() const noexcept {
    for (std::size_t i = words_.size(); i-- > 0;) {
        if (words_[i]) return (static_cast<std::uint64_t>(i) << 6) + (63 - std::countl_zero(words_[i])) + 1;
    }
    return std::nullopt;
}

std::vector<std::uint64_t> IntegerSet::members() const {
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(cardinality_));
    for (std::uint64_t m : *this) out.push_back(m);
    return out;
}

bool IntegerSet::check_invariants() const noexcept {
    if (universe_max_ == 0 || words_.size() != word_count(universe_max_)) return false;
    std::uint64_t count = 0;
    for (std::uint64_t w : words_) count += static_cast<std::uint64_t>(std::popcount(w));
    if (count != cardinality_) return false;
    const unsigned tail = static_cast<unsigned>(universe_max_ & 63);
    if (tail != 0 && (words_.back() >> tail) != 0) return false;
    return true;
}

IntegerSet::const_iterator IntegerSet::begin() const noexcept { return const_iterator(words_, 0); }
IntegerSet::const_iterator IntegerSet::end() const noexcept { return const_iterator(words_, words_.size()); }

bool IntegerSet::same_members(const IntegerSet& other) const noexcept {
    if (cardinality_ != other.cardinality_) return false;
    const std::size_t common = std::min(words_.size(), other.words_.size());
    if (!std::equal(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(common), other.words_.begin()))
        return false;
    // Equal cardinality plus equal common prefix means the tails are both empty.
    return true;
}

IntegerSet::Builder::Builder(std::uint64_t universe_max) : universe_max_(universe_max) {
    require_universe(universe_max);
    words_.assign(word_count(universe_max), 0);
}

IntegerSet::Builder& IntegerSet::Builder::insert(std::uint64_t m) {
    if (m == 0 || m > universe_max_) {
        throw InvalidParameter("member " + std::to_string(m) + " outside {1.." + std::to_string(universe_max_) + "}");
    }
    const std::uint64_t bit = m - 1;
    words_[bit >> 6] |= std::uint64_t{1} << (bit & 63);
    return *this;
}

IntegerSet::Builder& IntegerSet::Builder::insert_range(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) return *this;
    if (lo == 0 || hi > universe_max_) {
        throw InvalidParameter("range " + std::to_string(lo) + ".." + std::to_string(hi) + " outside {1.." +
                               std::to_string(universe_max_) + "}");
    }
    std::uint64_t first = lo - 1;
    const std::uint64_t last = hi - 1;
    while (first <= last) {
        const std::size_t w = static_cast<std::size_t>(first >> 6);
        const unsigned from = static_cast<unsigned>(first & 63);
        const unsigned to = (last >> 6) == (first >> 6) ? static_cast<unsigned>(last & 63) : 63u;
        const std::uint64_t span_bits = to - from + 1;
        const std::uint64_t mask = span_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << span_bits) - 1) << from;
        words_[w] |= mask;
        first += span_bits;
    }
    return *this;
}

IntegerSet IntegerSet::Builder::build() && {
    return IntegerSet(universe_max_, std::move(words_));
}

}  // namespace apfree
