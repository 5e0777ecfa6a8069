#pragma once

#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semipress {

/// Default cap on k^n for a single enumeration level.
inline constexpr std::uint64_t kDefaultWordBudget = std::uint64_t{1} << 24;

/// Finite word over the alphabet {0, ..., k-1}, stored first symbol first
/// (w = i_1 i_2 ... i_n).
class Word {
 public:
  Word() = default;
  explicit Word(int k);
  Word(int k, std::vector<std::uint8_t> symbols);

  /// Parses a digit string such as "0121" (digits, then a-z for k > 10).
  static Word parse(std::string_view digits, int k);

  int alphabet() const { return k_; }
  std::size_t length() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  std::span<const std::uint8_t> symbols() const { return symbols_; }
  std::uint8_t operator[](std::size_t i) const { return symbols_[i]; }

  std::string str() const;
  Word reversed() const;
  Word operator+(const Word& tail) const;
  bool operator==(const Word& other) const = default;

 private:
  int k_ = 1;
  std::vector<std::uint8_t> symbols_;
};

Word reverse(const Word& w);

/// True iff w = w'' w_prime for some (possibly empty) word w''.
bool is_suffix(const Word& w_prime, const Word& w);

/// All k^n words of length n in lexicographic order. Index i corresponds to
/// the base-k expansion of i with the first symbol most significant, so the
/// child u·s of the word at index j has index j*k + s.
class WordLevel {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Word;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = Word;

    iterator() = default;
    iterator(const WordLevel* level, std::uint64_t index) : level_(level), index_(index) {}
    Word operator*() const { return level_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto tmp = *this;
      ++index_;
      return tmp;
    }
    bool operator==(const iterator& o) const { return index_ == o.index_; }

   private:
    const WordLevel* level_ = nullptr;
    std::uint64_t index_ = 0;
  };

  WordLevel(int k, int n, std::uint64_t first, std::uint64_t last);

  int alphabet() const { return k_; }
  int depth() const { return n_; }
  std::uint64_t size() const { return last_ - first_; }
  Word at(std::uint64_t index) const;

  iterator begin() const { return {this, first_}; }
  iterator end() const { return {this, last_}; }

  /// Disjoint sub-range [first, last) of this level, for parallel consumers.
  WordLevel subrange(std::uint64_t first, std::uint64_t last) const;

 private:
  int k_;
  int n_;
  std::uint64_t first_;
  std::uint64_t last_;
};

/// Checked k^n; throws BudgetExceeded when it exceeds `budget`.
std::uint64_t level_size(int k, int n, std::uint64_t budget = kDefaultWordBudget);

WordLevel enumerate_level(int k, int n, std::uint64_t budget = kDefaultWordBudget);

}  // namespace semipress
