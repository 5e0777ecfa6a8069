#include "semipress/word.hpp"

#include <algorithm>
#include <limits>

#include "semipress/errors.hpp"

namespace semipress {

namespace {

constexpr int kMaxAlphabet = 36;

char symbol_char(std::uint8_t s) {
  return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + (s - 10));
}

void check_alphabet(int k) {
  if (k < 1 || k > kMaxAlphabet) {
    throw InvalidInput("alphabet size must be in [1, 36], got " + std::to_string(k));
  }
}

}  // namespace

Word::Word(int k) : k_(k) { check_alphabet(k); }

Word::Word(int k, std::vector<std::uint8_t> symbols) : k_(k), symbols_(std::move(symbols)) {
  check_alphabet(k);
  for (auto s : symbols_) {
    if (s >= k_) {
      throw InvalidInput("symbol " + std::to_string(s) + " outside alphabet of size " +
                         std::to_string(k_));
    }
  }
}

Word Word::parse(std::string_view digits, int k) {
  std::vector<std::uint8_t> symbols;
  symbols.reserve(digits.size());
  for (char c : digits) {
    int v = -1;
    if (c >= '0' && c <= '9') v = c - '0';
    if (c >= 'a' && c <= 'z') v = 10 + (c - 'a');
    if (v < 0) throw InvalidInput(std::string("bad word symbol '") + c + "'");
    symbols.push_back(static_cast<std::uint8_t>(v));
  }
  return Word(k, std::move(symbols));
}

std::string Word::str() const {
  std::string out;
  out.reserve(symbols_.size());
  for (auto s : symbols_) out.push_back(symbol_char(s));
  return out;
}

Word Word::reversed() const {
  Word out = *this;
  std::reverse(out.symbols_.begin(), out.symbols_.end());
  return out;
}

Word Word::operator+(const Word& tail) const {
  if (tail.k_ != k_) throw InvalidInput("concatenating words over different alphabets");
  Word out = *this;
  out.symbols_.insert(out.symbols_.end(), tail.symbols_.begin(), tail.symbols_.end());
  return out;
}

Word reverse(const Word& w) { return w.reversed(); }

bool is_suffix(const Word& w_prime, const Word& w) {
  if (w_prime.length() > w.length()) return false;
  auto a = w_prime.symbols();
  auto b = w.symbols();
  return std::equal(a.rbegin(), a.rend(), b.rbegin());
}

std::uint64_t level_size(int k, int n, std::uint64_t budget) {
  check_alphabet(k);
  if (n < 0) throw InvalidInput("negative word length");
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    if (size > budget / static_cast<std::uint64_t>(k)) {
      throw BudgetExceeded("k^n = " + std::to_string(k) + "^" + std::to_string(n) +
                           " exceeds word budget " + std::to_string(budget));
    }
    size *= static_cast<std::uint64_t>(k);
  }
  if (size > budget) {
    throw BudgetExceeded("k^n exceeds word budget " + std::to_string(budget));
  }
  return size;
}

WordLevel::WordLevel(int k, int n, std::uint64_t first, std::uint64_t last)
    : k_(k), n_(n), first_(first), last_(last) {}

Word WordLevel::at(std::uint64_t index) const {
  std::vector<std::uint8_t> symbols(static_cast<std::size_t>(n_));
  for (int pos = n_ - 1; pos >= 0; --pos) {
    symbols[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(index % k_);
    index /= static_cast<std::uint64_t>(k_);
  }
  return Word(k_, std::move(symbols));
}

WordLevel WordLevel::subrange(std::uint64_t first, std::uint64_t last) const {
  if (first > last || last > size()) throw InvalidInput("word level subrange out of bounds");
  return WordLevel(k_, n_, first_ + first, first_ + last);
}

WordLevel enumerate_level(int k, int n, std::uint64_t budget) {
  const auto size = level_size(k, n, budget);
  return WordLevel(k, n, 0, size);
}

}  // namespace semipress
