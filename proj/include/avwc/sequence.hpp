#pragma once

// Words over finite alphabets, ranked lexicographically, plus the small
// combinatorial helpers (compositions, multinomials, permutation action)
// used by the type-based enumeration routines.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace avwc {

// A word is a sequence of 0-based letters over some alphabet {0, ..., m-1}.
using Word = std::vector<int>;

inline std::uint64_t pow_checked(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base)
      throw std::overflow_error("pow_checked: " + std::to_string(base) + "^" +
                                std::to_string(exp) + " overflows 64 bits");
    r *= base;
  }
  return r;
}

// Lexicographic rank; the first letter is the most significant digit.
inline std::uint64_t word_rank(const Word& w, int base) {
  std::uint64_t r = 0;
  for (int a : w) {
    if (a < 0 || a >= base)
      throw std::invalid_argument("word_rank: letter out of alphabet range");
    r = r * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(a);
  }
  return r;
}

inline Word word_unrank(std::uint64_t rank, int n, int base) {
  if (n < 0 || base <= 0) throw std::invalid_argument("word_unrank: bad dims");
  Word w(static_cast<std::size_t>(n), 0);
  for (int i = n - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] =
        static_cast<int>(rank % static_cast<std::uint64_t>(base));
    rank /= static_cast<std::uint64_t>(base);
  }
  if (rank != 0) throw std::invalid_argument("word_unrank: rank out of range");
  return w;
}

// Lexicographic odometer step; returns false when the last word wraps.
inline bool next_word(Word& w, int base) {
  for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {
    if (++w[static_cast<std::size_t>(i)] < base) return true;
    w[static_cast<std::size_t>(i)] = 0;
  }
  return false;
}

// Compact text form: plain digit string for alphabets up to 10 letters,
// dash-separated otherwise ("0110" vs "0-11-3").
inline std::string word_to_string(const Word& w, int base) {
  std::string s;
  bool dashed = base > 10;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (dashed && i) s += '-';
    s += std::to_string(w[i]);
  }
  return s;
}

inline Word word_from_string(const std::string& s, int base) {
  Word w;
  if (base > 10) {
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t dash = s.find('-', pos);
      std::string tok = s.substr(pos, dash == std::string::npos ? dash : dash - pos);
      w.push_back(std::stoi(tok));
      if (dash == std::string::npos) break;
      pos = dash + 1;
    }
  } else {
    for (char c : s) {
      if (c < '0' || c > '9')
        throw std::invalid_argument("word_from_string: bad digit '" +
                                    std::string(1, c) + "'");
      w.push_back(c - '0');
    }
  }
  for (int a : w)
    if (a < 0 || a >= base)
      throw std::invalid_argument("word_from_string: letter out of range");
  return w;
}

// Permutations act by coordinate relabeling: (pi(w))_i = w_{pi(i)}.
inline Word apply_permutation(const std::vector<int>& pi, const Word& w) {
  if (pi.size() != w.size())
    throw std::invalid_argument("apply_permutation: size mismatch");
  Word out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    int j = pi[i];
    if (j < 0 || static_cast<std::size_t>(j) >= w.size())
      throw std::invalid_argument("apply_permutation: index out of range");
    out[i] = w[static_cast<std::size_t>(j)];
  }
  return out;
}

// All count vectors with `parts` non-negative entries summing to n
// (types of length-n words over a `parts`-letter alphabet, times n).
inline void compositions_rec(int remaining, int parts, std::vector<int>& cur,
                             std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    cur.push_back(c);
    compositions_rec(remaining - c, parts - 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> compositions(int n, int parts) {
  if (n < 0 || parts < 1) throw std::invalid_argument("compositions: bad args");
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  compositions_rec(n, parts, cur, out);
  return out;
}

// Exact multinomial coefficient n! / prod(counts!); n = sum(counts).
// Computed as a product of binomials, each built by incremental exact
// division, guarded against 64-bit overflow via 128-bit intermediates.
inline std::uint64_t multinomial(const std::vector<int>& counts) {
  std::uint64_t result = 1;
  long long upper = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("multinomial: negative count");
    upper += c;
    // multiply result by C(upper, c)
    std::uint64_t binom = 1;
    for (long long i = 1; i <= c; ++i) {
      unsigned __int128 t = static_cast<unsigned __int128>(binom) *
                            static_cast<unsigned __int128>(upper - c + i);
      t /= static_cast<unsigned __int128>(i);
      if (t > UINT64_MAX) throw std::overflow_error("multinomial: overflow");
      binom = static_cast<std::uint64_t>(t);
    }
    unsigned __int128 t = static_cast<unsigned __int128>(result) *
                          static_cast<unsigned __int128>(binom);
    if (t > UINT64_MAX) throw std::overflow_error("multinomial: overflow");
    result = static_cast<std::uint64_t>(t);
  }
  return result;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) {
    if (r > UINT64_MAX / static_cast<std::uint64_t>(i))
      throw std::overflow_error("factorial: overflow");
    r *= static_cast<std::uint64_t>(i);
  }
  return r;
}

}  // namespace avwc
