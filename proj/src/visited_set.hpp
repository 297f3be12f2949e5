// Copyright 2026 The DPDP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Node sets packed into 64-bit words. Bits above the node count stay zero so
// that equal sets compare equal word by word.

#ifndef DPDP_VISITED_SET_HPP_
#define DPDP_VISITED_SET_HPP_

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dpdp {

inline std::size_t WordsFor(std::size_t n) { return (n + 63) / 64; }

inline bool TestBit(std::span<const std::uint64_t> words, std::size_t i) {
  return (words[i / 64] >> (i % 64)) & 1u;
}

inline void SetBit(std::span<std::uint64_t> words, std::size_t i) {
  words[i / 64] |= std::uint64_t{1} << (i % 64);
}

inline std::size_t PopCount(std::span<const std::uint64_t> words) {
  std::size_t count = 0;
  for (std::uint64_t w : words) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

// Lexicographic order over the packed words, most significant word first.
inline std::strong_ordering CompareWords(std::span<const std::uint64_t> a,
                                         std::span<const std::uint64_t> b) {
  for (std::size_t k = a.size(); k-- > 0;) {
    if (a[k] != b[k]) return a[k] <=> b[k];
  }
  return std::strong_ordering::equal;
}

class VisitedSet {
 public:
  explicit VisitedSet(std::size_t n) : n_(n), words_(WordsFor(n), 0) {}
  VisitedSet(std::size_t n, std::span<const std::uint64_t> words)
      : n_(n), words_(words.begin(), words.end()) {}

  std::size_t size() const { return n_; }
  bool contains(std::size_t i) const { return TestBit(words_, i); }
  void insert(std::size_t i) { SetBit(words_, i); }
  std::size_t count() const { return PopCount(words_); }
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const VisitedSet&, const VisitedSet&) = default;
  friend std::strong_ordering operator<=>(const VisitedSet& a,
                                          const VisitedSet& b) {
    return CompareWords(a.words_, b.words_);
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

}  // namespace dpdp

#endif  // DPDP_VISITED_SET_HPP_
