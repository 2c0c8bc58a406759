#pragma once

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fockstar {

/// One Fourier mode of the doubled loop space: coordinate (1-based), frequency,
/// and whether it lives in the primal copy H or the dual copy H*.
struct ModeIndex {
  int coord = 1;
  int freq = 0;
  bool dual = false;

  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;

  ModeIndex twin() const { return {coord, freq, !dual}; }
  std::string to_string() const;
};

inline ModeIndex primal(int coord, int freq) { return {coord, freq, false}; }
inline ModeIndex dual(int coord, int freq) { return {coord, freq, true}; }

/// Global caps on the basis: coordinates 1..d, frequencies -K..K.
struct Truncation {
  int d = 2;
  int K = 3;

  bool contains(const ModeIndex& m) const {
    return m.coord >= 1 && m.coord <= d && m.freq >= -K && m.freq <= K;
  }
  /// All primal modes, sorted.
  std::vector<ModeIndex> primal_modes() const;
  /// Primal and dual modes, sorted.
  std::vector<ModeIndex> doubled_modes() const;
};

/// A finite multiset of modes: the label of one symmetrized monomial.
/// Entries are kept strictly sorted with positive multiplicities.
class MultiIndex {
 public:
  struct Entry {
    ModeIndex mode;
    int mult = 1;
    friend bool operator==(const Entry&, const Entry&) = default;
    friend auto operator<=>(const Entry&, const Entry&) = default;
  };

  MultiIndex() = default;
  MultiIndex(std::initializer_list<ModeIndex> modes);

  static MultiIndex of(const ModeIndex& mode, int mult = 1);
  /// Sorts, merges repeated modes and rejects non-positive multiplicities.
  static MultiIndex from_entries(std::vector<Entry> entries);

  int degree() const { return degree_; }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return {entries_.data(), entries_.size()}; }

  int multiplicity(const ModeIndex& mode) const;
  bool has_dual() const;

  /// Multiset union.
  MultiIndex operator+(const MultiIndex& other) const;
  /// Removes one copy of `mode`. Precondition: multiplicity(mode) > 0.
  MultiIndex without_one(const ModeIndex& mode) const;

  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.degree_ == b.degree_ && a.entries_ == b.entries_;
  }
  /// Degree first, then lexicographic on entries.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

 private:
  boost::container::small_vector<Entry, 4> entries_;
  int degree_ = 0;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& m) const { return m.hash(); }
};

}  // namespace fockstar
