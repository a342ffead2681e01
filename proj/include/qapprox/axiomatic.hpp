#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qapprox::axiomatic {

/// Subset of {0, ..., 63} as a bitmask. Ordering is by mask value, which gives
/// families a canonical sorted form.
class IndexSet {
 public:
  static constexpr std::size_t kCapacity = 64;

  constexpr IndexSet() = default;
  constexpr explicit IndexSet(std::uint64_t bits) : bits_(bits) {}
  IndexSet(std::initializer_list<std::size_t> indices);
  static IndexSet full(std::size_t n);

  std::uint64_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool contains(std::size_t i) const { return i < kCapacity && ((bits_ >> i) & 1U) != 0; }
  void insert(std::size_t i);
  void erase(std::size_t i) { bits_ &= ~(std::uint64_t{1} << i); }
  bool subset_of(IndexSet other) const { return (bits_ & ~other.bits_) == 0; }
  std::vector<std::size_t> indices() const;

  friend IndexSet operator&(IndexSet a, IndexSet b) { return IndexSet(a.bits_ & b.bits_); }
  friend IndexSet operator|(IndexSet a, IndexSet b) { return IndexSet(a.bits_ | b.bits_); }
  friend bool operator==(IndexSet, IndexSet) = default;
  friend auto operator<=>(IndexSet, IndexSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Ordered distinct labels.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<std::string> labels);
  /// Labels "0", "1", ..., "n-1".
  static GroundSet numbered(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  /// Throws ConfigError for an unknown label.
  std::size_t index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
};

/// Family of subsets of a ground set, kept sorted and duplicate-free.
class ConvexityFamily {
 public:
  ConvexityFamily(GroundSet ground, std::vector<IndexSet> members);

  const GroundSet& ground() const { return ground_; }
  const std::vector<IndexSet>& members() const { return members_; }
  bool contains(IndexSet s) const;
  IndexSet ground_mask() const { return IndexSet::full(ground_.size()); }

 private:
  GroundSet ground_;
  std::vector<IndexSet> members_;
};

/// Every subset of the ground set.
ConvexityFamily power_set_family(GroundSet ground);
/// Empty set plus every contiguous run of the ordered ground set.
ConvexityFamily interval_family(GroundSet ground);

/// Rows of extended reals over a ground set. Entries are finite or +infinity;
/// -infinity appears only as the bottom value of an empty supremum.
class FunctionTable {
 public:
  FunctionTable(GroundSet ground, std::vector<std::vector<double>> rows);

  const GroundSet& ground() const { return ground_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

 private:
  GroundSet ground_;
  std::vector<std::vector<double>> rows_;
};

using Row = std::vector<double>;

/// Contains the empty set and the ground set and is closed under pairwise intersection.
bool is_closure_space(const ConvexityFamily& family);

/// Unions of every chain of members are members. Exhaustive over member
/// subsets, so limited to 12 members; throws SizeGuardError beyond.
bool chains_closed(const ConvexityFamily& family);

/// Closure-space axioms plus the nested-union axiom. For a finite family every
/// chain has a largest element, so the third axiom reduces to the first two;
/// chains are still enumerated directly when there are at most 12 members.
bool is_convexity_structure(const ConvexityFamily& family);

/// Intersection of all members containing `s`. Throws ConfigError if none does.
IndexSet hull(const ConvexityFamily& family, IndexSet s);

/// {l in L : l <= f pointwise}.
IndexSet support_set(const FunctionTable& table, std::span<const double> f);
/// {l in L : l(x) < f(x) for every x with f(x) < +infinity}.
IndexSet strict_support_set(const FunctionTable& table, std::span<const double> f);
/// Pointwise supremum of the selected rows; -infinity everywhere for an empty selection.
Row supremum(const FunctionTable& table, IndexSet rows);
/// supremum(support_set(f)). f is L-convex iff the envelope equals f.
Row l_convex_envelope(const FunctionTable& table, std::span<const double> f);

/// One row per member: 0 on the member, +infinity elsewhere.
FunctionTable indicator_lift(const ConvexityFamily& family);

/// {support_set(sup U) : U subset of L}, sorted. At most 20 rows.
std::vector<IndexSet> l_convex_sets(const FunctionTable& table);

/// Union over generators f = sup U of {A : strict_support_set(f) <= A <= support_set(f)}.
/// At most 12 rows.
std::vector<IndexSet> convexity_extension(const FunctionTable& table);

/// Family over the row indices of `table`, for feeding results back into the
/// family predicates.
ConvexityFamily family_over_rows(const FunctionTable& table, std::vector<IndexSet> members);

/// Largest |F| such that hull(F) is not covered by the hulls of F minus one
/// point. Ground sets of at most 10 elements.
std::size_t caratheodory_number(const ConvexityFamily& family);

/// Text format: optional "ground: a,b,c" line, then one member per line as
/// comma-separated labels; "{}" is the empty member; '#' starts a comment.
ConvexityFamily read_family(std::istream& in);
void write_family(std::ostream& out, const ConvexityFamily& family);

/// CSV: header of ground labels, then one row per function; "inf" for +infinity.
FunctionTable read_function_table(std::istream& in);

}  // namespace qapprox::axiomatic
