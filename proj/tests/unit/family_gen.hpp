#pragma once

// Generators for finite set families and function tables.

#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "qapprox/axiomatic.hpp"

namespace family_gen {

using qapprox::axiomatic::ConvexityFamily;
using qapprox::axiomatic::FunctionTable;
using qapprox::axiomatic::GroundSet;
using qapprox::axiomatic::IndexSet;

/// Intersection of every member containing s (the full set if none does).
inline IndexSet naive_hull(const ConvexityFamily& c, IndexSet s) {
  IndexSet h = c.ground_mask();
  for (IndexSet m : c.members())
    if (s.subset_of(m)) h = h & m;
  return h;
}

/// Closes `seed` under pairwise intersection and adds the empty and full sets.
inline ConvexityFamily close_family(std::size_t n, const std::vector<IndexSet>& seed) {
  std::set<IndexSet> fam(seed.begin(), seed.end());
  fam.insert(IndexSet());
  fam.insert(IndexSet::full(n));
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<IndexSet> snapshot(fam.begin(), fam.end());
    for (IndexSet a : snapshot)
      for (IndexSet b : snapshot) grew |= fam.insert(a & b).second;
  }
  return ConvexityFamily(GroundSet::numbered(n), {fam.begin(), fam.end()});
}

inline ConvexityFamily random_closure_space(std::mt19937& rng, std::size_t n) {
  std::vector<IndexSet> seed;
  const std::size_t count = rng() % 10;
  for (std::size_t i = 0; i < count; ++i) seed.emplace_back(rng() & ((std::uint64_t{1} << n) - 1));
  return close_family(n, seed);
}

/// Small integer entries with occasional +infinity, so ties and repeated rows are common.
inline FunctionTable random_table(std::mt19937& rng, std::size_t n, std::size_t rows) {
  std::vector<std::vector<double>> r(rows, std::vector<double>(n));
  for (auto& row : r)
    for (auto& v : row) v = (rng() % 7 == 0) ? std::numeric_limits<double>::infinity() : static_cast<double>(rng() % 4);
  return FunctionTable(GroundSet::numbered(n), r);
}

/// Every closure space on n points: all families of proper non-empty subsets
/// that are closed under intersection, plus the empty and full sets.
inline std::vector<ConvexityFamily> all_closure_spaces(std::size_t n) {
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> inner;
  for (std::uint64_t s = 1; s < full; ++s) inner.push_back(s);
  std::vector<ConvexityFamily> out;
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << inner.size()); ++pick) {
    bool closed = true;
    for (std::size_t i = 0; i < inner.size() && closed; ++i) {
      if (!((pick >> i) & 1U)) continue;
      for (std::size_t j = i + 1; j < inner.size() && closed; ++j) {
        if (!((pick >> j) & 1U)) continue;
        const std::uint64_t meet = inner[i] & inner[j];
        if (meet != 0) closed = ((pick >> (meet - 1)) & 1U) != 0;
      }
    }
    if (!closed) continue;
    std::vector<IndexSet> members{IndexSet(), IndexSet(full)};
    for (std::size_t i = 0; i < inner.size(); ++i)
      if ((pick >> i) & 1U) members.emplace_back(inner[i]);
    out.emplace_back(GroundSet::numbered(n), std::move(members));
  }
  return out;
}

/// supp(i_A) = {B in C : A subset of B}, indexed by member position.
inline std::vector<IndexSet> up_sets(const ConvexityFamily& c) {
  const auto& mem = c.members();
  std::vector<IndexSet> up(mem.size());
  for (std::size_t i = 0; i < mem.size(); ++i)
    for (std::size_t j = 0; j < mem.size(); ++j)
      if (mem[i].subset_of(mem[j])) up[i].insert(j);
  return up;
}

/// Carathéodory property: every x in hull(S) lies in hull(F) for some F subset
/// of S with |F| <= c. Exhaustive over S.
inline bool caratheodory_bound_holds(const ConvexityFamily& c, std::size_t car) {
  const std::size_t n = c.ground().size();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    for (std::size_t x : naive_hull(c, IndexSet(s)).indices()) {
      bool reached = false;
      for (std::uint64_t f = s;; f = (f - 1) & s) {
        if (IndexSet(f).size() <= car && naive_hull(c, IndexSet(f)).contains(x)) {
          reached = true;
          break;
        }
        if (f == 0) break;
      }
      if (!reached) return false;
    }
  }
  return true;
}

}  // namespace family_gen
