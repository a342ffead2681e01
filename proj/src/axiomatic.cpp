#include "qapprox/axiomatic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "qapprox/error.hpp"
#include "qapprox/format.hpp"

namespace qapprox::axiomatic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxLConvexRows = 20;
constexpr std::size_t kMaxExtensionRows = 12;
constexpr std::size_t kMaxChainMembers = 12;
constexpr std::size_t kMaxCaratheodoryGround = 10;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

IndexSet::IndexSet(std::initializer_list<std::size_t> indices) {
  for (std::size_t i : indices) insert(i);
}

IndexSet IndexSet::full(std::size_t n) {
  if (n > kCapacity) throw SizeGuardError("index sets hold at most 64 elements");
  return IndexSet(n == kCapacity ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
}

void IndexSet::insert(std::size_t i) {
  if (i >= kCapacity) throw SizeGuardError("index sets hold at most 64 elements");
  bits_ |= std::uint64_t{1} << i;
}

std::vector<std::size_t> IndexSet::indices() const {
  std::vector<std::size_t> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  }
  return out;
}

GroundSet::GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ConfigError("ground set must not be empty");
  if (labels_.size() > IndexSet::kCapacity) throw SizeGuardError("ground set larger than 64 elements");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw ConfigError("ground set label must not be empty");
    if (!seen.insert(l).second) throw ConfigError("duplicate ground label '" + l + "'");
  }
}

GroundSet GroundSet::numbered(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return GroundSet(std::move(labels));
}

std::size_t GroundSet::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw ConfigError("unknown ground label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

ConvexityFamily::ConvexityFamily(GroundSet ground, std::vector<IndexSet> members)
    : ground_(std::move(ground)), members_(std::move(members)) {
  const IndexSet all = ground_mask();
  for (IndexSet m : members_) {
    if (!m.subset_of(all)) throw ConfigError("family member outside the ground set");
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool ConvexityFamily::contains(IndexSet s) const {
  return std::binary_search(members_.begin(), members_.end(), s);
}

ConvexityFamily power_set_family(GroundSet ground) {
  if (ground.size() > 20) throw SizeGuardError("power set of more than 20 elements");
  std::vector<IndexSet> members;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << ground.size()); ++b) members.emplace_back(b);
  return ConvexityFamily(std::move(ground), std::move(members));
}

ConvexityFamily interval_family(GroundSet ground) {
  std::vector<IndexSet> members{IndexSet{}};
  for (std::size_t i = 0; i < ground.size(); ++i) {
    IndexSet run;
    for (std::size_t j = i; j < ground.size(); ++j) {
      run.insert(j);
      members.push_back(run);
    }
  }
  return ConvexityFamily(std::move(ground), std::move(members));
}

FunctionTable::FunctionTable(GroundSet ground, std::vector<std::vector<double>> rows)
    : ground_(std::move(ground)), rows_(std::move(rows)) {
  if (rows_.size() > IndexSet::kCapacity) throw SizeGuardError("function table with more than 64 rows");
  for (const auto& r : rows_) {
    if (r.size() != ground_.size()) throw ConfigError("function table row length differs from ground size");
    for (double v : r) {
      if (std::isnan(v) || v == -kInf) throw ConfigError("function table entries must be finite or +inf");
    }
  }
}

bool is_closure_space(const ConvexityFamily& family) {
  if (!family.contains(IndexSet{}) || !family.contains(family.ground_mask())) return false;
  const auto& m = family.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (!family.contains(m[i] & m[j])) return false;
    }
  }
  return true;
}

bool chains_closed(const ConvexityFamily& family) {
  const auto& m = family.members();
  if (m.size() > kMaxChainMembers) {
    throw SizeGuardError("chain enumeration limited to " + std::to_string(kMaxChainMembers) + " members");
  }
  for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << m.size()); ++pick) {
    const auto chosen = IndexSet(pick).indices();
    bool chain = true;
    IndexSet unite;
    for (std::size_t a = 0; a < chosen.size() && chain; ++a) {
      unite = unite | m[chosen[a]];
      for (std::size_t b = a + 1; b < chosen.size(); ++b) {
        const IndexSet x = m[chosen[a]], y = m[chosen[b]];
        if (!x.subset_of(y) && !y.subset_of(x)) {
          chain = false;
          break;
        }
      }
    }
    if (chain && !family.contains(unite)) return false;
  }
  return true;
}

bool is_convexity_structure(const ConvexityFamily& family) {
  if (!is_closure_space(family)) return false;
  if (family.members().size() <= kMaxChainMembers) return chains_closed(family);
  return true;
}

IndexSet hull(const ConvexityFamily& family, IndexSet s) {
  bool found = false;
  IndexSet result = family.ground_mask();
  for (IndexSet m : family.members()) {
    if (s.subset_of(m)) {
      result = result & m;
      found = true;
    }
  }
  if (!found) throw ConfigError("hull: no member contains the set");
  return result;
}

IndexSet support_set(const FunctionTable& table, std::span<const double> f) {
  if (f.size() != table.ground().size()) throw ConfigError("support set: row length mismatch");
  IndexSet out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& l = table.rows()[i];
    bool below = true;
    for (std::size_t x = 0; x < f.size() && below; ++x) below = l[x] <= f[x];
    if (below) out.insert(i);
  }
  return out;
}

IndexSet strict_support_set(const FunctionTable& table, std::span<const double> f) {
  if (f.size() != table.ground().size()) throw ConfigError("strict support set: row length mismatch");
  IndexSet out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& l = table.rows()[i];
    bool below = true;
    for (std::size_t x = 0; x < f.size() && below; ++x) {
      if (f[x] == kInf) continue;  // outside dom(f)
      below = l[x] < f[x];
    }
    if (below) out.insert(i);
  }
  return out;
}

Row supremum(const FunctionTable& table, IndexSet rows) {
  Row out(table.ground().size(), -kInf);
  for (std::size_t i : rows.indices()) {
    const auto& l = table.rows().at(i);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = std::max(out[x], l[x]);
  }
  return out;
}

Row l_convex_envelope(const FunctionTable& table, std::span<const double> f) {
  return supremum(table, support_set(table, f));
}

FunctionTable indicator_lift(const ConvexityFamily& family) {
  std::vector<std::vector<double>> rows;
  for (IndexSet m : family.members()) {
    std::vector<double> row(family.ground().size(), kInf);
    for (std::size_t x : m.indices()) row[x] = 0.0;
    rows.push_back(std::move(row));
  }
  return FunctionTable(family.ground(), std::move(rows));
}

std::vector<IndexSet> l_convex_sets(const FunctionTable& table) {
  if (table.size() > kMaxLConvexRows) {
    throw SizeGuardError("l_convex_sets limited to " + std::to_string(kMaxLConvexRows) + " functions");
  }
  std::set<IndexSet> out;
  for (std::uint64_t u = 0; u < (std::uint64_t{1} << table.size()); ++u) {
    out.insert(support_set(table, supremum(table, IndexSet(u))));
  }
  return {out.begin(), out.end()};
}

std::vector<IndexSet> convexity_extension(const FunctionTable& table) {
  if (table.size() > kMaxExtensionRows) {
    throw SizeGuardError("convexity_extension limited to " + std::to_string(kMaxExtensionRows) +
                         " functions");
  }
  std::vector<bool> seen(std::size_t{1} << table.size(), false);
  for (std::uint64_t u = 0; u < (std::uint64_t{1} << table.size()); ++u) {
    const Row f = supremum(table, IndexSet(u));
    const IndexSet lower = strict_support_set(table, f);
    const IndexSet upper = support_set(table, f);
    if (!lower.subset_of(upper)) continue;  // cannot happen for finite rows; guards +inf corner cases
    // Every A with lower <= A <= upper: lower plus each submask of the gap.
    const std::uint64_t gap = upper.bits() & ~lower.bits();
    for (std::uint64_t sub = gap;; sub = (sub - 1) & gap) {
      seen[lower.bits() | sub] = true;
      if (sub == 0) break;
    }
  }
  std::vector<IndexSet> out;
  for (std::uint64_t b = 0; b < seen.size(); ++b) {
    if (seen[b]) out.emplace_back(b);
  }
  return out;
}

ConvexityFamily family_over_rows(const FunctionTable& table, std::vector<IndexSet> members) {
  return ConvexityFamily(GroundSet::numbered(table.size() == 0 ? 1 : table.size()), std::move(members));
}

std::size_t caratheodory_number(const ConvexityFamily& family) {
  const std::size_t n = family.ground().size();
  if (n > kMaxCaratheodoryGround) {
    throw SizeGuardError("caratheodory_number limited to ground sets of " +
                         std::to_string(kMaxCaratheodoryGround) + " elements");
  }
  if (!is_closure_space(family)) throw ConfigError("caratheodory_number needs a closure space");
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<IndexSet> hulls(subsets);
  for (std::size_t b = 0; b < subsets; ++b) hulls[b] = hull(family, IndexSet(b));

  std::size_t best = 0;
  for (std::size_t b = 1; b < subsets; ++b) {
    const IndexSet f(b);
    if (f.size() <= best) continue;
    IndexSet covered;
    for (std::size_t a : f.indices()) covered = covered | hulls[b & ~(std::size_t{1} << a)];
    if (!hulls[b].subset_of(covered)) best = f.size();
  }
  return best;
}

ConvexityFamily read_family(std::istream& in) {
  std::vector<std::string> ground_labels;
  bool explicit_ground = false;
  std::vector<std::vector<std::string>> member_labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("ground:", 0) == 0) {
      if (explicit_ground) throw ConfigError("family file: duplicate ground line " + std::to_string(line_no));
      explicit_ground = true;
      ground_labels = split_commas(line.substr(7));
      continue;
    }
    if (line == "{}") {
      member_labels.emplace_back();
      continue;
    }
    auto labels = split_commas(line);
    for (const auto& l : labels) {
      if (l.empty()) throw ConfigError("family file: empty label on line " + std::to_string(line_no));
    }
    member_labels.push_back(std::move(labels));
  }
  if (!explicit_ground) {
    for (const auto& m : member_labels) {
      for (const auto& l : m) {
        if (std::find(ground_labels.begin(), ground_labels.end(), l) == ground_labels.end()) {
          ground_labels.push_back(l);
        }
      }
    }
  }
  GroundSet ground(std::move(ground_labels));
  std::vector<IndexSet> members;
  for (const auto& m : member_labels) {
    IndexSet s;
    for (const auto& l : m) s.insert(ground.index_of(l));
    members.push_back(s);
  }
  return ConvexityFamily(std::move(ground), std::move(members));
}

void write_family(std::ostream& out, const ConvexityFamily& family) {
  out << "ground: ";
  for (std::size_t i = 0; i < family.ground().size(); ++i) out << (i ? "," : "") << family.ground().label(i);
  out << '\n';
  for (IndexSet m : family.members()) {
    if (m.empty()) {
      out << "{}\n";
      continue;
    }
    bool first = true;
    for (std::size_t i : m.indices()) {
      out << (first ? "" : ",") << family.ground().label(i);
      first = false;
    }
    out << '\n';
  }
}

FunctionTable read_function_table(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_commas(line);
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size()) throw ConfigError("function table: ragged row");
    std::vector<double> row;
    for (const auto& c : cells) {
      if (c == "inf" || c == "+inf") {
        row.push_back(kInf);
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        throw ConfigError("function table: bad value '" + c + "'");
      }
      if (used != c.size() || !std::isfinite(v)) throw ConfigError("function table: bad value '" + c + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ConfigError("function table: missing header");
  return FunctionTable(GroundSet(std::move(header)), std::move(rows));
}

}  // namespace qapprox::axiomatic
