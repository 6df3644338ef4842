#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dwkit {

// Description of a builtin group; kept on the group so it can be written
// back out in the short form.
struct BuiltinSpec {
  std::string name;  // cyclic | product | dihedral | pauli
  int n = 0;         // cyclic order, or dihedral order 2n
  std::vector<BuiltinSpec> factors;

  bool operator==(const BuiltinSpec&) const = default;
};

/// Finite group given by its multiplication table on dense indices 0..order-1.
///
/// Instances are immutable and validated on construction.  Everything else in
/// the library works on element indices.
class FiniteGroup {
 public:
  /// Validates `table` (Latin square, identity, inverses, associativity) and
  /// throws NotAGroup with the first offending triple on failure.
  static FiniteGroup from_table(int order, const std::vector<std::vector<int>>& table,
                                std::string label = "");

  int order() const { return order_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[static_cast<size_t>(a) * order_ + b]; }
  int inv(int a) const { return inverses_[a]; }
  /// k a k^{-1}
  int conj(int k, int a) const { return mul(mul(k, a), inverses_[k]); }
  bool commute(int a, int b) const { return mul(a, b) == mul(b, a); }

  const std::string& label() const { return label_; }
  const std::vector<int>& inverses() const { return inverses_; }
  const std::vector<int32_t>& table() const { return table_; }

  const std::string& element_name(int g) const { return names_[g]; }
  /// Accepts an element name or a decimal index.
  std::optional<int> element_by_name(const std::string& name) const;

  /// Hex digest of the table bytes in row-major index order.
  const std::string& canonical_hash() const { return hash_; }

  std::vector<int> centralizer(int g) const;
  std::vector<int> center() const;
  /// Conjugacy classes, each sorted, ordered by smallest member.
  std::vector<std::vector<int>> conjugacy_classes() const;
  /// Greedy generating set of the subgroup spanned by `elems`.
  std::vector<int> generators_of(const std::vector<int>& elems) const;
  /// Subgroup generated by `gens`, sorted.
  std::vector<int> closure(const std::vector<int>& gens) const;
  int element_order(int g) const;
  bool is_abelian() const;

  const std::optional<BuiltinSpec>& builtin() const { return builtin_; }

  bool same_table(const FiniteGroup& other) const { return table_ == other.table_; }

  // Used by builtin constructors after validation.
  void set_names(std::vector<std::string> names);
  void set_builtin(BuiltinSpec spec) { builtin_ = std::move(spec); }

 private:
  FiniteGroup() = default;

  int order_ = 0;
  int identity_ = 0;
  std::vector<int32_t> table_;
  std::vector<int> inverses_;
  std::vector<std::string> names_;
  std::string label_;
  std::string hash_;
  std::optional<BuiltinSpec> builtin_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr make_group(FiniteGroup g);

GroupPtr cyclic_group(int n);
GroupPtr product_group(const std::vector<GroupPtr>& factors);
/// Dihedral group of order 2n = `two_n`, elements a^i b^j with index i + n*j,
/// relations a^n = b^2 = 1 and b a b^{-1} = a^{-1}.
GroupPtr dihedral_group(int two_n);
/// D8 x| Z2 with Z2 acting by conjugation with a; index d + 8*k for (d, k).
GroupPtr pauli_group();
GroupPtr builtin_group(const BuiltinSpec& spec);

/// Homomorphism between finite groups, validated on construction.
class GroupHom {
 public:
  GroupHom(GroupPtr source, GroupPtr target, std::vector<int> map);

  const GroupPtr& source() const { return source_; }
  const GroupPtr& target() const { return target_; }
  int operator()(int g) const { return map_[g]; }
  const std::vector<int>& map() const { return map_; }

  bool injective() const;
  bool surjective() const;
  /// Elements of the source mapped to the identity.
  std::vector<int> kernel() const;

  static GroupHom identity(const GroupPtr& g);

 private:
  GroupPtr source_, target_;
  std::vector<int> map_;
};

/// Inner automorphism d -> k d k^{-1} of `g` as a homomorphism.
GroupHom conjugation(const GroupPtr& g, int k);

}  // namespace dwkit
