#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace synthratings {

using UserIndex = std::uint32_t;
using ItemIndex = std::uint32_t;

/// Compressed sparse rows of a binary user x item matrix. Rows are sorted
/// and duplicate-free; unlike InteractionSet, empty rows are allowed, which
/// is what train/test views of a split need.
class UserItemMatrix {
 public:
  UserItemMatrix() = default;

  /// Takes ownership of per-user item lists; each list is sorted and
  /// deduplicated. Throws ArgumentError if an item index is out of range.
  static UserItemMatrix from_rows(std::size_t item_count, std::vector<std::vector<ItemIndex>> rows);

  std::size_t user_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t item_count() const noexcept { return item_count_; }
  std::size_t nnz() const noexcept { return items_.size(); }

  std::span<const ItemIndex> row(UserIndex user) const noexcept {
    return {items_.data() + offsets_[user], items_.data() + offsets_[user + 1]};
  }
  std::size_t row_size(UserIndex user) const noexcept { return offsets_[user + 1] - offsets_[user]; }
  bool contains(UserIndex user, ItemIndex item) const noexcept;

  /// Number of users holding each item.
  std::vector<std::uint32_t> item_degrees() const;

  /// Item x user matrix.
  UserItemMatrix transpose() const;

  friend bool operator==(const UserItemMatrix&, const UserItemMatrix&) = default;

 private:
  std::size_t item_count_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<ItemIndex> items_;
};

/// Sparse view of one row of the binary user matrix.
struct SparseBinaryVector {
  std::size_t length = 0;
  std::span<const ItemIndex> ones;

  std::vector<std::uint8_t> dense() const;
};

struct DatasetStats {
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t ratings = 0;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

/// Positive (user, item) interactions with dense internal ids assigned in
/// first-seen order. Immutable once built; every user holds at least one item.
class InteractionSet {
 public:
  class Builder;

  InteractionSet() = default;

  /// Collapses duplicate pairs.
  static InteractionSet build(std::span<const std::pair<std::string, std::string>> pairs);

  /// Assembles a set over an existing id space. The item map may contain
  /// items that no user holds; every user row must be non-empty.
  static InteractionSet from_parts(std::vector<std::string> user_ids, std::vector<std::string> item_ids,
                                   UserItemMatrix matrix);

  std::size_t user_count() const noexcept { return user_ids_.size(); }
  std::size_t item_count() const noexcept { return item_ids_.size(); }
  std::size_t size() const noexcept { return matrix_.nnz(); }
  bool empty() const noexcept { return size() == 0; }

  const UserItemMatrix& matrix() const noexcept { return matrix_; }
  std::span<const ItemIndex> items_of(UserIndex user) const noexcept { return matrix_.row(user); }

  const std::string& user_id(UserIndex user) const { return user_ids_.at(user); }
  const std::string& item_id(ItemIndex item) const { return item_ids_.at(item); }
  std::span<const std::string> user_ids() const noexcept { return user_ids_; }
  std::span<const std::string> item_ids() const noexcept { return item_ids_; }

  std::optional<UserIndex> find_user(std::string_view external_id) const;
  std::optional<ItemIndex> find_item(std::string_view external_id) const;

  /// Row of the binary user matrix; throws ArgumentError when out of range.
  SparseBinaryVector user_vector(UserIndex user) const;

  /// Interactions as external-id pairs in internal order.
  std::vector<std::pair<std::string, std::string>> external_pairs() const;

 private:
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  UserItemMatrix matrix_;
};

/// Streaming construction used by the parsers.
class InteractionSet::Builder {
 public:
  void add(std::string_view user, std::string_view item);
  InteractionSet finish() &&;

 private:
  std::unordered_map<std::string, UserIndex> user_index_;
  std::unordered_map<std::string, ItemIndex> item_index_;
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::vector<std::vector<ItemIndex>> rows_;
};

DatasetStats stats(const InteractionSet& ds);

/// `<user>\t<item>\n` per interaction, in internal order.
void write_canonical(std::ostream& out, const InteractionSet& ds);

/// FNV-1a 64 over the canonical serialization.
std::uint64_t fingerprint(const InteractionSet& ds);

std::string to_hex(std::uint64_t value);

}  // namespace synthratings
