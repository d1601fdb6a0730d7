#include "synthratings/interaction_set.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "synthratings/error.hpp"

namespace synthratings {

UserItemMatrix UserItemMatrix::from_rows(std::size_t item_count, std::vector<std::vector<ItemIndex>> rows) {
  UserItemMatrix m;
  m.item_count_ = item_count;
  m.offsets_.reserve(rows.size() + 1);
  std::size_t total = 0;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (!row.empty() && row.back() >= item_count) {
      throw ArgumentError("item index " + std::to_string(row.back()) + " out of range for " +
                          std::to_string(item_count) + " items");
    }
    total += row.size();
  }
  m.items_.reserve(total);
  for (const auto& row : rows) {
    m.items_.insert(m.items_.end(), row.begin(), row.end());
    m.offsets_.push_back(m.items_.size());
  }
  return m;
}

bool UserItemMatrix::contains(UserIndex user, ItemIndex item) const noexcept {
  const auto r = row(user);
  return std::binary_search(r.begin(), r.end(), item);
}

std::vector<std::uint32_t> UserItemMatrix::item_degrees() const {
  std::vector<std::uint32_t> degrees(item_count_, 0);
  for (const ItemIndex item : items_) ++degrees[item];
  return degrees;
}

UserItemMatrix UserItemMatrix::transpose() const {
  UserItemMatrix t;
  t.item_count_ = user_count();
  const auto degrees = item_degrees();
  t.offsets_.assign(item_count_ + 1, 0);
  for (std::size_t i = 0; i < item_count_; ++i) t.offsets_[i + 1] = t.offsets_[i] + degrees[i];
  t.items_.resize(items_.size());
  std::vector<std::size_t> cursor(t.offsets_.begin(), t.offsets_.end() - 1);
  // Users are visited in ascending order, so each transposed row comes out sorted.
  for (UserIndex u = 0; u < user_count(); ++u) {
    for (const ItemIndex i : row(u)) t.items_[cursor[i]++] = u;
  }
  return t;
}

std::vector<std::uint8_t> SparseBinaryVector::dense() const {
  std::vector<std::uint8_t> v(length, 0);
  for (const ItemIndex i : ones) v[i] = 1;
  return v;
}

InteractionSet InteractionSet::build(std::span<const std::pair<std::string, std::string>> pairs) {
  Builder builder;
  for (const auto& [user, item] : pairs) builder.add(user, item);
  return std::move(builder).finish();
}

InteractionSet InteractionSet::from_parts(std::vector<std::string> user_ids, std::vector<std::string> item_ids,
                                          UserItemMatrix matrix) {
  if (matrix.user_count() != user_ids.size() || matrix.item_count() != item_ids.size()) {
    throw ArgumentError("id maps do not match matrix dimensions");
  }
  for (UserIndex u = 0; u < matrix.user_count(); ++u) {
    if (matrix.row_size(u) == 0) throw ArgumentError("user '" + user_ids[u] + "' has no interactions");
  }
  InteractionSet ds;
  ds.user_ids_ = std::move(user_ids);
  ds.item_ids_ = std::move(item_ids);
  ds.matrix_ = std::move(matrix);
  return ds;
}

std::optional<UserIndex> InteractionSet::find_user(std::string_view external_id) const {
  const auto it = std::find(user_ids_.begin(), user_ids_.end(), external_id);
  if (it == user_ids_.end()) return std::nullopt;
  return static_cast<UserIndex>(it - user_ids_.begin());
}

std::optional<ItemIndex> InteractionSet::find_item(std::string_view external_id) const {
  const auto it = std::find(item_ids_.begin(), item_ids_.end(), external_id);
  if (it == item_ids_.end()) return std::nullopt;
  return static_cast<ItemIndex>(it - item_ids_.begin());
}

SparseBinaryVector InteractionSet::user_vector(UserIndex user) const {
  if (user >= user_count()) {
    throw ArgumentError("user index " + std::to_string(user) + " out of range [0, " +
                        std::to_string(user_count()) + ")");
  }
  return {item_count(), matrix_.row(user)};
}

std::vector<std::pair<std::string, std::string>> InteractionSet::external_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(size());
  for (UserIndex u = 0; u < user_count(); ++u) {
    for (const ItemIndex i : items_of(u)) out.emplace_back(user_ids_[u], item_ids_[i]);
  }
  return out;
}

void InteractionSet::Builder::add(std::string_view user, std::string_view item) {
  std::string user_key(user);
  auto [uit, new_user] = user_index_.try_emplace(user_key, static_cast<UserIndex>(user_ids_.size()));
  if (new_user) {
    user_ids_.push_back(std::move(user_key));
    rows_.emplace_back();
  }
  std::string item_key(item);
  auto [iit, new_item] = item_index_.try_emplace(item_key, static_cast<ItemIndex>(item_ids_.size()));
  if (new_item) item_ids_.push_back(std::move(item_key));
  rows_[uit->second].push_back(iit->second);
}

InteractionSet InteractionSet::Builder::finish() && {
  const std::size_t items = item_ids_.size();
  return InteractionSet::from_parts(std::move(user_ids_), std::move(item_ids_),
                                    UserItemMatrix::from_rows(items, std::move(rows_)));
}

DatasetStats stats(const InteractionSet& ds) {
  const auto degrees = ds.matrix().item_degrees();
  const auto occurring =
      static_cast<std::size_t>(std::count_if(degrees.begin(), degrees.end(), [](auto d) { return d > 0; }));
  return {ds.user_count(), occurring, ds.size()};
}

void write_canonical(std::ostream& out, const InteractionSet& ds) {
  for (UserIndex u = 0; u < ds.user_count(); ++u) {
    const auto& user = ds.user_id(u);
    for (const ItemIndex i : ds.items_of(u)) out << user << '\t' << ds.item_id(i) << '\n';
  }
}

std::uint64_t fingerprint(const InteractionSet& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto feed = [&h](std::string_view s) {
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  };
  for (UserIndex u = 0; u < ds.user_count(); ++u) {
    for (const ItemIndex i : ds.items_of(u)) {
      feed(ds.user_id(u));
      feed("\t");
      feed(ds.item_id(i));
      feed("\n");
    }
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace synthratings
