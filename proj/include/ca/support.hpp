#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ca/error.hpp"
#include "ca/label.hpp"

namespace ca {

// A finite, non-empty set of distinct labels held in canonical (sorted) order,
// so that any two supports over the same labels index identically and
// serialization is deterministic.
class Support {
 public:
  Support() = default;

  static Support of(std::vector<Label> labels) {
    require(!labels.empty(), Errc::invalid_argument, "empty support");
    std::sort(labels.begin(), labels.end());
    auto dup = std::adjacent_find(labels.begin(), labels.end());
    if (dup != labels.end())
      fail(Errc::invalid_argument, "duplicate label '" + dup->str() + "' in support");
    return Support(std::move(labels));
  }

  static Support binary01() {
    return Support({Label::number(0), Label::number(1)});
  }

  static Support construct_placeholder() {
    return Support({Label::construct_placeholder()});
  }

  std::size_t size() const { return labels_.size(); }
  const Label& at(std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const { return labels_; }

  std::optional<std::size_t> index_of(const Label& l) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
    if (it != labels_.end() && *it == l) return static_cast<std::size_t>(it - labels_.begin());
    return std::nullopt;
  }

  std::size_t require_index(const Label& l) const {
    auto idx = index_of(l);
    require(idx.has_value(), Errc::unknown_label, "label '" + l.str() + "' not in support");
    return *idx;
  }

  bool contains(const Label& l) const { return index_of(l).has_value(); }

  bool all_numeric() const {
    return std::all_of(labels_.begin(), labels_.end(),
                       [](const Label& l) { return l.is_number(); });
  }

  bool is_placeholder() const {
    return labels_.size() == 1 && labels_[0] == Label::construct_placeholder();
  }

  bool operator==(const Support& o) const { return labels_ == o.labels_; }

  Support united(const Support& o) const {
    std::vector<Label> all(labels_);
    for (const auto& l : o.labels_)
      if (!contains(l)) all.push_back(l);
    return Support::of(std::move(all));
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (i) s += ",";
      s += labels_[i].str();
    }
    return s + "}";
  }

 private:
  explicit Support(std::vector<Label> labels) : labels_(std::move(labels)) {}

  std::vector<Label> labels_;
};

}  // namespace ca
