#pragma once
// Finite groups as explicit multiplication tables over 0..|G|-1.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

/// Permutation of {0..n-1} in image form: p[i] is the image of i.
using Permutation = std::vector<int>;

inline bool is_bijection(const std::vector<int>& p, int offset = 0) {
  std::vector<char> seen(p.size(), 0);
  for (int x : p) {
    const int k = x - offset;
    if (k < 0 || k >= static_cast<int>(p.size()) || seen[k]) return false;
    seen[k] = 1;
  }
  return true;
}

/// (a*b)(i) = a(b(i)): apply b first.
inline Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

class FiniteGroup {
 public:
  /// Validates a full multiplication table (row-major, mul[a*order+b] = a*b).
  static FiniteGroup from_table(int order, std::vector<int> table, int identity,
                                std::string label = "") {
    if (order < 1) throw Error(ErrorCode::invalid_group, "group order must be positive");
    if (static_cast<long long>(table.size()) != 1LL * order * order) {
      throw Error(ErrorCode::dimension_mismatch, "multiplication table must have order^2 entries");
    }
    if (identity < 0 || identity >= order) {
      throw Error(ErrorCode::invalid_group, "identity index out of range");
    }
    FiniteGroup g;
    g.order_ = order;
    g.table_ = std::move(table);
    g.identity_ = identity;
    g.label_ = std::move(label);
    g.validate();
    g.derive();
    return g;
  }

  /// Closure of a set of permutations of {0..n-1}. Element 0 is the identity;
  /// the remaining elements follow breadth-first discovery order.
  static FiniteGroup from_permutations(const std::vector<Permutation>& generators,
                                       std::string label = "", std::size_t max_order = 100000) {
    if (generators.empty()) throw Error(ErrorCode::invalid_group, "no generators given");
    const std::size_t degree = generators.front().size();
    for (const auto& p : generators) {
      if (p.size() != degree || !is_bijection(p)) {
        throw Error(ErrorCode::invalid_group, "generators must be permutations of equal degree");
      }
    }
    Permutation id(degree);
    for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<int>(i);

    std::vector<Permutation> elems{id};
    std::map<Permutation, int> index{{id, 0}};
    std::deque<int> queue{0};
    while (!queue.empty()) {
      const int e = queue.front();
      queue.pop_front();
      for (const auto& s : generators) {
        Permutation next = compose(elems[e], s);
        if (index.emplace(next, static_cast<int>(elems.size())).second) {
          elems.push_back(std::move(next));
          queue.push_back(static_cast<int>(elems.size()) - 1);
          if (elems.size() > max_order) {
            throw Error(ErrorCode::resource, "group closure exceeds the order limit");
          }
        }
      }
    }
    const int order = static_cast<int>(elems.size());
    std::vector<int> table(static_cast<std::size_t>(order) * order);
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) table[a * order + b] = index.at(compose(elems[a], elems[b]));
    }
    FiniteGroup g = from_table(order, std::move(table), 0, std::move(label));
    g.perms_ = std::move(elems);
    return g;
  }

  int order() const { return order_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::string& label() const { return label_; }
  const std::vector<std::vector<int>>& conjugacy_classes() const { return classes_; }
  const std::vector<int>& table() const { return table_; }

  /// Permutation realization of each element, when built from permutations.
  const std::vector<Permutation>& permutations() const { return perms_; }

  std::optional<int> find(const Permutation& p) const {
    auto it = std::find(perms_.begin(), perms_.end(), p);
    if (it == perms_.end()) return std::nullopt;
    return static_cast<int>(it - perms_.begin());
  }

 private:
  void validate() {
    for (int x : table_) {
      if (x < 0 || x >= order_) throw Error(ErrorCode::invalid_group, "table entry out of range");
    }
    for (int a = 0; a < order_; ++a) {
      if (mul(identity_, a) != a || mul(a, identity_) != a) {
        throw Error(ErrorCode::invalid_group, "identity is not two-sided");
      }
    }
    inverse_.assign(order_, -1);
    for (int a = 0; a < order_; ++a) {
      for (int b = 0; b < order_; ++b) {
        if (mul(a, b) == identity_ && mul(b, a) == identity_) {
          inverse_[a] = b;
          break;
        }
      }
      if (inverse_[a] < 0) {
        throw Error(ErrorCode::invalid_group, "element " + std::to_string(a) + " has no inverse");
      }
    }
    auto assoc = [&](int a, int b, int c) { return mul(mul(a, b), c) == mul(a, mul(b, c)); };
    if (order_ <= 200) {
      for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
          for (int c = 0; c < order_; ++c)
            if (!assoc(a, b, c)) throw Error(ErrorCode::invalid_group, "table is not associative");
    } else {
      std::mt19937 rng(12345u);
      std::uniform_int_distribution<int> pick(0, order_ - 1);
      for (int k = 0; k < 20000; ++k) {
        if (!assoc(pick(rng), pick(rng), pick(rng))) {
          throw Error(ErrorCode::invalid_group, "table is not associative");
        }
      }
    }
  }

  void derive() {
    std::vector<char> seen(order_, 0);
    for (int a = 0; a < order_; ++a) {
      if (seen[a]) continue;
      std::vector<int> cls;
      for (int g = 0; g < order_; ++g) {
        const int c = mul(mul(g, a), inverse_[g]);
        if (!seen[c]) {
          seen[c] = 1;
          cls.push_back(c);
        }
      }
      std::sort(cls.begin(), cls.end());
      classes_.push_back(std::move(cls));
    }
  }

  int order_ = 0;
  int identity_ = 0;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> classes_;
  std::vector<Permutation> perms_;
  std::string label_;
};

/// Z_n under addition mod n; element k is the residue k.
inline FiniteGroup cyclic_group(int n) {
  if (n < 1) throw Error(ErrorCode::range, "cyclic group order must be positive");
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a * n + b] = (a + b) % n;
  return FiniteGroup::from_table(n, std::move(table), 0, "Z" + std::to_string(n));
}

/// Z_2^n with element index equal to its bit-string value; product is XOR.
inline FiniteGroup elementary_abelian_2(int n) {
  if (n < 1 || n > 12) throw Error(ErrorCode::range, "Z2^n supported for 1 <= n <= 12");
  const int order = 1 << n;
  std::vector<int> table(static_cast<std::size_t>(order) * order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) table[a * order + b] = a ^ b;
  return FiniteGroup::from_table(order, std::move(table), 0, "Z2^" + std::to_string(n));
}

/// All transpositions (i j), i < j, of {0..n-1} in lexicographic order.
inline std::vector<Permutation> transpositions(int n) {
  std::vector<Permutation> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Permutation p(n);
      for (int k = 0; k < n; ++k) p[k] = k;
      std::swap(p[i], p[j]);
      out.push_back(std::move(p));
    }
  }
  return out;
}

/// S_n generated by its transpositions.
inline FiniteGroup symmetric_group(int n) {
  if (n < 2 || n > 7) throw Error(ErrorCode::range, "explicit S_n supported for 2 <= n <= 7");
  return FiniteGroup::from_permutations(transpositions(n), "S" + std::to_string(n));
}

/// Element indices of the transpositions of a group built by symmetric_group.
inline std::vector<int> transposition_elements(const FiniteGroup& sn, int n) {
  std::vector<int> out;
  for (const auto& t : transpositions(n)) {
    auto idx = sn.find(t);
    if (!idx) throw Error(ErrorCode::missing_metadata, "group has no permutation realization");
    out.push_back(*idx);
  }
  return out;
}

inline bool is_abelian(const FiniteGroup& g) {
  for (int a = 0; a < g.order(); ++a)
    for (int b = a + 1; b < g.order(); ++b)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

}  // namespace qwalk
