#pragma once
// Representation-theoretic predicates for infinite hitting times on Cayley
// graphs: irrep dimensions of S_n from hook lengths, character inner products,
// and the discrete/continuous sufficiency criteria.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/finite_group.hpp"

namespace qwalk {

using Partition = std::vector<int>;  // weakly decreasing positive parts

/// All partitions of n, in reverse lexicographic order starting at (n).
inline std::vector<Partition> partitions(int n) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

/// Number of standard Young tableaux of shape lambda: n! / prod(hook lengths).
inline std::uint64_t hook_length_dimension(const Partition& lambda) {
  int n = 0;
  for (int p : lambda) n += p;
  if (n > 20) throw Error(ErrorCode::range, "partition too large for exact 64-bit arithmetic");
  std::uint64_t hooks = 1;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (int j = 0; j < lambda[i]; ++j) {
      int below = 0;
      for (std::size_t k = i + 1; k < lambda.size() && lambda[k] > j; ++k) ++below;
      hooks *= static_cast<std::uint64_t>(lambda[i] - j + below);
    }
  }
  return factorial(n) / hooks;
}

struct IrrepDimensionReport {
  std::vector<std::uint64_t> dims;  // ascending
  std::uint64_t max_dim = 0;
  std::string group_label;
};

inline IrrepDimensionReport sn_irrep_dims(int n) {
  if (n < 1 || n > 12) throw Error(ErrorCode::range, "S_n irrep dimensions supported for 1 <= n <= 12");
  IrrepDimensionReport r;
  r.group_label = "S" + std::to_string(n);
  for (const auto& lambda : partitions(n)) r.dims.push_back(hook_length_dimension(lambda));
  std::sort(r.dims.begin(), r.dims.end());
  r.max_dim = r.dims.back();
  return r;
}

/// Character table: one row per irrep, one column per conjugacy class. The
/// first class must be the identity class, so column 0 holds the dimensions.
struct CharacterTable {
  std::vector<std::string> class_names;
  std::vector<int> class_sizes;
  Eigen::MatrixXcd characters;

  int group_order() const {
    int s = 0;
    for (int c : class_sizes) s += c;
    return s;
  }

  std::vector<int> dimensions() const {
    std::vector<int> out;
    for (Eigen::Index r = 0; r < characters.rows(); ++r) {
      out.push_back(static_cast<int>(std::lround(characters(r, 0).real())));
    }
    return out;
  }
};

inline std::complex<double> character_inner_product(const CharacterTable& table,
                                                    const Eigen::VectorXcd& phi,
                                                    const Eigen::VectorXcd& chi) {
  const auto classes = static_cast<Eigen::Index>(table.class_sizes.size());
  if (phi.size() != classes || chi.size() != classes) {
    throw Error(ErrorCode::dimension_mismatch, "class function length does not match the class count");
  }
  std::complex<double> sum = 0.0;
  for (Eigen::Index c = 0; c < classes; ++c) {
    sum += static_cast<double>(table.class_sizes[c]) * phi(c) * std::conj(chi(c));
  }
  return sum / static_cast<double>(table.group_order());
}

/// Checks row orthonormality (1e-9) and sum of squared dimensions == |G|.
inline void validate_character_table(const CharacterTable& t) {
  const auto classes = static_cast<Eigen::Index>(t.class_sizes.size());
  if (classes == 0 || t.characters.cols() != classes) {
    throw Error(ErrorCode::dimension_mismatch, "character rows must have one entry per class");
  }
  if (t.class_sizes[0] != 1) throw Error(ErrorCode::invalid_group, "first class must be the identity class");
  for (int s : t.class_sizes) {
    if (s < 1) throw Error(ErrorCode::invalid_group, "class sizes must be positive");
  }
  for (Eigen::Index a = 0; a < t.characters.rows(); ++a) {
    for (Eigen::Index b = 0; b < t.characters.rows(); ++b) {
      const auto ip = character_inner_product(t, t.characters.row(a).transpose(), t.characters.row(b).transpose());
      const double expect = a == b ? 1.0 : 0.0;
      if (std::abs(ip - expect) > 1e-9) {
        std::ostringstream os;
        os << "rows " << a << " and " << b << " violate orthogonality, inner product " << ip;
        throw Error(ErrorCode::invalid_group, os.str());
      }
    }
  }
  long long squares = 0;
  for (Eigen::Index a = 0; a < t.characters.rows(); ++a) {
    const auto dim = t.characters(a, 0);
    const double rounded = std::round(dim.real());
    if (std::abs(dim - std::complex<double>(rounded, 0.0)) > 1e-9 || rounded < 1.0) {
      throw Error(ErrorCode::invalid_group, "identity-class character must be a positive integer");
    }
    squares += static_cast<long long>(rounded) * static_cast<long long>(rounded);
  }
  if (squares != t.group_order()) {
    throw Error(ErrorCode::invalid_group, "sum of squared dimensions " + std::to_string(squares) +
                                              " differs from group order " + std::to_string(t.group_order()));
  }
}

namespace detail {

inline std::complex<double> parse_complex(const std::string& tok) {
  std::size_t pos = 0;
  const auto comma = tok.find(',');
  if (comma == std::string::npos) {
    const double re = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return {re, 0.0};
  }
  const std::string a = tok.substr(0, comma), b = tok.substr(comma + 1);
  std::size_t pa = 0, pb = 0;
  const double re = std::stod(a, &pa);
  const double im = std::stod(b, &pb);
  if (pa != a.size() || pb != b.size()) throw std::invalid_argument(tok);
  return {re, im};
}

}  // namespace detail

/// Text format: "classes <name>..." line, "sizes <int>..." line, then one row
/// of characters per irrep. Entries are reals or "re,im" pairs; '#' starts a
/// comment. The table is validated before it is returned.
inline CharacterTable read_character_table(std::istream& in) {
  CharacterTable t;
  std::vector<std::vector<std::complex<double>>> rows;
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::istringstream is(hash == std::string::npos ? raw : raw.substr(0, hash));
    std::vector<std::string> toks;
    for (std::string tok; is >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks[0] == "classes") {
      t.class_names.assign(toks.begin() + 1, toks.end());
    } else if (toks[0] == "sizes") {
      for (std::size_t k = 1; k < toks.size(); ++k) {
        try {
          std::size_t pos = 0;
          const int v = std::stoi(toks[k], &pos);
          if (pos != toks[k].size()) fail("bad class size '" + toks[k] + "'");
          t.class_sizes.push_back(v);
        } catch (const std::logic_error&) {
          fail("bad class size '" + toks[k] + "'");
        }
      }
    } else {
      std::vector<std::complex<double>> row;
      for (const auto& tok : toks) {
        try {
          row.push_back(detail::parse_complex(tok));
        } catch (const std::logic_error&) {
          fail("bad character value '" + tok + "'");
        }
      }
      if (!t.class_sizes.empty() && row.size() != t.class_sizes.size()) {
        fail("row has " + std::to_string(row.size()) + " entries, expected " +
             std::to_string(t.class_sizes.size()));
      }
      rows.push_back(std::move(row));
    }
  }
  if (t.class_sizes.empty()) throw Error(ErrorCode::parse, "missing 'sizes' line");
  if (!t.class_names.empty() && t.class_names.size() != t.class_sizes.size()) {
    throw Error(ErrorCode::parse, "'classes' and 'sizes' lines differ in length");
  }
  if (rows.empty()) throw Error(ErrorCode::parse, "no character rows");
  t.characters.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.class_sizes.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != t.class_sizes.size()) {
      throw Error(ErrorCode::parse, "character row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) t.characters(r, c) = rows[r][c];
  }
  validate_character_table(t);
  return t;
}

enum class Verdict { sufficient, inconclusive };

inline const char* to_string(Verdict v) { return v == Verdict::sufficient ? "SUFFICIENT" : "INCONCLUSIVE"; }

struct HittingPrediction {
  Verdict verdict = Verdict::inconclusive;
  std::string group_label;
  bool abelian = false;
  /// Largest irrep dimension; compared against the coin dimension (discrete)
  /// or against 1 (continuous).
  std::uint64_t max_irrep_dim = 0;
  int threshold = 1;
  std::string reason;
};

struct SymmetricGroupLabel {
  int n = 0;
};

inline HittingPrediction predict_discrete_from_max_dim(std::string label, bool abelian,
                                                       std::uint64_t max_dim, int coin_dim) {
  HittingPrediction p;
  p.group_label = std::move(label);
  p.abelian = abelian;
  p.max_irrep_dim = max_dim;
  p.threshold = coin_dim;
  p.verdict = max_dim > static_cast<std::uint64_t>(coin_dim) ? Verdict::sufficient : Verdict::inconclusive;
  std::ostringstream os;
  os << "max irrep dimension " << max_dim << (p.verdict == Verdict::sufficient ? " > " : " <= ")
     << "coin dimension " << coin_dim;
  p.reason = os.str();
  return p;
}

inline void check_coin_dim(int coin_dim) {
  if (coin_dim < 1) throw Error(ErrorCode::range, "coin dimension must be positive");
}

/// Discrete walk on a Cayley graph of S_n: every irrep occurs in the walk's
/// vertex representation, so an irrep larger than the coin forces a trapped subspace.
inline HittingPrediction predict_infinite_hitting_discrete(SymmetricGroupLabel sn, int coin_dim) {
  check_coin_dim(coin_dim);
  const auto dims = sn_irrep_dims(sn.n);
  return predict_discrete_from_max_dim(dims.group_label, sn.n <= 2, dims.max_dim, coin_dim);
}

/// General group: Abelian groups need no table (all irreps are 1-dimensional);
/// non-Abelian groups need a character table.
inline HittingPrediction predict_infinite_hitting_discrete(const FiniteGroup& g, const CharacterTable* table,
                                                           int coin_dim) {
  check_coin_dim(coin_dim);
  const bool abelian = is_abelian(g);
  if (abelian) return predict_discrete_from_max_dim(g.label(), true, 1, coin_dim);
  if (table == nullptr) {
    throw Error(ErrorCode::insufficient_data,
                "non-Abelian group without a character table; supply one or run the numerical "
                "spectral analysis (analyze) on the walk instead");
  }
  if (table->group_order() != g.order()) {
    throw Error(ErrorCode::dimension_mismatch, "character table order does not match the group order");
  }
  const auto dims = table->dimensions();
  return predict_discrete_from_max_dim(g.label(), false,
                                       static_cast<std::uint64_t>(*std::max_element(dims.begin(), dims.end())),
                                       coin_dim);
}

/// Character table alone (group given only by its table).
inline HittingPrediction predict_infinite_hitting_discrete(const CharacterTable& table, int coin_dim,
                                                           std::string label = "table") {
  check_coin_dim(coin_dim);
  const auto dims = table.dimensions();
  const int max_dim = *std::max_element(dims.begin(), dims.end());
  return predict_discrete_from_max_dim(std::move(label), max_dim == 1, static_cast<std::uint64_t>(max_dim),
                                       coin_dim);
}

inline HittingPrediction predict_continuous_from_abelian(std::string label, bool abelian) {
  HittingPrediction p;
  p.group_label = std::move(label);
  p.abelian = abelian;
  p.threshold = 1;
  p.verdict = abelian ? Verdict::inconclusive : Verdict::sufficient;
  p.reason = abelian ? "group is Abelian, all irreps are 1-dimensional"
                     : "group is non-Abelian, some irrep has dimension > 1";
  return p;
}

inline HittingPrediction predict_infinite_hitting_continuous(const FiniteGroup& g) {
  auto p = predict_continuous_from_abelian(g.label(), is_abelian(g));
  p.max_irrep_dim = p.abelian ? 1 : 0;  // 0: known > 1 but not computed
  return p;
}

inline HittingPrediction predict_infinite_hitting_continuous(SymmetricGroupLabel sn) {
  const auto dims = sn_irrep_dims(sn.n);
  auto p = predict_continuous_from_abelian(dims.group_label, sn.n <= 2);
  p.max_irrep_dim = dims.max_dim;
  return p;
}

}  // namespace qwalk
