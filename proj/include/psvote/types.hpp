#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psvote/rational.hpp"

namespace psvote {

// Error taxonomy; the CLI maps these onto exit codes.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UndefinedDistortion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Strict complete ranking: order[j] is the alternative in position j.
struct Ranking {
  std::vector<int> order;

  Ranking() = default;
  explicit Ranking(std::vector<int> ord) : order(std::move(ord)) {}

  int m() const { return static_cast<int>(order.size()); }

  /// positions()[a] = rank position of alternative a (0 = first).
  std::vector<int> positions() const {
    std::vector<int> pos(order.size());
    for (int j = 0; j < m(); ++j) pos[order[j]] = j;
    return pos;
  }

  bool prefers(int a, int b) const {
    for (int x : order) {
      if (x == a) return true;
      if (x == b) return false;
    }
    return false;
  }

  bool valid() const {
    std::vector<bool> seen(order.size(), false);
    for (int x : order) {
      if (x < 0 || x >= m() || seen[x]) return false;
      seen[x] = true;
    }
    return true;
  }

  bool operator==(const Ranking& o) const { return order == o.order; }
  bool operator<(const Ranking& o) const { return order < o.order; }
};

/// Preference profile stored as distinct ranking rows with multiplicities.
/// Large construction instances have millions of voters in a handful of
/// distinct rows; all rules implemented here are anonymous, so tallies over
/// weighted rows lose nothing.
struct Profile {
  int m = 0;
  std::vector<Ranking> rows;
  std::vector<long long> counts;

  Profile() = default;
  Profile(int m_, std::vector<Ranking> r, std::vector<long long> c)
      : m(m_), rows(std::move(r)), counts(std::move(c)) {
    if (rows.size() != counts.size()) throw InputError("Profile: rows/counts length mismatch");
  }

  /// Unweighted profile, one row per voter.
  static Profile from_rankings(int m, const std::vector<Ranking>& rankings) {
    Profile p;
    p.m = m;
    p.rows = rankings;
    p.counts.assign(rankings.size(), 1);
    return p;
  }

  long long voters() const { return std::accumulate(counts.begin(), counts.end(), 0LL); }

  void validate() const {
    if (m < 1) throw InputError("Profile: m < 1");
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].m() != m || !rows[i].valid())
        throw InputError("Profile: row " + std::to_string(i) + " is not a permutation of [m]");
      if (counts[i] < 1) throw InputError("Profile: nonpositive row count");
    }
  }
};

/// n x m nonnegative utilities, weighted rows (counts[i] voters share row i).
template <class T>
struct UtilityMatrix {
  int m = 0;
  std::vector<std::vector<T>> rows;
  std::vector<long long> counts;

  UtilityMatrix() = default;

  static UtilityMatrix dense(std::vector<std::vector<T>> entries) {
    UtilityMatrix u;
    if (entries.empty()) throw InputError("UtilityMatrix: no voters");
    u.m = static_cast<int>(entries[0].size());
    u.rows = std::move(entries);
    u.counts.assign(u.rows.size(), 1);
    u.validate();
    return u;
  }

  static UtilityMatrix weighted(int m, std::vector<std::vector<T>> entries,
                                std::vector<long long> counts) {
    UtilityMatrix u;
    u.m = m;
    u.rows = std::move(entries);
    u.counts = std::move(counts);
    u.validate();
    return u;
  }

  long long voters() const { return std::accumulate(counts.begin(), counts.end(), 0LL); }
  size_t row_count() const { return rows.size(); }

  void validate() const {
    if (m < 2) throw InputError("UtilityMatrix: need m >= 2");
    if (rows.empty()) throw InputError("UtilityMatrix: need n >= 1");
    if (rows.size() != counts.size()) throw InputError("UtilityMatrix: rows/counts mismatch");
    for (size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(rows[i].size()) != m)
        throw InputError("UtilityMatrix: row " + std::to_string(i) + " has wrong length");
      if (counts[i] < 1) throw InputError("UtilityMatrix: nonpositive row count");
      for (const T& v : rows[i])
        if (v < T(0)) throw InputError("UtilityMatrix: negative utility");
    }
  }
};

/// Per-voter public spirit levels in [0,1], aligned with UtilityMatrix rows.
template <class T>
struct PSVector {
  std::vector<T> values;  // one entry per utility row

  PSVector() = default;
  explicit PSVector(std::vector<T> v) : values(std::move(v)) { validate(); }

  static PSVector uniform(const T& gamma, size_t row_count) {
    PSVector g;
    g.values.assign(row_count, gamma);
    g.validate();
    return g;
  }

  T min() const {
    T best = values.at(0);
    for (const T& v : values) best = std::min(best, v);
    return best;
  }

  void validate() const {
    if (values.empty()) throw InputError("PSVector: empty");
    for (const T& v : values)
      if (v < T(0) || v > T(1)) throw InputError("PSVector: entry outside [0,1]");
  }
};

/// Per-voter, per-alternative public spirit (the generalized model).
template <class T>
struct PSMatrix {
  int m = 0;
  std::vector<std::vector<T>> rows;  // aligned with UtilityMatrix rows

  PSMatrix() = default;
  PSMatrix(int m_, std::vector<std::vector<T>> r) : m(m_), rows(std::move(r)) { validate(); }

  static PSMatrix from_vector(const PSVector<T>& g, int m) {
    PSMatrix gm;
    gm.m = m;
    for (const T& v : g.values) gm.rows.push_back(std::vector<T>(m, v));
    return gm;
  }

  T min() const {
    T best = rows.at(0).at(0);
    for (const auto& r : rows)
      for (const T& v : r) best = std::min(best, v);
    return best;
  }

  void validate() const {
    if (rows.empty()) throw InputError("PSMatrix: empty");
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != m) throw InputError("PSMatrix: row length mismatch");
      for (const T& v : r)
        if (v < T(0) || v > T(1)) throw InputError("PSMatrix: entry outside [0,1]");
    }
  }
};

/// Multiplicative misestimation factors, all >= 1 (overestimates w.l.o.g.).
template <class T>
struct ErrorMatrices {
  int m = 0;
  std::vector<std::vector<T>> delta;
  std::vector<std::vector<T>> eta;

  ErrorMatrices() = default;
  ErrorMatrices(int m_, std::vector<std::vector<T>> d, std::vector<std::vector<T>> e)
      : m(m_), delta(std::move(d)), eta(std::move(e)) {
    validate();
  }

  static ErrorMatrices ones(int m, size_t row_count) {
    ErrorMatrices em;
    em.m = m;
    em.delta.assign(row_count, std::vector<T>(m, T(1)));
    em.eta.assign(row_count, std::vector<T>(m, T(1)));
    return em;
  }

  T delta_star() const { return max_of(delta); }
  T eta_star() const { return max_of(eta); }

  void validate() const {
    if (delta.size() != eta.size()) throw InputError("ErrorMatrices: delta/eta shape mismatch");
    for (const auto* mat : {&delta, &eta})
      for (const auto& r : *mat) {
        if (static_cast<int>(r.size()) != m) throw InputError("ErrorMatrices: row length mismatch");
        for (const T& v : r)
          if (v < T(1)) throw InputError("ErrorMatrices: entry < 1");
      }
  }

 private:
  static T max_of(const std::vector<std::vector<T>>& mat) {
    T best = mat.at(0).at(0);
    for (const auto& r : mat)
      for (const T& v : r) best = std::max(best, v);
    return best;
  }
};

/// PS-values (one row per utility row) plus the welfare column sums of the
/// matrix that produced them; tie-break policies that look at welfare need
/// the provenance.
template <class T>
struct PSValueMatrix {
  int m = 0;
  std::vector<std::vector<T>> rows;
  std::vector<long long> counts;
  std::vector<T> welfare;  // sw(a, U) of the source utility matrix
  long long n = 0;
  std::string provenance;

  long long voters() const { return n; }
};

struct TiePolicy {
  enum class Kind {
    lexicographic,         // ties broken by ascending alternative index
    enumerate_all,         // every consistent profile, up to cap
    welfare_adversarial,   // heuristic: ties broken ascending by welfare
  };
  Kind kind = Kind::lexicographic;
  long long cap = 100000;  // enumeration cap (profiles)

  static TiePolicy lex() { return {Kind::lexicographic, 100000}; }
  static TiePolicy enumerate(long long cap = 100000) { return {Kind::enumerate_all, cap}; }
  static TiePolicy adversarial() { return {Kind::welfare_adversarial, 100000}; }
};

}  // namespace psvote
