//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_GROWTH_HPP
#define TREELAT_GROWTH_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treelat/graph_io.hpp"
#include "treelat/grouping.hpp"
#include "treelat/indexed_graph.hpp"
#include "treelat/weights.hpp"

namespace treelat {

/// A function N -> N>=1, either from a symbolic family or tabulated on a
/// prefix with an optional symbolic tail. Every symbolic family takes an
/// argument shift: f(k) = F(k + shift).
class GrowthFunction {
public:
  enum class Family { polynomial, exponential, stretched, product, tabulated };

  /// sum_i coeffs[i] (k + shift)^i, constant term first.
  static GrowthFunction polynomial(std::vector<Integer> coeffs,
                                   std::size_t shift = 0);
  static GrowthFunction constant_one() { return polynomial({1}); }
  /// ceil(alpha^(k + shift)) for rational alpha > 0.
  static GrowthFunction exponential(Rational alpha, std::size_t shift = 0);
  /// ceil(exp((k + shift)^beta)) for rational beta in (0, 1).
  static GrowthFunction stretched(Rational beta, std::size_t shift = 0);
  /// h(k + shift) = (s_1 - 1)...(s_{k+shift} - 1).
  static GrowthFunction product(const AdmissibleSequence &s,
                                std::size_t shift = 0);
  /// values[k] for k < size; beyond the table the tail (if any) is used.
  static GrowthFunction tabulated(std::vector<Integer> values,
                                  std::optional<GrowthFunction> tail = {});

  /// Text forms: "one", "poly:c0,c1,...", "exp:3/2", "stretched:1/2",
  /// "product:n:prefix;period" (e.g. "product:6:;3,6"), each optionally
  /// followed by "@shift".
  static GrowthFunction parse(const std::string &text);

  Family family() const { return family_; }
  std::size_t shift() const { return shift_; }
  const std::vector<Integer> &coefficients() const { return coeffs_; }
  const Rational &parameter() const { return param_; } // alpha or beta
  const Weights &weights() const { return *weights_; } // product only
  const std::vector<Integer> &values() const { return coeffs_; }
  const GrowthFunction *tail() const { return tail_.get(); }

  /// True when the function is determined for every k.
  bool total() const;
  /// True when comparisons can be decided from a symbolic family.
  bool has_symbolic_rate() const;

  Integer at(std::size_t k) const;
  /// Values at 0..k_max.
  std::vector<Integer> table(std::size_t k_max) const;
  std::string describe() const;

  /// sum_{i >= start} f(i) / h(offset + i), when a closed form exists
  /// (polynomials, bounded exponentials, tabulated prefixes with such tails).
  std::optional<Rational> series_exact(const Weights &h, std::size_t offset,
                                       std::size_t start = 0) const;
  /// A rational upper bound for the same series that tends to the true
  /// tail as start grows. Exponentials use ceil(x) <= x + 1. Throws
  /// DivergentSeries when no bound is available.
  Rational series_upper(const Weights &h, std::size_t offset,
                        std::size_t start = 0) const;

private:
  Family family_ = Family::polynomial;
  std::vector<Integer> coeffs_; // polynomial coefficients or table values
  Rational param_;
  std::size_t shift_ = 0;
  std::shared_ptr<const Weights> weights_;
  std::shared_ptr<const GrowthFunction> tail_;
};

/// f(k) <= scale * g(k + shift).
struct Witness {
  Integer scale = 1;
  std::size_t shift = 0;
};

/// Three-valued answer to f <= g. `symbolic` means the verdict holds for all
/// k; otherwise it refers to the comparison range only. The witness is
/// verified on 0..range either way.
struct Verdict {
  enum class Value { yes, no, undetermined };
  Value value = Value::undetermined;
  bool symbolic = false;
  std::optional<Witness> witness;
  std::string certificate;
  std::size_t range = 0;
};

struct Equivalence {
  Verdict forward;  // f <= g
  Verdict backward; // g <= f
  Verdict::Value value() const;
};

/// Prefix comparisons accept witnesses with scale up to `max_scale`.
struct CompareOptions {
  std::size_t range = 48;
  std::size_t max_shift = 24;
  Integer max_scale = Integer(1000000);
};

Verdict preceq(const GrowthFunction &f, const GrowthFunction &g,
               const CompareOptions &options = {});
Equivalence equivalent(const GrowthFunction &f, const GrowthFunction &g,
                       const CompareOptions &options = {});

/// Best witness (smallest scale, then smallest shift) on 0..range.
Witness best_witness(const std::vector<Integer> &f, const GrowthFunction &g,
                     std::size_t max_shift);

struct Acceptability {
  Verdict::Value value = Verdict::Value::undetermined;
  std::vector<std::string> reasons; // failures, or why undetermined
};

/// f(0) = 1, 1 <= f(j+1) <= 2 f(j), sum f(j)/2^j finite.
Acceptability is_acceptable(const GrowthFunction &f);

/// Half-edge metric: radius k reaches combinatorial distance 2k.
/// Largest radius whose ball avoids the truncation boundary, or nullopt
/// when the graph has no frontier vertices.
std::optional<std::size_t> reliable_radius(const EdgeIndexedGraph &graph,
                                           VertexId base);

/// g(k) = #vertices within half-edge distance k. Throws
/// TruncationTooShallow when k_max exceeds reliable_radius.
GrowthFunction ball_growth(const EdgeIndexedGraph &graph, VertexId base,
                           std::size_t k_max);

/// g(k) = max N(v) over the radius-k ball (V0 vertices only if v0_only).
GrowthFunction stabilizer_growth(const EdgeIndexedGraph &graph,
                                 const Ordering &ordering, VertexId base,
                                 std::size_t k_max, bool v0_only = false);
GrowthFunction stabilizer_growth(const FiniteGrouping &grouping, VertexId base,
                                 std::size_t k_max, bool v0_only = false);

/// Largest power of p dividing N; p must be prime.
Integer p_order(const Integer &N, const Integer &p);

GrowthFunction p_stabilizer_growth(const EdgeIndexedGraph &graph,
                                   const Ordering &ordering, VertexId base,
                                   const Integer &p, std::size_t k_max,
                                   bool v0_only = false);

/// sum_{i >= start} alpha^i / h(offset + i); needs alpha^P < h(j+P)/h(j).
Rational geometric_series(const Weights &h, const Rational &alpha,
                          std::size_t offset, std::size_t start);

Json growth_to_json(const GrowthFunction &f);
GrowthFunction growth_from_json(const Json &doc);
Json verdict_to_json(const Verdict &v);
Json equivalence_to_json(const Equivalence &e);
std::string to_string(Verdict::Value v);

} // namespace treelat

#endif
