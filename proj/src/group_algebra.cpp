//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "treelat/group_algebra.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace treelat {

namespace {

std::uint64_t to_u64(const Integer &z, const char *what) {
  if (z < 0 || !z.fits_ulong_p())
    throw precondition_error("OrderTooLarge",
                             std::string(what) + " does not fit in 64 bits");
  return z.get_ui();
}

} // namespace

SemidirectTower::SemidirectTower(Weights weights, std::size_t k)
    : weights_(std::move(weights)), k_(k) {
  if (k_ < 1)
    throw precondition_error("InvalidTower", "k must be at least 1");
  modulus_ = to_u64(weights_.h(k_), "h(k)");
  for (std::uint64_t u = 1; u < modulus_; ++u)
    if (std::gcd(u, modulus_) == 1)
      units_.push_back(u);
  if (modulus_ == 1)
    units_.push_back(0);
}

std::pair<std::uint64_t, std::uint64_t>
SemidirectTower::factor_moduli(std::size_t j) const {
  if (j <= k_)
    return {to_u64(weights_.h(j), "|G_j|"), 1};
  Integer second = weights_.h(j) / weights_.h(k_);
  return {modulus_, to_u64(second, "|G_j|")};
}

std::uint64_t SemidirectTower::small_order(std::size_t j) const {
  auto [p, q] = factor_moduli(j);
  return p * q;
}

SemidirectTower::Element SemidirectTower::include(std::size_t j,
                                                  Element g) const {
  const std::uint64_t mult = weights_.ratio(j);
  if (j < k_) {
    auto [mod_next, unused] = factor_moduli(j + 1);
    (void)unused;
    return {(g.a * mult) % mod_next, 0};
  }
  auto [unused, mod_second] = factor_moduli(j + 1);
  (void)unused;
  return {g.a, (g.b * mult) % mod_second};
}

SemidirectTower::Element SemidirectTower::act(std::size_t j,
                                              std::uint64_t unit,
                                              Element g) const {
  auto [mod_first, unused] = factor_moduli(j);
  (void)unused;
  // For j <= k this is the pullback of multiplication on G_k along the
  // inclusions, i.e. multiplication by the unit reduced mod h(j).
  return {static_cast<std::uint64_t>(
              (static_cast<unsigned __int128>(unit % mod_first) * g.a) %
              mod_first),
          g.b};
}

SemidirectTower::Element SemidirectTower::add(std::size_t j, Element x,
                                              Element y) const {
  auto [p, q] = factor_moduli(j);
  return {(x.a + y.a) % p, (x.b + y.b) % q};
}

SemidirectTower::Element SemidirectTower::element(std::size_t j,
                                                  std::uint64_t idx) const {
  auto [p, q] = factor_moduli(j);
  (void)q;
  return {idx % p, idx / p};
}

std::uint64_t SemidirectTower::index_of(std::size_t j, Element g) const {
  auto [p, q] = factor_moduli(j);
  (void)q;
  return g.b * p + g.a;
}

GroupDesc GroupDesc::cyclic(Integer order) {
  GroupDesc g;
  g.kind = Kind::cyclic;
  g.orders = {std::move(order)};
  return g;
}

GroupDesc GroupDesc::product(Integer a, Integer b) {
  GroupDesc g;
  g.kind = Kind::product;
  g.orders = {std::move(a), std::move(b)};
  return g;
}

GroupDesc GroupDesc::semidirect(std::shared_ptr<const SemidirectTower> tower,
                                std::size_t level, std::uint64_t extra) {
  GroupDesc g;
  g.kind = Kind::semidirect;
  g.tower = std::move(tower);
  g.level = level;
  g.extra = extra;
  return g;
}

Integer GroupDesc::order() const {
  switch (kind) {
  case Kind::cyclic:
    return orders.at(0);
  case Kind::product:
    return orders.at(0) * orders.at(1);
  case Kind::semidirect:
    return tower->order(level) * Integer(tower->unit_count()) * Integer(extra);
  }
  return 0;
}

std::string GroupDesc::describe() const {
  std::ostringstream os;
  switch (kind) {
  case Kind::cyclic:
    os << "Z/" << orders[0].get_str();
    break;
  case Kind::product:
    os << "Z/" << orders[0].get_str() << " x Z/" << orders[1].get_str();
    break;
  case Kind::semidirect:
    os << "G_" << level << " x| U(Z/" << tower->modulus() << ")";
    if (extra != 1)
      os << " x Z/" << extra;
    break;
  }
  return os.str();
}

std::vector<GroupElement> enumerate_elements(const GroupDesc &g,
                                             std::uint64_t bound) {
  Integer order = g.order();
  if (order > Integer(static_cast<unsigned long>(bound)))
    throw precondition_error("OrderTooLarge",
                             "group " + g.describe() +
                                 " exceeds the enumeration bound");
  std::vector<GroupElement> out;
  out.reserve(order.get_ui());
  switch (g.kind) {
  case GroupDesc::Kind::cyclic:
    for (std::uint64_t x = 0; x < g.orders[0].get_ui(); ++x)
      out.push_back({x});
    break;
  case GroupDesc::Kind::product:
    for (std::uint64_t x = 0; x < g.orders[0].get_ui(); ++x)
      for (std::uint64_t y = 0; y < g.orders[1].get_ui(); ++y)
        out.push_back({x, y});
    break;
  case GroupDesc::Kind::semidirect: {
    const auto &t = *g.tower;
    const std::uint64_t gsize = t.small_order(g.level);
    for (std::uint64_t idx = 0; idx < gsize; ++idx) {
      auto e = t.element(g.level, idx);
      for (auto u : t.units())
        for (std::uint64_t c = 0; c < g.extra; ++c)
          out.push_back({e.a, e.b, u, c});
    }
    break;
  }
  }
  return out;
}

GroupElement multiply(const GroupDesc &g, const GroupElement &x,
                      const GroupElement &y) {
  switch (g.kind) {
  case GroupDesc::Kind::cyclic:
    return {(x[0] + y[0]) % g.orders[0].get_ui()};
  case GroupDesc::Kind::product:
    return {(x[0] + y[0]) % g.orders[0].get_ui(),
            (x[1] + y[1]) % g.orders[1].get_ui()};
  case GroupDesc::Kind::semidirect: {
    const auto &t = *g.tower;
    // (g, u)(g', u') = (g + u.g', u u')
    auto moved = t.act(g.level, x[2], {y[0], y[1]});
    auto sum = t.add(g.level, {x[0], x[1]}, moved);
    return {sum.a, sum.b, t.unit_multiply(x[2], y[2]),
            (x[3] + y[3]) % g.extra};
  }
  }
  return {};
}

std::vector<GroupElement> generators(const GroupDesc &g) {
  switch (g.kind) {
  case GroupDesc::Kind::cyclic:
    return {{g.orders[0] == 1 ? 0u : 1u}};
  case GroupDesc::Kind::product:
    return {{1 % g.orders[0].get_ui(), 0}, {0, 1 % g.orders[1].get_ui()}};
  case GroupDesc::Kind::semidirect: {
    const auto &t = *g.tower;
    auto [p, q] = t.factor_moduli(g.level);
    std::uint64_t one = t.units().front();
    std::vector<GroupElement> gens{{1 % p, 0, one, 0}};
    if (q > 1)
      gens.push_back({0, 1, one, 0});
    if (g.extra > 1)
      gens.push_back({0, 0, one, 1});
    // Greedy generating set of the unit group.
    std::set<std::uint64_t> span{one};
    for (auto u : t.units()) {
      if (span.count(u))
        continue;
      gens.push_back({0, 0, u, 0});
      std::vector<std::uint64_t> frontier(span.begin(), span.end());
      while (!frontier.empty()) {
        std::vector<std::uint64_t> next;
        for (auto x : frontier)
          for (const auto &gen : gens) {
            auto y = t.unit_multiply(x, gen[2]);
            if (span.insert(y).second)
              next.push_back(y);
          }
        frontier = std::move(next);
      }
    }
    return gens;
  }
  }
  return {};
}

std::string Injection::describe() const {
  switch (kind) {
  case Kind::cyclic_multiply:
    return "[1] -> [" + std::to_string(factor) + "]";
  case Kind::identity:
    return "identity";
  case Kind::tower_step:
    return "iota x id";
  case Kind::first_factor:
    return "first factor";
  }
  return "";
}

GroupElement apply(const Injection &inj, const GroupDesc &from,
                   const GroupDesc &to, const GroupElement &x) {
  switch (inj.kind) {
  case Injection::Kind::cyclic_multiply: {
    const std::uint64_t mod = to.orders.at(0).get_ui();
    return {static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(x[0]) * inj.factor) % mod)};
  }
  case Injection::Kind::identity:
    return x;
  case Injection::Kind::tower_step: {
    auto img = from.tower->include(from.level, {x[0], x[1]});
    return {img.a, img.b, x[2], 0};
  }
  case Injection::Kind::first_factor:
    return {x[0], x[1], x[2], 0};
  }
  return x;
}

std::vector<std::string> check_injection(const Injection &inj,
                                         const GroupDesc &from,
                                         const GroupDesc &to,
                                         std::uint64_t bound) {
  std::vector<std::string> out;
  if (from.order() > Integer(static_cast<unsigned long>(bound)))
    return out;
  if (inj.kind == Injection::Kind::cyclic_multiply &&
      (from.kind != GroupDesc::Kind::cyclic ||
       to.kind != GroupDesc::Kind::cyclic)) {
    out.push_back("cyclic injection between non-cyclic groups");
    return out;
  }
  if ((inj.kind == Injection::Kind::tower_step ||
       inj.kind == Injection::Kind::first_factor) &&
      (from.kind != GroupDesc::Kind::semidirect ||
       to.kind != GroupDesc::Kind::semidirect)) {
    out.push_back("tower injection between non-semidirect groups");
    return out;
  }
  if (inj.kind == Injection::Kind::identity &&
      from.describe() != to.describe()) {
    out.push_back("identity between different groups");
    return out;
  }
  if (inj.kind == Injection::Kind::cyclic_multiply &&
      (Integer(static_cast<unsigned long>(inj.factor)) * from.orders[0]) %
              to.orders[0] != 0) {
    out.push_back("[1] -> [" + std::to_string(inj.factor) +
                  "] is not well defined");
    return out;
  }
  auto elements = enumerate_elements(from, bound);
  std::set<GroupElement> images;
  for (const auto &x : elements)
    images.insert(apply(inj, from, to, x));
  if (images.size() != elements.size())
    out.push_back("map " + inj.describe() + " from " + from.describe() +
                  " is not injective");
  for (const auto &gen : generators(from))
    for (const auto &y : elements) {
      auto lhs = apply(inj, from, to, multiply(from, gen, y));
      auto rhs = multiply(to, apply(inj, from, to, gen),
                          apply(inj, from, to, y));
      if (lhs != rhs) {
        out.push_back("map " + inj.describe() + " from " + from.describe() +
                      " is not a homomorphism");
        return out;
      }
    }
  return out;
}

} // namespace treelat
