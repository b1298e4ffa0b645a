//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TREELAT_TESTS_COVER_CHECKS_HPP
#define TREELAT_TESTS_COVER_CHECKS_HPP

#include <string>
#include <vector>

#include "treelat/grouping.hpp"

namespace treelat::testing {

/// Degree agreement, deg(q) Vol(A) = Vol(B) and the divisibility of vertex
/// group orders (and their p-parts) along q. Returns failures.
inline std::vector<std::string> check_cover(const CoverMap &cover) {
  std::vector<std::string> out;
  auto v = verify_cover(cover);
  out.insert(out.end(), v.begin(), v.end());
  if (!out.empty())
    return out;
  auto degs = cover_degrees(cover);
  const std::int64_t d = degs.front();
  for (auto x : degs)
    if (x != d)
      out.push_back("degree differs between vertices");
  auto [na, nb] = cover_orderings(cover);
  auto ga = canonical_cyclic_grouping(cover.target, na);
  auto gb = canonical_cyclic_grouping(cover.source, nb);
  const Selector all = Selector::parse("all");
  if (Rational(d) * covolume(ga, all) != covolume(gb, all))
    out.push_back("deg(q) Vol(A) != Vol(B)");
  if (!volume_ratio_check(cover, ga, gb))
    out.push_back("volume_ratio_check failed");
  for (VertexId b = 0; b < cover.source.vertex_count(); ++b) {
    const Integer ob = nb.vertex(b).get_num();
    const Integer oa = na.vertex(cover.vertex_map[b]).get_num();
    if (oa % ob != 0 || oa / ob < 1 || oa / ob > d)
      out.push_back("order of B_" + cover.source.vertex(b).id +
                    " does not divide with ratio in [1, deg]");
    for (int p : {2, 3, 5}) {
      const Integer pb = p_part(ob, p), pa = p_part(oa, p);
      if (pa % pb != 0 || pa / pb > d)
        out.push_back("p-part lemma fails for p = " + std::to_string(p));
    }
  }
  return out;
}

} // namespace treelat::testing

#endif
