#pragma once

#include <json.hpp>

#include "pickfactor/freefock.hpp"
#include "pickfactor/kernel_ratio.hpp"
#include "pickfactor/moments.hpp"
#include "pickfactor/multi_poly.hpp"

namespace pickfactor {

// ordered_json keeps insertion order, which makes output byte-stable.
using Json = nlohmann::ordered_json;

Json space_to_json(const KernelSpace& space);
KernelSpace space_from_json(const Json& j);

// {"space": {...}, "poly": [{"index": [...], "re":, "im":}, ...]}
Json poly_to_json(const MultiPoly& f);
// Terms only, for embedding under custom keys.
Json poly_terms_to_json(const MultiPoly& f);
MultiPoly poly_from_json(const Json& j);

// {"dim": d, "terms": [{"word": [...], "re":, "im":}, ...]}
Json free_poly_to_json(const FreePoly& F);
FreePoly free_poly_from_json(const Json& j);

Json kernel_ratio_to_json(const KernelRatio& ratio);

Json moment_profile_to_json(const MomentProfile& profile);

Json point_to_json(const Point& z, int dim);
Point point_from_json(const Json& j, int dim);

cplx complex_from_json(const Json& j);
Json complex_to_json(const cplx& v);

}  // namespace pickfactor
