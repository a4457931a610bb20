#include "pickfactor/json_io.hpp"

#include "pickfactor/errors.hpp"

namespace pickfactor {

namespace {

double number_at(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw Error(ErrorKind::bad_input,
                std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

}  // namespace

Json complex_to_json(const cplx& v) {
  return Json{{"re", v.real()}, {"im", v.imag()}};
}

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      throw Error(ErrorKind::bad_input, "complex array must be [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
  }
  if (j.is_object()) return cplx(number_at(j, "re"), number_at(j, "im"));
  throw Error(ErrorKind::bad_input, "cannot read a complex number");
}

Json space_to_json(const KernelSpace& space) {
  Json j;
  j["family"] = family_name(space.family());
  j["dim"] = space.dim();
  j["working_degree"] = space.working_degree();
  if (space.family() == Family::d_alpha) j["alpha"] = space.alpha();
  if (space.family() == Family::custom) j["coeffs"] = space.coeffs();
  return j;
}

KernelSpace space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family"))
    throw Error(ErrorKind::bad_input, "space needs a 'family' field");
  const Family family = family_from_name(j["family"].get<std::string>());
  const int wd = j.contains("working_degree")
                     ? j["working_degree"].get<int>()
                     : KernelSpace::kDefaultWorkingDegree;
  const int dim = j.contains("dim") ? j["dim"].get<int>() : 1;
  switch (family) {
    case Family::hardy: return KernelSpace::hardy(wd);
    case Family::dirichlet: return KernelSpace::dirichlet(wd);
    case Family::d_alpha:
      return KernelSpace::d_alpha(number_at(j, "alpha"), dim, wd);
    case Family::drury_arveson: return KernelSpace::drury_arveson(dim, wd);
    case Family::custom: {
      if (!j.contains("coeffs") || !j["coeffs"].is_array())
        throw Error(ErrorKind::bad_input, "custom space needs 'coeffs'");
      return KernelSpace::custom(j["coeffs"].get<std::vector<double>>(), dim);
    }
  }
  throw Error(ErrorKind::bad_input, "unknown space family");
}

Json poly_terms_to_json(const MultiPoly& f) {
  Json terms = Json::array();
  for (const auto& [alpha, c] : f.terms()) {
    Json t;
    t["index"] = alpha;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  return terms;
}

Json poly_to_json(const MultiPoly& f) {
  Json j;
  j["space"] = space_to_json(f.space());
  j["poly"] = poly_terms_to_json(f);
  return j;
}

MultiPoly poly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("poly"))
    throw Error(ErrorKind::bad_input, "polynomial needs 'space' and 'poly'");
  const KernelSpace space = space_from_json(j["space"]);
  MultiPoly f(space);
  for (const Json& t : j["poly"]) {
    if (!t.contains("index") || !t["index"].is_array())
      throw Error(ErrorKind::bad_input, "term needs an 'index' array");
    const MultiIndex alpha = t["index"].get<MultiIndex>();
    f.set_coeff(alpha, cplx(number_at(t, "re"), number_at(t, "im")));
  }
  return f;
}

Json free_poly_to_json(const FreePoly& F) {
  Json j;
  j["dim"] = F.dim();
  Json terms = Json::array();
  for (const auto& [w, c] : F.terms()) {
    Json t;
    t["word"] = w;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

FreePoly free_poly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("terms"))
    throw Error(ErrorKind::bad_input, "free polynomial needs 'dim', 'terms'");
  FreePoly F(j["dim"].get<int>());
  for (const Json& t : j["terms"]) {
    if (!t.contains("word") || !t["word"].is_array())
      throw Error(ErrorKind::bad_input, "term needs a 'word' array");
    const Word w = t["word"].get<Word>();
    F.set_coeff(w, F.coeff(w) + cplx(number_at(t, "re"), number_at(t, "im")));
  }
  return F;
}

Json point_to_json(const Point& z, int dim) {
  if (dim == 1) return Json::array({z[0].real(), z[0].imag()});
  Json j = Json::array();
  for (const cplx& c : z) j.push_back(Json::array({c.real(), c.imag()}));
  return j;
}

Point point_from_json(const Json& j, int dim) {
  if (!j.is_array()) throw Error(ErrorKind::bad_input, "point must be an array");
  Point z;
  if (!j.empty() && j[0].is_number()) {
    // Flat [re, im] form, one coordinate.
    z.push_back(complex_from_json(j));
  } else {
    for (const Json& c : j) z.push_back(complex_from_json(c));
  }
  if (static_cast<int>(z.size()) != dim)
    throw Error(ErrorKind::dimension_mismatch,
                "point has " + std::to_string(z.size()) + " coordinates, space has " +
                    std::to_string(dim));
  return z;
}

Json kernel_ratio_to_json(const KernelRatio& ratio) {
  const auto part = [&](const KernelRatio::Part& p) {
    Json j;
    if (std::holds_alternative<MultiPoly>(p)) {
      j["kind"] = "poly";
      j["terms"] = poly_terms_to_json(std::get<MultiPoly>(p));
    } else {
      const KernelCombo& combo = std::get<KernelCombo>(p);
      j["kind"] = "kernel_combo";
      Json pts = Json::array();
      for (const Point& z : combo.points)
        pts.push_back(point_to_json(z, ratio.space().dim()));
      Json ws = Json::array();
      for (const cplx& w : combo.weights) ws.push_back(complex_to_json(w));
      j["points"] = std::move(pts);
      j["weights"] = std::move(ws);
      j["truncation"] = combo.truncation;
    }
    return j;
  };
  Json j;
  j["space"] = space_to_json(ratio.space());
  j["numerator"] = part(ratio.numerator());
  j["denominator"] = part(ratio.denominator());
  return j;
}

Json moment_profile_to_json(const MomentProfile& profile) {
  Json j;
  j["order"] = profile.order;
  j["norm_sq"] = profile.norm_sq;
  Json entries = Json::array();
  for (const auto& [alpha, m] : profile.entries) {
    Json e;
    e["index"] = alpha;
    e["re"] = m.real();
    e["im"] = m.imag();
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace pickfactor
