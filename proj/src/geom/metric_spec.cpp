#include "finsler/geom/metric_spec.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "finsler/errors.hpp"
#include "finsler/geom/linalg.hpp"
#include "json.hpp"

namespace finsler {

using nlohmann::json;

const char* family_name(MetricFamily f) {
  switch (f) {
    case MetricFamily::riemannian: return "riemannian";
    case MetricFamily::finsleroid: return "finsleroid";
    case MetricFamily::conformal: return "conformal";
  }
  return "?";
}

namespace {

void reject_unknown_fields(const json& j, const std::set<std::string>& allowed,
                           const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      fail(errc::schema, std::string("unknown field \"") + it.key() + "\" in " + where);
  }
}

PolyScalar parse_poly(const json& j, int dim) {
  if (!j.is_object()) fail(errc::schema, "polynomial must be an object with a \"terms\" array");
  reject_unknown_fields(j, {"terms"}, "polynomial");
  if (!j.contains("terms") || !j["terms"].is_array())
    fail(errc::schema, "polynomial needs a \"terms\" array");
  std::vector<PolyScalar::Term> terms;
  for (const json& tj : j["terms"]) {
    if (!tj.is_object()) fail(errc::schema, "polynomial term must be an object");
    reject_unknown_fields(tj, {"powers", "coeff"}, "polynomial term");
    if (!tj.contains("powers") || !tj.contains("coeff"))
      fail(errc::schema, "polynomial term needs \"powers\" and \"coeff\"");
    PolyScalar::Term t;
    if (!tj["powers"].is_array() || static_cast<int>(tj["powers"].size()) != dim)
      fail(errc::schema, "term \"powers\" must be an array of length n");
    for (const json& e : tj["powers"]) {
      if (!e.is_number_integer()) fail(errc::schema, "term powers must be integers");
      t.powers.push_back(e.get<int>());
    }
    if (!tj["coeff"].is_number()) fail(errc::schema, "term coefficient must be a number");
    t.coeff = tj["coeff"].get<double>();
    terms.push_back(std::move(t));
  }
  return PolyScalar(dim, std::move(terms));
}

json poly_to_json(const PolyScalar& p) {
  json terms = json::array();
  for (const auto& t : p.terms()) {
    json tj;
    tj["powers"] = t.powers;
    tj["coeff"] = t.coeff;
    terms.push_back(tj);
  }
  return json{{"terms", terms}};
}

MetricSpec parse_spec_json(const json& j);

json spec_to_json(const MetricSpec& s) {
  json j;
  j["dimension"] = s.dim;
  j["family"] = family_name(s.family);
  if (s.family != MetricFamily::conformal) {
    json rows = json::array();
    for (int i = 0; i < s.dim; ++i) {
      json row = json::array();
      for (int k = 0; k < s.dim; ++k)
        row.push_back(poly_to_json(s.a[static_cast<size_t>(i) * s.dim + k]));
      rows.push_back(row);
    }
    j["a"] = rows;
  }
  if (s.family == MetricFamily::finsleroid) {
    json bs = json::array();
    for (int i = 0; i < s.dim; ++i) bs.push_back(poly_to_json(s.b[static_cast<size_t>(i)]));
    j["b"] = bs;
    j["charge"] = poly_to_json(s.charge);
    if (s.auto_normalize_axis) j["auto_normalize_axis"] = true;
  }
  if (s.family == MetricFamily::conformal) {
    j["alpha"] = poly_to_json(s.alpha);
    j["inner"] = spec_to_json(*s.inner);
  }
  return j;
}

void validate_at_base_point(const MetricSpec& s) {
  const std::vector<double> x0(static_cast<size_t>(s.dim), 0.0);
  if (s.family == MetricFamily::conformal) return; // inner validated recursively at parse
  // symmetry is structural: compare evaluations of a_ij and a_ji termwise at probe points
  for (int i = 0; i < s.dim; ++i)
    for (int k = i + 1; k < s.dim; ++k) {
      for (int probe = 0; probe < 3; ++probe) {
        std::vector<double> xp(static_cast<size_t>(s.dim));
        for (int d = 0; d < s.dim; ++d)
          xp[static_cast<size_t>(d)] = 0.1 * (probe + 1) * (d + 1) * (d == i ? -1 : 1);
        const double lhs = s.a[static_cast<size_t>(i) * s.dim + k].eval(xp);
        const double rhs = s.a[static_cast<size_t>(k) * s.dim + i].eval(xp);
        if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(lhs)))
          fail(errc::schema, "a_ij must be symmetric");
      }
    }
  (void)s.a_at(x0); // positive definiteness at the base point
  if (s.family == MetricFamily::finsleroid) {
    const double g = s.charge.eval(x0);
    if (!(g > -2.0 && g < 2.0))
      fail(errc::schema, "the finsleroid charge must satisfy -2 < g < 2", g);
    (void)s.b_at(x0); // unit normalization (or auto-normalize)
  }
}

MetricSpec parse_spec_json(const json& j) {
  if (!j.is_object()) fail(errc::schema, "spec document must be an object");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    fail(errc::schema, "spec needs an integer \"dimension\"");
  if (!j.contains("family") || !j["family"].is_string())
    fail(errc::schema, "spec needs a \"family\" string");

  MetricSpec s;
  s.dim = j["dimension"].get<int>();
  if (s.dim < 1 || s.dim > 8) fail(errc::schema, "dimension must be in [1,8]");
  const std::string fam = j["family"].get<std::string>();
  if (fam == "riemannian")
    s.family = MetricFamily::riemannian;
  else if (fam == "finsleroid")
    s.family = MetricFamily::finsleroid;
  else if (fam == "conformal")
    s.family = MetricFamily::conformal;
  else
    fail(errc::schema, "family must be riemannian, finsleroid, or conformal");

  switch (s.family) {
    case MetricFamily::riemannian:
      reject_unknown_fields(j, {"dimension", "family", "a"}, "riemannian spec");
      break;
    case MetricFamily::finsleroid:
      reject_unknown_fields(j, {"dimension", "family", "a", "b", "charge", "auto_normalize_axis"},
                            "finsleroid spec");
      break;
    case MetricFamily::conformal:
      reject_unknown_fields(j, {"dimension", "family", "alpha", "inner"}, "conformal spec");
      break;
  }

  if (s.family != MetricFamily::conformal) {
    if (!j.contains("a") || !j["a"].is_array() || static_cast<int>(j["a"].size()) != s.dim)
      fail(errc::schema, "spec needs an n x n \"a\" matrix of polynomials");
    for (int i = 0; i < s.dim; ++i) {
      const json& row = j["a"][static_cast<size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != s.dim)
        fail(errc::schema, "each row of \"a\" must have n entries");
      for (int k = 0; k < s.dim; ++k) s.a.push_back(parse_poly(row[static_cast<size_t>(k)], s.dim));
    }
  }
  if (s.family == MetricFamily::finsleroid) {
    if (!j.contains("b") || !j["b"].is_array() || static_cast<int>(j["b"].size()) != s.dim)
      fail(errc::schema, "finsleroid spec needs an n-vector \"b\"");
    for (int i = 0; i < s.dim; ++i) s.b.push_back(parse_poly(j["b"][static_cast<size_t>(i)], s.dim));
    if (!j.contains("charge")) fail(errc::schema, "finsleroid spec needs a \"charge\"");
    s.charge = parse_poly(j["charge"], s.dim);
    if (j.contains("auto_normalize_axis")) {
      if (!j["auto_normalize_axis"].is_boolean())
        fail(errc::schema, "auto_normalize_axis must be a boolean");
      s.auto_normalize_axis = j["auto_normalize_axis"].get<bool>();
    }
  } else {
    s.charge = PolyScalar::zero(s.dim);
  }
  if (s.family == MetricFamily::conformal) {
    if (!j.contains("alpha")) fail(errc::schema, "conformal spec needs an \"alpha\"");
    s.alpha = parse_poly(j["alpha"], s.dim);
    if (!j.contains("inner")) fail(errc::schema, "conformal spec needs an \"inner\" spec");
    MetricSpec inner = parse_spec_json(j["inner"]);
    if (inner.dim != s.dim) fail(errc::schema, "inner spec dimension mismatch");
    s.inner = std::make_shared<const MetricSpec>(std::move(inner));
  } else {
    s.alpha = PolyScalar::zero(s.dim);
  }

  validate_at_base_point(s);
  return s;
}

} // namespace

MetricSpec MetricSpec::parse(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::exception& e) {
    fail(errc::schema, std::string("spec document is not valid JSON: ") + e.what());
  }
  return parse_spec_json(j);
}

MetricSpec MetricSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::schema, "cannot open spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string MetricSpec::to_document() const { return spec_to_json(*this).dump(2); }

std::string MetricSpec::digest() const {
  const std::string doc = spec_to_json(*this).dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : doc) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double MetricSpec::total_alpha(const std::vector<double>& x) const {
  if (family != MetricFamily::conformal) return 0.0;
  return alpha.eval(x) + inner->total_alpha(x);
}

std::vector<double> MetricSpec::a_at(const std::vector<double>& x) const {
  const MetricSpec& s = base();
  std::vector<double> m(static_cast<size_t>(s.dim) * s.dim);
  for (int i = 0; i < s.dim; ++i)
    for (int k = 0; k < s.dim; ++k)
      m[static_cast<size_t>(i) * s.dim + k] = s.a[static_cast<size_t>(i) * s.dim + k].eval(x);
  (void)linalg::cholesky(m, s.dim, "a_ij is not positive definite at the evaluated point");
  return m;
}

std::vector<double> MetricSpec::b_at(const std::vector<double>& x) const {
  const MetricSpec& s = base();
  if (s.family != MetricFamily::finsleroid)
    fail(errc::config, "axis data only exists for finsleroid specs");
  std::vector<double> bv(static_cast<size_t>(s.dim));
  for (int i = 0; i < s.dim; ++i) bv[static_cast<size_t>(i)] = s.b[static_cast<size_t>(i)].eval(x);
  const std::vector<double> am = s.a_at(x);
  const std::vector<double> ainv = linalg::spd_inverse(am, s.dim, "a_ij not positive definite");
  const double norm2 = linalg::quadratic_form(ainv, bv, bv, s.dim);
  if (s.auto_normalize_axis) {
    if (!(norm2 > 0.0)) fail(errc::schema, "axis vanishes; cannot normalize", norm2);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : bv) v *= inv;
  } else if (std::abs(norm2 - 1.0) > 1e-8) {
    fail(errc::schema, "finsleroid axis must satisfy a^{ij} b_i b_j = 1 (or enable auto_normalize_axis)",
         norm2);
  }
  return bv;
}

double MetricSpec::charge_at(const std::vector<double>& x) const {
  const MetricSpec& s = base();
  const double g = s.charge.eval(x);
  if (!(g > -2.0 && g < 2.0))
    fail(errc::inadmissible_point, "finsleroid charge out of (-2,2) at the evaluated point", g);
  return g;
}

MetricSpec conformal_wrap(const MetricSpec& inner, const PolyScalar& alpha) {
  if (alpha.dim() != inner.dim) fail(errc::schema, "alpha dimension mismatch");
  MetricSpec s;
  s.dim = inner.dim;
  s.family = MetricFamily::conformal;
  s.alpha = alpha;
  s.charge = PolyScalar::zero(inner.dim);
  s.inner = std::make_shared<const MetricSpec>(inner);
  return s;
}

} // namespace finsler
