#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "grflab/integrate.hpp"
#include "grflab/lie_frame.hpp"
#include "grflab/tensor.hpp"

namespace grflab {

using Json = nlohmann::ordered_json;

inline Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    auto e = m.exps();
    terms.push_back({{"exp", {e[0], e[1], e[2], e[3]}},
                     {"num", c.get_num().get_str()},
                     {"den", c.get_den().get_str()}});
  }
  return {{"terms", terms}};
}

inline Polynomial polynomial_from_json(const Json& j) {
  try {
    std::vector<Polynomial::Term> raw;
    for (const auto& t : j.at("terms")) {
      const auto& e = t.at("exp");
      if (e.size() != 4) throw ParseError("monomial exponent needs 4 entries");
      Rational c(mpz_class(t.at("num").get<std::string>(), 10), mpz_class(t.at("den").get<std::string>(), 10));
      if (sgn(c.get_den()) == 0) throw ParseError("zero denominator");
      c.canonicalize();
      raw.emplace_back(Monomial(e[0].get<unsigned>(), e[1].get<unsigned>(), e[2].get<unsigned>(), e[3].get<unsigned>()), c);
    }
    return Polynomial::from_terms(std::move(raw));
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("malformed polynomial JSON: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw ParseError(std::string("malformed integer in polynomial JSON: ") + ex.what());
  }
}

inline Json to_json(const IntegralValue& v) { return {{"coeff", to_string(v.coeff)}, {"unit", "pi^2"}}; }

inline IntegralValue integral_from_json(const Json& j) {
  try {
    if (j.at("unit").get<std::string>() != "pi^2") throw ParseError("integral unit must be pi^2");
    return IntegralValue{parse_rational(j.at("coeff").get<std::string>())};
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("malformed integral JSON: ") + ex.what());
  }
}

namespace detail {
inline Json nested(const Tensor<Polynomial>& t, std::size_t offset, int slot) {
  Json a = Json::array();
  std::size_t stride = 1;
  for (int s = slot + 1; s < t.rank(); ++s) stride *= static_cast<std::size_t>(t.dim());
  for (int i = 0; i < t.dim(); ++i) {
    const std::size_t at = offset + static_cast<std::size_t>(i) * stride;
    a.push_back(slot + 1 == t.rank() ? to_json(t.data()[at]) : nested(t, at, slot + 1));
  }
  return a;
}
}  // namespace detail

inline Json to_json(const Tensor<Polynomial>& t) {
  Json j = {{"rank", t.rank()}, {"sym", to_string(t.symmetry())}};
  j["components"] = t.rank() == 0 ? to_json(t.data()[0]) : detail::nested(t, 0, 0);
  return j;
}

inline Json to_json(const LieGroupModel& m) {
  Json c = Json::array(), g = Json::array();
  for (const auto& q : m.c) c.push_back(to_string(q));
  for (const auto& q : m.g0) g.push_back(to_string(q));
  return {{"n", m.n}, {"c", c}, {"g0", g}};
}

/// {"n": n, "c": [n^3 rationals, c^k_ij at (k n + i) n + j], "g0": [n^2 rationals]}.
inline LieGroupModel model_from_json(const Json& j) {
  try {
    LieGroupModel m(j.at("n").get<int>());
    if (m.n <= 0) throw ParseError("model dimension must be positive");
    const auto& c = j.at("c");
    const auto& g = j.at("g0");
    if (c.size() != m.c.size() || g.size() != m.g0.size()) throw ParseError("model arrays have the wrong length");
    auto rat = [](const Json& v) { return v.is_number_integer() ? Rational(v.get<long>()) : parse_rational(v.get<std::string>()); };
    for (std::size_t k = 0; k < c.size(); ++k) m.c[k] = rat(c[k]);
    for (std::size_t k = 0; k < g.size(); ++k) m.g0[k] = rat(g[k]);
    return m;
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("malformed model JSON: ") + ex.what());
  }
}

}  // namespace grflab
