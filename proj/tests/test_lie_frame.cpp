#include <catch_amalgamated.hpp>

#include "grflab/lie_frame.hpp"

using namespace grflab;

namespace {

bool has(const std::vector<Violation>& v, const std::string& id) {
  for (const auto& x : v)
    if (x.identity == id) return true;
  return false;
}

}  // namespace

TEST_CASE("su(2) structure is valid", "[lie]") {
  auto m = su2_lie_model();
  CHECK(validate_structure(m).empty());
  CHECK(is_bi_invariant(m));
  CHECK(m.C(2, 0, 1) == 2);
  CHECK(m.C(0, 1, 2) == 2);
  CHECK(m.C(1, 0, 2) == -2);
}

TEST_CASE("violations are reported", "[lie]") {
  auto m = su2_lie_model();
  m.C(2, 0, 1) = 3;  // no longer antisymmetric
  CHECK(has(validate_structure(m), "antisymmetry"));

  // antisymmetric but not Jacobi: [e0,e1] = e1, [e1,e2] = e0, [e0,e2] = 0
  LieGroupModel bad(3);
  bad.C(1, 0, 1) = 1;
  bad.C(1, 1, 0) = -1;
  bad.C(0, 1, 2) = 1;
  bad.C(0, 2, 1) = -1;
  auto v = validate_structure(bad);
  CHECK(has(v, "jacobi"));
  CHECK_FALSE(has(v, "antisymmetry"));

  auto neg = su2_lie_model();
  neg.G(1, 1) = -1;
  CHECK(has(validate_structure(neg), "metric positivity"));

  auto skew = su2_lie_model();
  skew.G(0, 0) = 2;
  CHECK(has(validate_structure(skew), "ad-invariance"));
  CHECK_FALSE(is_bi_invariant(skew));
  CHECK_THROWS_AS(torsion_form(skew), NotBiInvariant);
}

TEST_CASE("bi-invariant torsion", "[lie]") {
  auto H = torsion_form(su2_lie_model());
  CHECK(H(0, 1, 2) == 2);
  CHECK(H(1, 2, 0) == 2);
  CHECK(H(1, 0, 2) == -2);
  CHECK(H(0, 0, 2) == 0);
  CHECK(symmetry_holds(H));
  CHECK(torsion_form(su2_lie_model(-1))(0, 1, 2) == -2);

  LieGroupModel abelian(3);
  CHECK(validate_structure(abelian).empty());
  auto h0 = torsion_form(abelian);
  for (const auto& x : h0.data()) CHECK(x == 0);

  auto scaled_model = su2_lie_model();
  for (int i = 0; i < 3; ++i) scaled_model.G(i, i) = Rational(5, 3);
  CHECK(validate_structure(scaled_model).empty());
  CHECK(torsion_form(scaled_model)(0, 1, 2) == Rational(10, 3));
}

TEST_CASE("ambient frame fields realize the algebra", "[lie]") {
  auto s = su2_model();
  CHECK(frame_check(s.model, s.frame).empty());
  auto wrong = s;
  wrong.model.C(2, 0, 1) = -2;
  wrong.model.C(2, 1, 0) = 2;
  CHECK(has(frame_check(wrong.model, wrong.frame), "bracket"));
  auto swapped = s;
  swapped.frame.right = swapped.frame.left;
  CHECK(has(frame_check(swapped.model, swapped.frame), "left/right commutation"));
}
