#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "sll/json_io.hpp"
#include "sll/random.hpp"
#include "sll/sll.hpp"

using namespace sll;
using json_io::json;

TEST(JsonRing, RoundTrip) {
  for (const auto& r : {WittRing::make(2, 1, 3), WittRing::make(3, 2, 2), WittRing::make(5, 1, 1)}) {
    const json j = json_io::ring_to_json(r);
    EXPECT_EQ(json_io::ring_from_json(j), r);
    EXPECT_EQ(json_io::ring_from_json(json::parse(j.dump())), r);
  }
}

TEST(JsonRing, DefaultsAndErrors) {
  EXPECT_EQ(json_io::ring_from_json(json{{"p", 3}, {"n", 2}}), WittRing::make(3, 1, 2));
  EXPECT_THROW(json_io::ring_from_json(json{{"p", 4}, {"n", 2}}), json_io::schema_error);
  EXPECT_THROW(json_io::ring_from_json(json{{"p", 3}}), json_io::schema_error);
  EXPECT_THROW(json_io::ring_from_json(json{{"p", "3"}, {"n", 2}}), json_io::schema_error);
  EXPECT_THROW(json_io::ring_from_json(json{{"p", 3}, {"n", 0}}), json_io::schema_error);
  EXPECT_THROW(json_io::ring_from_json(json{{"p", 2}, {"m", 2}, {"n", 1}, {"modulus", {1, 0, 1}}}), precondition_error);
  EXPECT_THROW(json_io::ring_from_json(json{{"p", 2}, {"m", 3}, {"n", 1}, {"modulus", {1, 1, 1}}}),
               json_io::schema_error);
}

TEST(JsonElement, RoundTrip) {
  std::mt19937_64 rng(1);
  for (const auto& r : {WittRing::make(2, 2, 3), WittRing::make(3, 1, 4), WittRing::make(5, 2, 2)}) {
    for (int t = 0; t < 30; ++t) {
      const WittElement a = r.random(rng);
      EXPECT_EQ(json_io::element_from_json(json_io::element_to_json(a)), a);
      EXPECT_EQ(json_io::scalar_from_json(r, json_io::scalar_to_json(a)), a);
      json d = json_io::ring_to_json(r);
      d["digits"] = json_io::digits_to_json(a);
      EXPECT_EQ(json_io::element_from_json(d), a);
    }
  }
}

TEST(JsonElement, DigitsInput) {
  const WittRing r = WittRing::make(2, 1, 2);
  EXPECT_EQ(json_io::element_from_json(json{{"p", 2}, {"n", 2}, {"digits", {0, 1}}}), r.from_int(2));
  EXPECT_THROW(json_io::element_from_json(json{{"p", 2}, {"n", 2}, {"digits", {2}}}), json_io::schema_error);
  EXPECT_THROW(json_io::element_from_json(json{{"p", 2}, {"n", 2}, {"digits", {0, 1, 1}}}), json_io::schema_error);
  EXPECT_THROW(json_io::element_from_json(json{{"p", 2}, {"n", 2}}), json_io::schema_error);
  EXPECT_THROW(json_io::scalar_from_json(r, json("1")), json_io::schema_error);
}

TEST(JsonMatrix, RoundTripAndShape) {
  std::mt19937_64 rng(2);
  const WittRing r = WittRing::make(3, 2, 2);
  const Matrix m = random_invertible(r, 4, rng);
  EXPECT_EQ(json_io::matrix_from_json(r, json_io::matrix_to_json(m), 4, 4, "m"), m);
  EXPECT_THROW(json_io::matrix_from_json(r, json_io::matrix_to_json(m), 3, 4, "m"), json_io::schema_error);
  EXPECT_THROW(json_io::matrix_from_json(r, json_io::matrix_to_json(m), 4, 3, "m"), json_io::schema_error);
}

TEST(JsonModule, RoundTrip) {
  for (auto c : {StandardCase::iia, StandardCase::iib, StandardCase::ordinary, StandardCase::lagrangian_generic}) {
    const auto m = make_standard(WittRing::make(3, 2, 3), c);
    const auto back = json_io::module_from_json(json::parse(json_io::module_to_json(m).dump()));
    EXPECT_EQ(back.F(), m.F());
    EXPECT_EQ(back.V(), m.V());
    EXPECT_EQ(back.J(), m.J());
  }
  EXPECT_THROW(json_io::module_from_json(json{{"ring", {{"p", 3}, {"n", 2}}}}), json_io::schema_error);
}

TEST(JsonSeries, RoundTripThroughTermsAndText) {
  std::mt19937_64 rng(3);
  for (const auto& r : {WittRing::make(2, 1, 3), WittRing::make(3, 2, 2)}) {
    const SeriesRing ring(r, 4, 5);
    for (int t = 0; t < 20; ++t) {
      const auto f = random_series(ring, {}, rng);
      json j = json_io::series_to_json(f);
      EXPECT_EQ(json_io::series_from_json(j), f);
      j.erase("terms");
      EXPECT_EQ(json_io::series_from_json(j), f);
    }
  }
}

TEST(JsonSeries, DegreeDefaultsAndOverride) {
  const json j{{"ring", {{"p", 5}, {"n", 2}}}, {"nvars", 2}, {"text", "p + x1*x2"}};
  EXPECT_EQ(json_io::series_from_json(j).ring().degree(), default_truncation_degree(5));
  EXPECT_EQ(json_io::series_from_json(j, 4).ring().degree(), 4);
}

TEST(JsonSeries, Errors) {
  const json ring{{"p", 3}, {"n", 2}};
  EXPECT_THROW(json_io::series_from_json(json{{"ring", ring}, {"nvars", 2}}), json_io::schema_error);
  EXPECT_THROW(json_io::series_from_json(json{{"ring", ring}, {"nvars", 2}, {"terms", {{{"exp", {1}}, {"coeff", 1}}}}}),
               json_io::schema_error);
  EXPECT_THROW(json_io::series_from_json(json{{"ring", ring}, {"nvars", 2}, {"names", {"a"}}, {"text", "a"}}),
               json_io::schema_error);
  EXPECT_THROW(json_io::series_from_json(json{{"ring", ring}, {"nvars", 2}, {"text", "x1 +"}}), precondition_error);
}

TEST(JsonQuadform, RoundTrip) {
  std::mt19937_64 rng(4);
  const WittRing r = WittRing::make(5, 1, 3);
  for (int t = 0; t < 10; ++t) {
    const QuadraticForm q = random_nondegenerate_form(r, 4, rng);
    EXPECT_EQ(json_io::quadform_from_json(r, json_io::quadform_to_json(q)), q);
  }
  EXPECT_THROW(json_io::quadform_from_json(r, json{{"nvars", 2}, {"upper", {1, 2}}}), json_io::schema_error);
}

TEST(JsonNormalForm, RoundTripPreservesTheCertificate) {
  std::mt19937_64 rng(5);
  const SeriesRing ring(WittRing::make(3, 1, 3), 4, 5);
  for (int t = 0; t < 10; ++t) {
    const auto f = random_series(ring, {1, 2, 0.3}, rng);
    const auto nf = std::get<NormalFormResult>(normal_form(f));
    const auto back = json_io::normal_form_from_json(json::parse(json_io::normal_form_to_json(nf).dump()));
    EXPECT_EQ(back.a_prime, nf.a_prime);
    EXPECT_EQ(back.q_prime, nf.q_prime);
    EXPECT_EQ(back.unit, nf.unit);
    EXPECT_EQ(back.phi, nf.phi);
    EXPECT_TRUE(verify_certificate(f, back));
  }
}

TEST(JsonPlane, RoundTrip) {
  const WittRing k = field_of_order(4);
  for (const auto& pl : enumerate_special_fiber(4)) EXPECT_EQ(json_io::plane_from_json(k, json_io::plane_to_json(pl)), pl);
}

TEST(JsonLocalClass, Fields) {
  const WittRing r = WittRing::make(3, 1, 3);
  const auto odp = json_io::local_class_to_json(classify_local_ring(chart_equation(r)));
  EXPECT_EQ(odp["class"], "OrdinaryDoublePoint");
  EXPECT_EQ(odp["a_prime"], 3);
  EXPECT_EQ(odp["a_prime_valuation"], 1);
  const auto smooth = json_io::local_class_to_json(
      classify_local_ring(parse_series(SeriesRing(r, 4, 4), "p*x2 - x3")));
  EXPECT_EQ(smooth["class"], "Smooth");
  EXPECT_TRUE(smooth.contains("smooth_variable"));
}
