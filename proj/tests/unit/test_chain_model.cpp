#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "spinwire/chain_io.hpp"
#include "spinwire/chain_model.hpp"

using namespace spinwire;

TEST_CASE("hopping matrices follow the half-coupling convention") {
  const auto spec = make_chain({0.8, 1.0}, {0.2, -0.4}, {0.1, 0.0, -0.3});
  const auto hm = build_hopping(spec);
  CHECK(hm.a(0, 0) == 0.1);
  CHECK(hm.a(2, 2) == -0.3);
  CHECK(hm.a(0, 1) == 0.4);
  CHECK(hm.a(1, 0) == 0.4);
  CHECK(hm.a(1, 2) == 0.5);
  CHECK(hm.a(0, 2) == 0.0);
  CHECK(hm.b(0, 1) == -0.1);
  CHECK(hm.b(1, 0) == 0.1);
  CHECK(hm.b(1, 2) == 0.2);
  CHECK((hm.a - hm.a.transpose()).norm() == 0.0);
  CHECK((hm.b + hm.b.transpose()).norm() == 0.0);
}

TEST_CASE("single site chain") {
  const auto hm = build_hopping(make_chain({}, {}, {2.0}));
  CHECK(hm.size() == 1);
  CHECK(hm.a(0, 0) == 2.0);
  CHECK(hm.b(0, 0) == 0.0);
}

TEST_CASE("validation rejects malformed chains") {
  CHECK_THROWS_AS(make_chain({1.0}, {0.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_chain({1.0, 1.0}, {0.0}, {0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_chain({1.0}, {0.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_chain({NAN}, {0.0}, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_chain({1.0}, {0.0}, {0.0, INFINITY}), std::invalid_argument);
}

TEST_CASE("presets") {
  SUBCASE("xx_minimal") {
    const auto s = xx_minimal(6, 0.6);
    CHECK(s.j == std::vector<double>{0.6, 1, 1, 1, 0.6});
    CHECK(s.number_conserving());
    CHECK(is_mirror_symmetric(s));
    CHECK_THROWS_AS(xx_minimal(2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(xx_minimal(5, 0.0), std::invalid_argument);
  }
  SUBCASE("xx_multi_param") {
    const double b[] = {0.3, 0.7, 0.9};
    const auto s = xx_multi_param(8, b);
    CHECK(s.j == std::vector<double>{0.3, 0.7, 0.9, 1, 0.9, 0.7, 0.3});
    CHECK_THROWS_AS(xx_multi_param(5, b), std::invalid_argument);
  }
  SUBCASE("xy_minimal") {
    const auto s = xy_minimal(5, 0.5, 1.1, 1.0, 1.5);
    CHECK(s.j == std::vector<double>{0.5, 1, 1, 0.5});
    CHECK(s.gamma == std::vector<double>{0.5, 1, 1, 0.5});
    CHECK(s.h == std::vector<double>{1.1, 1.5, 1.5, 1.5, 1.1});
    CHECK_FALSE(s.number_conserving());
    CHECK(is_mirror_symmetric(s));
  }
  SUBCASE("pst_chain") {
    const auto s = pst_chain(4);
    CHECK(s.j[0] == doctest::Approx(std::sqrt(3.0)));
    CHECK(s.j[1] == doctest::Approx(2.0));
    CHECK(s.j[2] == doctest::Approx(std::sqrt(3.0)));
  }
}

TEST_CASE("interior and reflected chains") {
  const auto s = make_chain({0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, {1, 2, 3, 4});
  const auto in = interior_chain(s);
  CHECK(in.size() == 3);
  CHECK(in.j == std::vector<double>{0.2, 0.3});
  CHECK(in.h == std::vector<double>{2, 3, 4});
  const auto r = reflected(s);
  CHECK(r.j == std::vector<double>{0.3, 0.2, 0.1});
  CHECK(r.gamma == std::vector<double>{0.6, 0.5, 0.4});
  CHECK(r.h == std::vector<double>{4, 3, 2, 1});
  CHECK_FALSE(is_mirror_symmetric(s));
}

TEST_CASE("persymmetry and mirror compatibility") {
  CHECK(exchange_matrix(3) == (Eigen::Matrix3d() << 0, 0, 1, 0, 1, 0, 1, 0, 0).finished());
  const auto xx = build_hopping(xx_minimal(7, 0.4));
  CHECK(is_persymmetric(xx.a));
  CHECK(mirror_compatibility(xx.a, xx.b, 0.0));
  CHECK(mirror_compatibility(xx.a, xx.b, 1.234));  // B = 0: any phase

  // Mirror-symmetric pairing is antisymmetric under reflection: XBX = -B.
  const auto xy = build_hopping(xy_minimal(6, 0.5, 0.9, 0.7, 1.2));
  const Eigen::MatrixXd x = exchange_matrix(6);
  CHECK((x * xy.b * x + xy.b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(mirror_compatibility(xy.a, xy.b, std::numbers::pi / 2));
  CHECK_FALSE(mirror_compatibility(xy.a, xy.b, std::numbers::pi));
  CHECK_FALSE(mirror_compatibility(xy.a, xy.b, 0.3));

  const auto lopsided = build_hopping(make_chain({0.5, 1.0}, {0.0, 0.0}, {0, 0, 0}));
  CHECK_FALSE(is_persymmetric(lopsided.a));
  CHECK_FALSE(mirror_compatibility(lopsided.a, lopsided.b, 0.0));
}

TEST_CASE("json round trip and presets") {
  const auto s = xy_minimal(7, 0.45, 1.05, 1.0, 1.5);
  const auto back = chain_from_json(to_json(s));
  CHECK(back.j == s.j);
  CHECK(back.gamma == s.gamma);
  CHECK(back.h == s.h);

  const auto p = chain_from_json(nlohmann::json{{"preset", "xx_multi"}, {"n", 9}, {"boundary", {0.3, 0.7}}});
  CHECK(p.j == std::vector<double>{0.3, 0.7, 1, 1, 1, 1, 0.7, 0.3});
  const auto q = chain_from_json(nlohmann::json{{"preset", "pst"}, {"n", 5}});
  CHECK(q.j[1] == doctest::Approx(std::sqrt(6.0)));

  CHECK_THROWS_AS(chain_from_json(nlohmann::json{{"preset", "nope"}, {"n", 5}}), std::invalid_argument);
  CHECK_THROWS_AS(chain_from_json(nlohmann::json{{"n", 3}, {"j", {1.0}}, {"gamma", {0.0, 0.0}}, {"h", {0, 0, 0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(chain_from_json(nlohmann::json::array()), std::invalid_argument);
  CHECK_THROWS_AS(load_chain("/nonexistent/chain.json"), std::invalid_argument);

  const std::string path = "chain_model_roundtrip.json";
  {
    std::ofstream f(path);
    f << to_json(s).dump();
  }
  CHECK(load_chain(path).h == s.h);
  std::remove(path.c_str());
}
