#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "classifier_table.hpp"
#include "doctest.h"
#include "spl/mapping.hpp"

using namespace spl;

namespace {

PotentialSpec spec(SettingId s, double sigma, PotentialVariant v = PotentialVariant::Riesz) {
  PotentialSpec p;
  p.setting = s;
  p.sigma = sigma;
  p.variant = v;
  return p;
}

double grid_coord(int i, int n) { return double(i) / (n - 1); }

}  // namespace

TEST_CASE("thresholds") {
  CHECK(thresholds(SettingId::jacobi_pol(0, 0)).delta == 1.0);
  CHECK(thresholds(SettingId::jacobi_fun(-0.7, 0)).kappa == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(thresholds(SettingId::fb_natural(-0.5)).eta == 0.5);
  CHECK(thresholds(SettingId::jacobi_pol(-0.9, -0.8)).delta == 0.5);
  const auto t = thresholds(SettingId::fb_lebesgue(0.3));
  CHECK(t.transfer.alpha == 0.3);
  CHECK(t.transfer.beta == 0.5);
  CHECK(t.lebesgue);
}

TEST_CASE("exponent pairs") {
  const auto e = ExponentPair::from_pq(1, INFINITY);
  CHECK(e.inv_p == 1.0);
  CHECK(e.inv_q == 0.0);
  CHECK_THROWS_AS(ExponentPair::from_pq(0.5, 2), ParameterError);
  CHECK_THROWS_AS((ExponentPair{1.2, 0}.validate()), ParameterError);
  CHECK(parse_mapping_type(mapping_type_name(MappingType::RestrictedWeak)) == MappingType::RestrictedWeak);
}

TEST_CASE("hand-transcribed classification table") {
  const auto rows = testdata::classifier_table();
  CHECK(rows.size() >= 30);
  for (const auto& r : rows) {
    CAPTURE(r.note);
    CAPTURE(r.setting.describe());
    CAPTURE(r.sigma);
    CAPTURE(r.inv_p);
    CAPTURE(r.inv_q);
    const auto ps = spec(r.setting, r.sigma);
    CHECK(mapping_type_name(classify(ps, {r.inv_p, r.inv_q})) == mapping_type_name(r.type));
    ClassifierOptions strict;
    strict.mode = ClassifyMode::Strict;
    CHECK(mapping_type_name(classify(ps, {r.inv_p, r.inv_q}, strict)) == mapping_type_name(r.type));
  }
}

TEST_CASE("parameter restrictions") {
  const auto s = SettingId::jacobi_pol(-0.3, -0.7);
  CHECK_THROWS_AS(classify(spec(s, 0.5), {0.5, 0.5}), ParameterError);
  CHECK_NOTHROW(classify(spec(s, 0.5, PotentialVariant::Bessel), {0.5, 0.5}));
  CHECK_THROWS_AS(classify(spec(SettingId::jacobi_pol(0, 0), 0.5), {1.5, 0.5}), ParameterError);
}

TEST_CASE("totality, duality and symmetry on full grids") {
  const int n = 41;
  for (auto [s, sg] : {std::pair{SettingId::jacobi_pol(0.5, -0.3), 0.4}, {SettingId::jacobi_fun(-0.7, 0.2), 0.25},
                       {SettingId::jacobi_fun(0.3, 1.0), 0.2}, {SettingId::fb_lebesgue(-0.8), 0.6}}) {
    const auto ps = spec(s, sg);
    int mism = 0, unstated = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = grid_coord(i, n), y = grid_coord(j, n);
        const auto t = classify(ps, {x, y});
        unstated += t == MappingType::Unstated;
        if ((t == MappingType::Strong) != (classify(ps, {1 - y, 1 - x}) == MappingType::Strong)) ++mism;
      }
    CHECK(unstated == 0);
    CHECK(mism == 0);
  }
  // the statements are symmetric in (alpha, beta)
  for (auto fun : {false, true}) {
    const auto a = fun ? SettingId::jacobi_fun(-0.7, 0.4) : SettingId::jacobi_pol(-0.7, 0.4);
    const auto b = fun ? SettingId::jacobi_fun(0.4, -0.7) : SettingId::jacobi_pol(0.4, -0.7);
    int diff = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const ExponentPair e{grid_coord(i, n), grid_coord(j, n)};
        diff += classify(spec(a, 0.3), e) != classify(spec(b, 0.3), e);
      }
    CHECK(diff == 0);
  }
}

TEST_CASE("FB settings classify like their Jacobi counterparts") {
  const int n = 64;
  for (double nu : {-0.8, -0.4, 0.0, 1.2})  // nu = -1/2 would hit alpha + beta = -1 on the Jacobi side
    for (double sg : {0.1, 0.3, 0.5, 0.7, 2.5}) {
      int diff = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const ExponentPair e{grid_coord(i, n), grid_coord(j, n)};
          diff += classify(spec(SettingId::fb_natural(nu), sg), e) != classify(spec(SettingId::jacobi_pol(nu, -0.5), sg), e);
          diff += classify(spec(SettingId::fb_lebesgue(nu), sg), e) != classify(spec(SettingId::jacobi_fun(nu, 0.5), sg), e);
        }
      CHECK(diff == 0);
    }
}

TEST_CASE("consistency audit and mutation") {
  for (auto [s, sg] : {std::pair{SettingId::jacobi_pol(0, 0), 0.5}, {SettingId::jacobi_pol(0, 0), 1.0},
                       {SettingId::jacobi_fun(0, 0), 0.2}, {SettingId::jacobi_fun(-0.7, 0), 0.3},
                       {SettingId::jacobi_fun(-0.7, 0), 0.1}, {SettingId::fb_lebesgue(-0.9), 0.5}}) {
    CAPTURE(s.describe());
    CAPTURE(sg);
    const auto v = consistency_audit(spec(s, sg), 32);
    CHECK(v.empty());
    if (!v.empty()) MESSAGE(v.front().rule << ": " << v.front().detail);
  }
  // forgetting the removed corner at sigma = kappa + 1/2 is caught
  ClassifierOptions mutated;
  mutated.drop_b2_exception = true;
  CHECK_FALSE(consistency_audit(spec(SettingId::jacobi_fun(-0.7, 0), 0.3), 32, mutated).empty());
  // and changes nothing away from that equality case
  CHECK(consistency_audit(spec(SettingId::jacobi_fun(-0.7, 0), 0.25), 32, mutated).empty());
}

TEST_CASE("disproof catalog agrees with the classifier") {
  for (auto [s, sg] : {std::pair{SettingId::jacobi_pol(0, 0), 0.5}, {SettingId::jacobi_fun(-0.7, 0), 0.25}}) {
    const auto ps = spec(s, sg);
    const auto cat = disproof_catalog(ps);
    CHECK_FALSE(cat.empty());
    for (const auto& d : cat) {
      CAPTURE(d.id);
      CHECK(static_cast<int>(classify(ps, d.at)) < static_cast<int>(d.disproved));
    }
  }
}

TEST_CASE("near-boundary flag") {
  const auto ps = spec(SettingId::jacobi_pol(0, 0), 0.5);
  CHECK(near_boundary(ps, {0.75, 0.25 + 1e-8}));
  CHECK_FALSE(near_boundary(ps, {0.75, 0.25}));
  CHECK_FALSE(near_boundary(ps, {0.75, 0.5}));
}

TEST_CASE("region grid csv") {
  const auto ps = spec(SettingId::jacobi_fun(-0.7, 0), 0.25);
  std::stringstream a, b;
  write_region_grid_csv(a, ps, 9);
  write_region_grid_csv(b, ps, 17);
  std::string line;
  std::getline(a, line);
  CHECK(line == "inv_p,inv_q,type");
  std::getline(b, line);
  // every point of the coarse grid reappears unchanged in the doubled grid
  std::set<std::string> fine;
  while (std::getline(b, line)) fine.insert(line);
  int rows = 0;
  while (std::getline(a, line)) {
    ++rows;
    CHECK(fine.count(line) == 1);
  }
  CHECK(rows == 81);
  CHECK(fine.size() == 17 * 17);
  CHECK_THROWS_AS(write_region_grid_csv(a, ps, 4), ParameterError);
}

TEST_CASE("extremal functions") {
  ExtremalParams p;
  p.spec = spec(SettingId::jacobi_pol(0, 0), 0.5);  // delta = 1
  const auto e1 = extremal_function("E1", p, 1.0 / 16);
  CHECK(e1.f(0.05) == 1.0);
  CHECK(e1.f(0.07) == 0.0);
  const auto e2 = extremal_function("E2", p, 0);
  CHECK(e2.f(0.5) == doctest::Approx(1 / (std::pow(0.5, 1.0) * std::log(4.0))));
  CHECK(e2.f(1.5) == 0.0);
  // E3 needs eps < 1/p - sigma/delta - 1/q
  p.pq = {1, 0.2};
  const auto e3 = extremal_function("E3", p, 0.1);
  CHECK(e3.A == doctest::Approx(-2 * 1.0 + 2 * 0.1));
  CHECK(e3.f(0.5) == doctest::Approx(std::pow(0.5, e3.A)));
  CHECK_THROWS_AS(extremal_function("E3", p, 0.4), ParameterError);
  CHECK_THROWS_AS(extremal_function("E9", p, 0.1), ParameterError);
  // E7 needs kappa < 0
  CHECK_THROWS_AS(extremal_function("E7", p, 0), ParameterError);
}

TEST_CASE("a quick sharpness probe") {
  for (const auto& np : sharpness_probe_suite()) {
    if (np.id != "T2-E1") continue;
    const auto r = blowup_probe(np.spec);
    CHECK(r.confirmed);
    CHECK(r.band <= 2.0);
    CHECK(r.ladder.size() >= 8);
  }
}
