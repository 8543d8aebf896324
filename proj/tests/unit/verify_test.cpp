#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "gmc/verify.h"

using namespace gmc;
using namespace gmc::verify;

TEST_CASE("identity suite") {
  const std::vector<CheckReport> reports = run_identity_suite(IdentityGrid{}, 2);
  CHECK(count_failures(reports) == 0);
  CHECK(std::is_sorted(reports.begin(), reports.end(),
                       [](const CheckReport& x, const CheckReport& y) { return x.check_id < y.check_id; }));
  std::set<std::string> points;
  double gmin = 10, gmax = 0;
  bool negative_p = false, positive_p = false;
  for (const CheckReport& r : reports) {
    if (r.status == CheckStatus::fail) {
      MESSAGE(r.check_id << " " << r.rel_err);
    }
    if (r.metadata.count("p") && r.metadata.count("gamma")) {
      points.insert(r.metadata.at("gamma") + "/" + r.metadata.at("p") + "/" +
                    (r.metadata.count("a") ? r.metadata.at("a") : "") + "/" +
                    (r.metadata.count("b") ? r.metadata.at("b") : ""));
      const double g = std::stod(r.metadata.at("gamma"));
      const double p = std::stod(r.metadata.at("p"));
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
      negative_p |= p < 0;
      positive_p |= p > 0;
    }
  }
  CHECK(points.size() >= 60);
  CHECK(gmin <= 0.6);
  CHECK(gmax >= 1.75);
  CHECK(negative_p);
  CHECK(positive_p);
}

TEST_CASE("suite output does not depend on threads") {
  IdentityGrid small;
  small.gammas = {0.9, 1.5};
  small.dgamma_points = 5;
  CHECK(reports_to_json(run_identity_suite(small, 1)) == reports_to_json(run_identity_suite(small, 3)));
}

TEST_CASE("single identities") {
  CHECK(check_selberg(1.0, 2, 0.0, 0.0).status == CheckStatus::pass);
  CHECK(check_law_decomposition({1.2, -0.8, 0.1, 0.4}).status == CheckStatus::pass);
  for (CheckReport r : {check_selberg(1.2, 0, 0.1, 0.2), check_fubini(1.2, 0.1, 0.2),
                        check_shift({1.2, 0.0, 0.1, 0.2}, exactlaw::ShiftKind::a_plus_one),
                        check_c_ratio(1.2, 0.0), check_c2(1.2, 0.0, 0.3),
                        check_law_decomposition({1.2, 0.0, 0.1, 0.2}), check_martingale(0.0)}) {
    CHECK_MESSAGE(r.status == CheckStatus::pass, r.check_id);
  }
  CHECK(check_dgamma_unit(1.3).status == CheckStatus::pass);
  CHECK(check_dgamma_shift(1.0, 0.7, false).status == CheckStatus::pass);
  CHECK(check_dgamma_shift(1.0, 0.3, true).status == CheckStatus::pass);
}

TEST_CASE("out-of-bounds points are skipped") {
  const CheckReport r = check_selberg(1.0, 3, -0.9, 0.0);
  CHECK(r.status == CheckStatus::skipped);
}

TEST_CASE("quadrature identity") {
  const CheckReport pi = quadrature_identity_check(0.5, -1.0);
  CHECK(pi.status == CheckStatus::pass);
  CHECK(pi.rhs == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(pi.lhs == doctest::Approx(std::numbers::pi).epsilon(1e-8));
  CHECK(quadrature_identity_check(0.3, -0.5).status == CheckStatus::pass);
  CHECK(quadrature_identity_check(0.7, -2.0).status == CheckStatus::pass);
  CHECK(quadrature_identity_check(-0.4, -0.5).status == CheckStatus::pass);
  CHECK(quadrature_identity_check(-0.4, -0.5).metadata.at("form") == "subtracted");
  CHECK(quadrature_identity_check(0.5, -1.0).metadata.at("form") == "beta_continuation");
  CHECK(quadrature_identity_check(0.0, -1.0).status == CheckStatus::skipped);
  CHECK(quadrature_identity_check(-1.0, -1.0).status == CheckStatus::skipped);
  CHECK(quadrature_identity_check(1.5, -1.0).status == CheckStatus::skipped);
}

TEST_CASE("observable check near t = 0") {
  montecarlo::McConfig cfg;
  cfg.seed = 42;
  cfg.n_modes = 1024;
  cfg.replicates = 4000;
  cfg.threads = 1;
  const exactlaw::GmcParams p{1.0, -0.5, 0.2, 0.1};
  const auto reports =
      verify_observable_prediction(p, exactlaw::ObservableKind::U_gamma_sq_over_4, {-1e-6}, cfg);
  REQUIRE(reports.size() == 1);
  const double shifted = exactlaw::exact_moment(
      exactlaw::insertion_shifted(p, exactlaw::ObservableKind::U_gamma_sq_over_4));
  CHECK(reports[0].rhs == doctest::Approx(shifted).epsilon(1e-5));
  CHECK(reports[0].status == CheckStatus::pass);
  CHECK(reports[0].metadata.at("seed") == "42");
}

TEST_CASE("report serialisation") {
  std::vector<CheckReport> reports{check_selberg(1.0, 2, 0.0, 0.0), check_selberg(1.0, 3, -0.9, 0.0)};
  const nlohmann::json j = nlohmann::json::parse(reports_to_json(reports));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["status"] == "pass");
  CHECK(j[0]["lhs"].is_string());
  CHECK(std::stod(j[0]["rhs"].get<std::string>()) == reports[0].rhs);
  const std::string csv = reports_to_csv(reports);
  CHECK(csv.rfind("check_id,status,rel_err,tolerance\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(relative_error(1.0, 0.0) == 1.0);
}
