#include <doctest.h>

#include <json.hpp>

#include "taw/cli.hpp"

using namespace taw;
using nlohmann::json;

namespace {

json tracial_qflip(double q) {
  return json{{"subspace", {{"eigenvalues", {1.0, 1.0}}}},
              {"twist", {{"kind", "q-flip"}, {"q", q}}}};
}

}  // namespace

TEST_CASE("validate command and exit codes") {
  {
    const auto out = cli::run("validate", tracial_qflip(0.5));
    CHECK(out.exit_code == 0);
    CHECK(out.report["twist_validation"]["crossing_symmetric"]["pass"].get<bool>());
  }
  {
    json cfg = tracial_qflip(0.5);
    cfg["twist"] = {{"kind", "raw"},
                    {"matrix", {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}}};
    const auto out = cli::run("validate", cfg);
    CHECK(out.exit_code == 2);
    CHECK(!out.report["twist_validation"]["crossing_symmetric"]["pass"].get<bool>());
  }
  {
    const auto out = cli::run("validate", json::object());
    CHECK(out.exit_code == 1);  // missing config blocks
    CHECK(out.report.contains("error"));
  }
}

TEST_CASE("downstream commands refuse invalid twists unless forced") {
  json cfg = tracial_qflip(0.5);
  cfg["twist"] = {{"kind", "raw"},
                  {"matrix", {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}}};
  const auto refused = cli::run("moments", cfg);
  CHECK(refused.exit_code == 2);
  CHECK(refused.report["refused"].get<bool>());
  cli::Overrides ov;
  ov.force = true;
  const auto forced = cli::run("moments", cfg, ov);
  CHECK(forced.exit_code == 0);
}

TEST_CASE("conjugate on the zero twist reports the free answer") {
  json cfg = tracial_qflip(0.0);
  cfg["numerics"] = {{"series_order", 1}};
  const auto out = cli::run("conjugate", cfg);
  REQUIRE(out.exit_code == 0);
  const auto& fisher = out.report["results"]["fisher"];
  CHECK(fisher["value"].get<double>() == doctest::Approx(2.0));
  for (const auto& gen : out.report["results"]["conjugate"])
    CHECK(gen["tail_bound"].get<double>() == 0.0);
}

TEST_CASE("factor type and noninjectivity commands") {
  {
    json cfg = tracial_qflip(0.3);
    cfg["inputs"] = {{"type", {{"rationals", {{2, 1}, {3, 1}, {1, 2}, {1, 3}}}}}};
    const auto out = cli::run("type", cfg);
    REQUIRE(out.exit_code == 0);
    CHECK(out.report["results"]["factor_type"]["tag"] == "III1");
  }
  {
    json cfg;
    cfg["subspace"] = {{"eigenvalues", json::array()}};
    auto& eig = cfg["subspace"]["eigenvalues"];
    for (int i = 0; i < 17; ++i) eig.push_back(1.0);
    cfg["twist"] = {{"kind", "q-flip"}, {"q", 0.0}};
    const auto out = cli::run("noninjectivity", cfg);
    REQUIRE(out.exit_code == 0);
    CHECK(out.report["results"]["noninjectivity"]["holds"].get<bool>());
  }
}

TEST_CASE("reports are deterministic modulo timings") {
  json cfg = tracial_qflip(0.4);
  cfg["inputs"] = {{"words", {{1, 1}, {1, 2, 2, 1}}}};
  auto a = cli::run("moments", cfg);
  auto b = cli::run("moments", cfg);
  a.report.erase("timings_ms");
  b.report.erase("timings_ms");
  CHECK(a.report.dump() == b.report.dump());
  // serialization round-trips losslessly
  CHECK(json::parse(a.report.dump()) == a.report);
}

TEST_CASE("transport command on a small twist") {
  // the R-norm amplifies degree-4 words by R^4, so the regime needs tiny q
  json cfg{{"subspace",
            {{"eigenvalues", {2.0, 0.5}}, {"pairing", {2, 1}}, {"basis_mode", "real-orthonormal"}}},
           {"twist", {{"kind", "q-flip"}, {"q", 1e-4}}},
           {"numerics", {{"series_order", 2}, {"R", 10.0}, {"C_R", 100.0}}}};
  const auto out = cli::run("transport", cfg);
  REQUIRE(out.exit_code == 0);
  const auto& tr = out.report["results"]["transport"];
  CHECK(tr["regime_ok"].get<bool>());
  CHECK(tr["W_rnorm"].get<double>() < 10.0);
  CHECK(tr["R_greater_4normA_plus_1"].get<bool>());

  // larger q is reported honestly as outside the certified regime
  cfg["twist"]["q"] = 0.3;
  const auto big = cli::run("transport", cfg);
  REQUIRE(big.exit_code == 0);
  CHECK(!big.report["results"]["transport"]["regime_ok"].get<bool>());
}

TEST_CASE("gram, wick, dq and fisher commands") {
  json cfg = tracial_qflip(0.5);
  cfg["numerics"] = {{"truncation", 4}, {"series_order", 1}};
  {
    const auto out = cli::run("gram", cfg);
    REQUIRE(out.exit_code == 0);
    const auto& levels = out.report["results"]["kernels"];
    REQUIRE(levels.size() == 4);
    CHECK(levels[0]["min_eig"].get<double>() == doctest::Approx(1.0));  // P_1 = id
    for (const auto& lev : levels)
      CHECK(lev["inv_norm"].get<double>() <= lev["omega_bound"].get<double>() + 1e-8);
  }
  {
    json wcfg = cfg;
    wcfg["inputs"] = {{"words", {{1, 2}}}};
    const auto out = cli::run("wick", wcfg);
    REQUIRE(out.exit_code == 0);
    // Phi(e_1 (x) e_2) = x_1 x_2 (the pairing <S e_1, e_2> = 0 tracially)
    const auto& polys = out.report["results"]["wick"];
    REQUIRE(polys.size() == 1);
    CHECK(polys[0]["polynomial"].size() == 1);
  }
  {
    json dcfg = cfg;
    dcfg["inputs"] = {{"words", {{1}, {2}}}, {"index", 1}};
    const auto out = cli::run("dq", dcfg);
    REQUIRE(out.exit_code == 0);
    const auto& rows = out.report["results"]["dq"];
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["vacuum_pairing"][0].get<double>() == doctest::Approx(1.0));
    CHECK(rows[1]["vacuum_pairing"][0].get<double>() == doctest::Approx(0.0));
  }
  {
    const auto out = cli::run("fisher", cfg);
    REQUIRE(out.exit_code == 0);
    const auto& fisher = out.report["results"]["fisher"];
    const double lo = fisher["interval"][0].get<double>();
    const double hi = fisher["interval"][1].get<double>();
    CHECK(lo <= fisher["value"].get<double>());
    CHECK(fisher["value"].get<double>() <= hi);
  }
}
