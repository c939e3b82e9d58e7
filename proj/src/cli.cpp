#include "taw/cli.hpp"

#include <chrono>
#include <sstream>

#include "taw/conjugate.hpp"
#include "taw/contraction.hpp"
#include "taw/fock.hpp"
#include "taw/hilbert.hpp"
#include "taw/matchings.hpp"
#include "taw/tensor_ops.hpp"
#include "taw/twist.hpp"
#include "taw/wick.hpp"

namespace taw::cli {

using nlohmann::json;

namespace {

Complex parse_complex(const json& v) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  require(v.is_array() && v.size() == 2, Errc::ConfigParse, "complex value must be [re, im]");
  return Complex(v[0].get<double>(), v[1].get<double>());
}

Matrix parse_matrix(const json& rows) {
  require(rows.is_array() && !rows.empty(), Errc::ConfigParse, "matrix must be a row array");
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows[0].size());
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    require(static_cast<int>(rows[i].size()) == c, Errc::ConfigParse, "ragged matrix rows");
    for (int j = 0; j < c; ++j) m(i, j) = parse_complex(rows[i][j]);
  }
  return m;
}

json dump_complex(Complex c) { return json::array({c.real(), c.imag()}); }

json dump_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(dump_complex(v[i]));
  return out;
}

json dump_word(const Word& w) { return json(w); }

json dump_poly(const wick::NCPolynomial& p) {
  json out = json::array();
  for (const auto& [w, c] : p.coef)
    out.push_back(json{{"word", dump_word(w)}, {"coeff", dump_complex(c)}});
  return out;
}

struct Parsed {
  hilbert::StandardSubspace H;
  twist::Twist T;
  Settings settings;
  json inputs;
  double R = 5.0;
  double C_R = -1;
};

Settings parse_settings(const json& cfg, const Overrides& ov) {
  Settings s;
  if (cfg.contains("numerics")) {
    const auto& n = cfg["numerics"];
    if (n.contains("tolerance")) s.tolerance = n["tolerance"].get<double>();
    if (n.contains("size_cap")) s.dense_entry_cap = n["size_cap"].get<std::int64_t>();
    if (n.contains("truncation")) s.truncation = n["truncation"].get<int>();
    if (n.contains("series_order")) s.series_order = n["series_order"].get<int>();
    if (n.contains("strict_level")) s.strict_level = n["strict_level"].get<int>();
    if (n.contains("matching_cap")) s.matching_cap = n["matching_cap"].get<int>();
    if (n.contains("cf_denominator_bound"))
      s.cf_denominator_bound = n["cf_denominator_bound"].get<int>();
    if (n.contains("rho_window")) s.rho_window = n["rho_window"].get<int>();
  }
  if (ov.tolerance > 0) s.tolerance = ov.tolerance;
  if (ov.size_cap > 0) s.dense_entry_cap = ov.size_cap;
  if (ov.truncation > 0) s.truncation = ov.truncation;
  if (ov.series_order >= 0) s.series_order = ov.series_order;
  require(s.tolerance > 0 && s.dense_entry_cap > 0 && s.truncation > 0, Errc::ConfigParse,
          "numeric settings must be positive");
  return s;
}

Parsed parse(const json& cfg, const Overrides& ov) {
  Parsed p;
  p.settings = parse_settings(cfg, ov);
  require(cfg.contains("subspace"), Errc::ConfigParse, "config needs a subspace block");
  require(cfg.contains("twist"), Errc::ConfigParse, "config needs a twist block");
  const auto& sub = cfg["subspace"];
  const auto& tw = cfg["twist"];

  hilbert::SubspaceSpec spec;
  spec.tolerance = p.settings.tolerance;
  if (sub.contains("basis_mode")) {
    const std::string m = sub["basis_mode"].get<std::string>();
    require(m == "complex-linear" || m == "real-orthonormal", Errc::ConfigParse,
            "basis_mode must be complex-linear or real-orthonormal");
    spec.mode = m == "complex-linear" ? hilbert::BasisMode::ComplexLinear
                                      : hilbert::BasisMode::RealOrthonormal;
  }
  if (sub.contains("kind") && sub["kind"] == "matrix-algebra") {
    const int n = sub.at("n").get<int>();
    const auto h = sub.at("h").get<std::vector<double>>();
    auto derived = twist::matrix_algebra_subspace(n, h, spec.mode);
    derived.tolerance = p.settings.tolerance;
    p.H = hilbert::build_standard_subspace(derived);
  } else if (sub.contains("eigenvalues")) {
    spec.eigenvalues = sub["eigenvalues"].get<std::vector<double>>();
    if (sub.contains("pairing")) {
      auto pr = sub["pairing"].get<std::vector<int>>();  // 1-based in configs
      for (int& x : pr) --x;
      spec.pairing = pr;
    }
    if (sub.contains("generators")) spec.generators = parse_matrix(sub["generators"]);
    p.H = hilbert::build_standard_subspace(spec);
  } else {
    require(sub.contains("delta") && sub.contains("J"), Errc::ConfigParse,
            "subspace needs eigen-data or delta + J");
    spec.delta = parse_matrix(sub["delta"]);
    spec.j = parse_matrix(sub["J"]);
    if (sub.contains("generators")) spec.generators = parse_matrix(sub["generators"]);
    p.H = hilbert::build_standard_subspace(spec);
  }

  const std::string kind = tw.at("kind").get<std::string>();
  if (kind == "q-flip") {
    p.T = twist::make_qflip(p.H.dim, tw.at("q").get<double>());
  } else if (kind == "q-ij") {
    p.T = twist::make_qij(parse_matrix(tw.at("coefficients")), p.H);
  } else if (kind == "dim2") {
    const std::string fam = tw.at("family").get<std::string>();
    twist::Dim2Params dp;
    if (tw.contains("q1")) dp.q1 = tw["q1"].get<double>();
    if (tw.contains("q2")) dp.q2 = tw["q2"].get<double>();
    if (tw.contains("q12")) dp.q12 = tw["q12"].get<double>();
    if (tw.contains("c")) dp.c = tw["c"].get<double>();
    if (tw.contains("eps")) dp.eps = tw["eps"].get<int>();
    twist::Dim2Family f = fam == "diag"  ? twist::Dim2Family::Diag
                          : fam == "anti" ? twist::Dim2Family::Anti
                                          : twist::Dim2Family::Mixed;
    require(fam == "diag" || fam == "anti" || fam == "mixed", Errc::ConfigParse,
            "dim2 family must be diag, anti or mixed");
    p.T = twist::make_dim2(f, dp, p.H);
  } else if (kind == "matrix-algebra") {
    p.T = twist::make_matrix_algebra(tw.at("n").get<int>(),
                                     tw.at("h").get<std::vector<double>>(),
                                     tw.at("c").get<double>());
  } else if (kind == "raw") {
    p.T = twist::make_raw(parse_matrix(tw.at("matrix")));
  } else {
    fail(Errc::ConfigParse, "unknown twist kind: " + kind);
  }
  require(p.T.d == p.H.dim, Errc::ShapeMismatch, "twist and subspace dimensions disagree");

  if (cfg.contains("inputs")) p.inputs = cfg["inputs"];
  if (cfg.contains("numerics")) {
    if (cfg["numerics"].contains("R")) p.R = cfg["numerics"]["R"].get<double>();
    if (cfg["numerics"].contains("C_R")) p.C_R = cfg["numerics"]["C_R"].get<double>();
  }
  if (ov.R > 0) p.R = ov.R;
  if (ov.C_R > 0) p.C_R = ov.C_R;
  return p;
}

json flag_json(const twist::Flag& f) {
  return json{{"pass", f.pass}, {"residual", f.residual}};
}

json validation_json(const twist::ValidationReport& rep) {
  return json{{"self_adjoint", flag_json(rep.self_adjoint)},
              {"norm_lt_one", flag_json(rep.norm_lt_one)},
              {"braided", flag_json(rep.braided)},
              {"compatible", flag_json(rep.compatible)},
              {"crossing_symmetric", flag_json(rep.crossing_symmetric)},
              {"strictly_positive", flag_json(rep.strictly_positive)},
              {"strict_positivity_checked_to_level", rep.strict_positivity_checked_to_level},
              {"crossing_secondary_residual", rep.crossing_secondary_residual}};
}

std::vector<Word> parse_words(const json& inputs, int d, int maxlen) {
  std::vector<Word> words;
  if (inputs.contains("words")) {
    for (const auto& jw : inputs["words"]) {
      Word w = jw.get<Word>();
      for (int letter : w)
        require(letter >= 1 && letter <= d, Errc::ConfigParse, "word letter out of range");
      words.push_back(std::move(w));
    }
  } else {
    // default: all words up to maxlen
    std::vector<Word> frontier{{}};
    for (int len = 1; len <= maxlen; ++len) {
      std::vector<Word> next;
      for (const auto& w : frontier)
        for (int a = 1; a <= d; ++a) {
          Word nw = w;
          nw.push_back(a);
          words.push_back(nw);
          next.push_back(std::move(nw));
        }
      frontier = std::move(next);
    }
  }
  return words;
}

std::string word_str(const Word& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) s += (i ? "." : "") + std::to_string(w[i]);
  return s.empty() ? "1(empty)" : s;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate",      "gram",   "wick",
                                              "moments",       "dq",     "conjugate",
                                              "fisher",        "type",   "noninjectivity",
                                              "transport"};
  return names;
}

Outcome run(const std::string& command, const json& config, const Overrides& ov) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream human;
  try {
    Parsed p = parse(config, ov);
    out.report["command"] = command;
    out.report["inputs"] = {{"d", p.H.dim},
                            {"twist_norm", p.T.q},
                            {"basis_mode", p.H.mode == hilbert::BasisMode::RealOrthonormal
                                               ? "real-orthonormal"
                                               : "complex-linear"},
                            {"tolerance", p.settings.tolerance},
                            {"truncation", p.settings.truncation},
                            {"series_order", p.settings.series_order}};

    const auto rep = twist::validate_twist(p.T, p.H, p.settings.strict_level, p.settings);
    p.T.report = rep;
    out.report["twist_validation"] = validation_json(rep);
    if (p.H.positivity_warning)
      out.report["warnings"].push_back("Delta minimum eigenvalue inside the warning band");
    if (p.T.q >= 1.0)
      out.report["warnings"].push_back("twist norm >= 1: strictness-dependent results unreliable");
    out.report["notes"] = json::array(
        {"spectral data is a finite eigenvalue list; continuous spectra are out of scope"});

    human << command << ": d=" << p.H.dim << " q=" << p.T.q << "\n";

    if (command == "validate") {
      out.exit_code = rep.all_pass() ? 0 : 2;
      human << "  flags: self_adjoint=" << rep.self_adjoint.pass
            << " norm<1=" << rep.norm_lt_one.pass << " braided=" << rep.braided.pass
            << " compatible=" << rep.compatible.pass
            << " crossing=" << rep.crossing_symmetric.pass
            << " strictly_positive=" << rep.strictly_positive.pass << " (to level "
            << rep.strict_positivity_checked_to_level << ")\n";
    } else {
      if (!rep.usable() && !ov.force) {
        out.exit_code = 2;
        human << "  twist failed validation (use --force to override)\n";
        out.report["refused"] = true;
        out.human = human.str();
        return out;
      }
      fock::Model M(p.H, p.T, p.settings);

      if (command == "gram") {
        json levels = json::array();
        const double w = conjugate::omega(std::min(p.T.q, 1.0 - 1e-12));
        for (int n = 1; n <= p.settings.truncation; ++n) {
          if (level_dim(p.H.dim, n) * level_dim(p.H.dim, n) > p.settings.dense_entry_cap) break;
          const double mn = M.kernels.min_eig(n), mx = M.kernels.max_eig(n);
          levels.push_back(json{{"level", n},
                                {"dim", level_dim(p.H.dim, n)},
                                {"min_eig", mn},
                                {"max_eig", mx},
                                {"inv_norm", mn > 0 ? 1.0 / mn : -1.0},
                                {"omega_bound", std::pow(w, -n)}});
          human << "  P_" << n << ": min=" << mn << " max=" << mx << "\n";
        }
        out.report["results"]["kernels"] = levels;
        out.report["results"]["omega"] = w;
      } else if (command == "wick") {
        json results = json::array();
        if (p.inputs.contains("tensor")) {
          const int n = p.inputs["tensor"].at("level").get<int>();
          const auto& coords = p.inputs["tensor"].at("coords");
          Vector v(level_dim(p.H.dim, n));
          require(static_cast<std::int64_t>(coords.size()) == v.size(), Errc::ConfigParse,
                  "tensor coordinate count mismatch");
          for (std::int64_t i = 0; i < v.size(); ++i) v[i] = parse_complex(coords[i]);
          auto poly = wick::wick_polynomial(v, n, M);
          auto rec = wick::wick_recursive(v, n, M);
          auto vac = wick::evaluate_on_vacuum(poly, std::max(n, 1), M);
          double rt = 0;
          for (int l = 0; l <= vac.trunc; ++l) {
            Vector ref = l == n ? v : Vector::Zero(level_dim(p.H.dim, l));
            rt = std::max(rt, (vac.levels[l] - ref).cwiseAbs().maxCoeff());
          }
          results.push_back(json{{"level", n},
                                 {"polynomial", dump_poly(poly)},
                                 {"recursive_agreement", poly.max_coeff_diff(rec)},
                                 {"roundtrip_residual", rt}});
          human << "  tensor level " << n << ": " << poly.coef.size()
                << " words, roundtrip residual " << rt << "\n";
        }
        for (const auto& w : parse_words(p.inputs.contains("words") ? p.inputs : json::object(),
                                         p.H.dim, 0)) {
          const int n = static_cast<int>(w.size());
          const Vector v = wick::generator_tensor(w, p.H.generators);
          auto poly = wick::wick_polynomial(v, n, M);
          results.push_back(json{{"word", dump_word(w)}, {"polynomial", dump_poly(poly)}});
          human << "  Phi(e_" << word_str(w) << "): " << poly.coef.size() << " words\n";
        }
        out.report["results"]["wick"] = results;
      } else if (command == "moments") {
        json results = json::array();
        for (const auto& w : parse_words(p.inputs, p.H.dim, 4)) {
          const Complex m = fock::vacuum_moment(w, p.H, M.kernels);
          results.push_back(json{{"word", dump_word(w)}, {"moment", dump_complex(m)}});
          human << "  phi(X_" << word_str(w) << ") = " << m.real()
                << (m.imag() >= 0 ? "+" : "") << m.imag() << "i\n";
        }
        out.report["results"]["moments"] = results;
      } else if (command == "dq") {
        const int i = p.inputs.value("index", 1);
        require(i >= 1 && i <= p.H.dim, Errc::ConfigParse, "generator index out of range");
        json results = json::array();
        for (const auto& w : parse_words(p.inputs, p.H.dim, 3)) {
          const Vector v = wick::generator_tensor(w, p.H.generators);
          auto bg = conjugate::dq_wick(v, static_cast<int>(w.size()), i, M);
          json comps = json::array();
          for (const auto& [ab, vec] : bg.comps)
            comps.push_back(json{{"left_level", ab.first},
                                 {"right_level", ab.second},
                                 {"coords", dump_vector(vec)}});
          results.push_back(json{{"word", dump_word(w)},
                                 {"vacuum_pairing", dump_complex(bg.vacuum_component())},
                                 {"components", comps}});
        }
        human << "  d_" << i << " Phi(e_w) computed for " << results.size() << " words\n";
        out.report["results"]["dq"] = results;
      } else if (command == "conjugate" || command == "fisher") {
        auto res = conjugate::conjugate_variables(p.settings.series_order, M);
        json per_i = json::array();
        for (int i = 1; i <= p.H.dim; ++i) {
          json levels = json::array();
          for (int n = 0; n <= res.M; ++n) {
            fock::FockVector only = fock::FockVector::zero(p.H.dim, res.xi[i - 1].trunc);
            only.levels[2 * n + 1] = res.xi[i - 1].levels[2 * n + 1];
            levels.push_back(json{{"level", 2 * n + 1},
                                  {"twisted_norm", fock::twisted_norm(only, M.kernels)}});
          }
          per_i.push_back(json{{"i", i},
                               {"levels", levels},
                               {"tail_bound", res.tail_bound[i - 1]},
                               {"tail_bound_sharp", res.tail_bound_sharp[i - 1]}});
        }
        out.report["results"]["conjugate"] = per_i;
        out.report["results"]["fisher"] = {{"value", res.fisher},
                                           {"interval", {res.fisher_lo, res.fisher_hi}}};
        human << "  Fisher = " << res.fisher << " in [" << res.fisher_lo << ", "
              << res.fisher_hi << "], M = " << res.M << "\n";
      } else if (command == "type") {
        hilbert::FactorType ft;
        if (p.inputs.contains("type") && p.inputs["type"].contains("rationals")) {
          std::vector<hilbert::Rational> rs;
          for (const auto& r : p.inputs["type"]["rationals"])
            rs.push_back({r[0].get<long long>(), r[1].get<long long>()});
          ft = hilbert::classify_factor_type(rs);
        } else if (p.inputs.contains("type") && p.inputs["type"].contains("base")) {
          ft = hilbert::classify_factor_type(
              p.inputs["type"]["base"].get<double>(),
              p.inputs["type"]["exponents"].get<std::vector<long long>>());
        } else {
          ft = hilbert::classify_factor_type_numerical(p.H.spectrum, p.settings.tolerance,
                                                       p.settings.cf_denominator_bound);
        }
        const char* tag = ft.tag == hilbert::FactorType::Tag::II1        ? "II1"
                          : ft.tag == hilbert::FactorType::Tag::IIIlambda ? "III_lambda"
                                                                          : "III1";
        out.report["results"]["factor_type"] = {
            {"tag", tag},
            {"lambda", ft.lambda},
            {"confidence",
             ft.confidence == hilbert::FactorType::Confidence::Exact ? "exact" : "numerical"}};
        human << "  factor type: " << tag;
        if (ft.tag == hilbert::FactorType::Tag::IIIlambda) human << " lambda=" << ft.lambda;
        human << "\n";
      } else if (command == "noninjectivity") {
        auto res = hilbert::noninjectivity_criterion(p.H.spectrum, p.T.q);
        out.report["results"]["noninjectivity"] = {{"holds", res.holds},
                                                   {"witness_C", res.best_C},
                                                   {"ratio", res.best_ratio},
                                                   {"rhs", res.rhs}};
        human << "  non-injectivity criterion " << (res.holds ? "holds" : "fails")
              << " (best C=" << res.best_C << ", ratio=" << res.best_ratio
              << ", rhs=" << res.rhs << ")\n";
      } else if (command == "transport") {
        require(p.C_R > 0, Errc::ConfigParse, "transport needs C_R (--C-R or numerics.C_R)");
        auto res = conjugate::potential(p.settings.series_order, p.R, p.C_R, M);
        json per_i = json::array();
        for (int i = 0; i < p.H.dim; ++i)
          per_i.push_back(json{{"i", i + 1},
                               {"theta_minus_x_rnorm", res.theta_minus_x_rnorm[i]},
                               {"tail", res.theta_tail[i]}});
        out.report["results"]["transport"] = {
            {"W_rnorm", res.W_rnorm},
            {"W_tail", res.W_tail},
            {"sigma_W_rnorm", res.sigma_W_rnorm},
            {"sigma_stabilized", res.sigma_stabilized},
            {"R", p.R},
            {"C_R", p.C_R},
            {"R_greater_4normA_plus_1", res.r_large_enough},
            {"regime_ok", res.regime_ok},
            {"per_generator", per_i},
            {"V", dump_poly(res.V)},
            {"W", dump_poly(res.W)}};
        human << "  ||W||_R = " << res.W_rnorm << " + tail " << res.W_tail
              << (res.regime_ok ? " < " : " >= ") << p.C_R << " -> regime "
              << (res.regime_ok ? "OK" : "not certified") << "\n";
        if (!res.r_large_enough) human << "  warning: R <= 4||A|| + 1\n";
      } else {
        fail(Errc::ConfigParse, "unknown command: " + command);
      }
    }
  } catch (const Error& e) {
    out.exit_code = 1;
    out.report["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    human << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.report["error"] = {{"code", "Unhandled"}, {"message", e.what()}};
    human << "error: " << e.what() << "\n";
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.report["timings_ms"] = {
      {"total", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}};
  out.human = human.str();
  return out;
}

}  // namespace taw::cli
