// construct-audit: fairness auditing over explicit distributions and CSV
// datasets, plus generators and the randomized theorem-verification harness.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ca/ca.hpp"

namespace {

constexpr const char* kSchema = "construct-audit/1";
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::string mode;  // "", "rational", "float"
  std::uint64_t seed = 42;
};

std::string resolve_mode(const std::string& flag_value, const std::string& fallback) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CONSTRUCT_AUDIT_MODE")) {
    std::string m(env);
    if (m == "rational" || m == "float") return m;
    if (!m.empty())
      throw ca::AuditError(ca::Errc::invalid_argument,
                           "CONSTRUCT_AUDIT_MODE must be 'rational' or 'float'");
  }
  return fallback;
}

void emit(const ca::Json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    ca::save_json_file(out_path, report);
  }
}

// ---- audit ----

struct AuditOpts {
  std::string input;
  std::string format;  // "", "csv", "dist-json"
  std::string tests;   // comma list; empty = defaults
  std::string tau;
  std::string alpha;
  std::string prule_p = "0.8";
  std::string favorable = "1";
  std::string criterion;  // "", categorical, general, both, none
  std::string metric = "indicator";
  std::string worldview;
  std::string worldview_tau = "0";
  std::string out;
  CommonOpts common;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string detect_format(const AuditOpts& o) {
  if (!o.format.empty()) return o.format;
  auto dot = o.input.rfind('.');
  std::string ext = dot == std::string::npos ? "" : o.input.substr(dot);
  if (ext == ".csv") return "csv";
  return "dist-json";
}

template <class S>
ca::MetricSupport resolve_metric(const std::string& spec, const ca::Support& yc) {
  if (spec == "indicator") return ca::MetricSupport::indicator(yc);
  if (spec == "absolute") return ca::MetricSupport::numeric_absolute(yc);
  auto ms = ca::metric_from_json(ca::load_json_file(spec));
  ca::require(ms.support() == yc, ca::Errc::metric_mismatch,
              "metric labels do not match the construct support");
  return ms;
}

template <class S>
ca::Worldview<S> parse_worldview(const std::string& spec) {
  if (spec == "wae") return ca::Worldview<S>::WAE();
  if (spec == "wysiwyg") return ca::Worldview<S>::WYSIWYG();
  if (spec.rfind("alpha:", 0) == 0)
    return ca::Worldview<S>::AlphaHybrid(ca::num_traits<S>::parse(spec.substr(6)));
  ca::fail(ca::Errc::invalid_argument,
           "worldview must be wae, wysiwyg, or alpha:<value>, got '" + spec + "'");
}

template <class S>
int run_audit(const AuditOpts& o) {
  std::string format = detect_format(o);
  ca::Json report;
  report["schema"] = kSchema;
  report["command"] = "audit";
  report["mode"] = ca::num_traits<S>::mode_name;

  ca::JointDistribution<S> dist;
  std::size_t records = 0;
  if (format == "csv") {
    std::ifstream in(o.input);
    ca::require(static_cast<bool>(in), ca::Errc::parse_error, "cannot open '" + o.input + "'");
    auto data = ca::read_csv(in);
    records = data.records.size();
    dist = ca::from_samples<S>(data.records, data.yo, data.yp, data.yc);
  } else if (format == "dist-json") {
    dist = ca::joint_from_json<S>(ca::load_json_file(o.input));
  } else {
    ca::fail(ca::Errc::invalid_argument, "format must be csv or dist-json");
  }

  ca::Json provenance;
  provenance["path"] = o.input;
  provenance["format"] = format;
  if (records) provenance["records"] = records;
  report["input"] = std::move(provenance);
  report["seed"] = std::to_string(o.common.seed);

  // exact tests by default on explicit tables, a small slack on datasets
  S tau = o.tau.empty() ? (format == "csv" ? ca::num_traits<S>::from_ratio(1, 100) : S(0))
                        : ca::num_traits<S>::parse(o.tau);

  std::vector<std::string> tests = split_list(o.tests);
  if (tests.empty()) {
    tests = {"dp", "eo", "pp"};
    if (dist.has_construct()) tests.push_back("misclass");
    if (!o.alpha.empty()) tests.push_back("alpha");
  }

  bool all_pass = true;
  ca::Json test_json = ca::Json::array();
  for (const auto& name : tests) {
    ca::TestReport<S> r;
    if (name == "dp") {
      r = ca::demographic_parity(dist, tau);
    } else if (name == "eo") {
      r = ca::equalized_odds(dist, tau);
    } else if (name == "pp") {
      r = ca::predictive_parity(dist, tau);
    } else if (name == "alpha") {
      ca::require(!o.alpha.empty(), ca::Errc::invalid_argument,
                  "the alpha test needs --alpha");
      r = ca::alpha_disparity(dist, ca::num_traits<S>::parse(o.alpha), tau);
    } else if (name == "misclass") {
      r = ca::misclassification_parity(dist, tau);
    } else if (name == "prule") {
      r = ca::p_percent_rule(dist, ca::Label::parse(o.favorable),
                             ca::num_traits<S>::parse(o.prule_p));
    } else {
      ca::fail(ca::Errc::invalid_argument, "unknown test '" + name + "'");
    }
    all_pass = all_pass && r.pass;
    test_json.push_back(ca::test_report_json(r));
  }
  report["tests"] = std::move(test_json);

  std::string criterion = o.criterion;
  if (criterion.empty()) criterion = dist.has_construct() ? "categorical" : "none";
  ca::Json crit_json = ca::Json::object();
  if (criterion == "categorical" || criterion == "both") {
    auto r = ca::disparity_amplification_categorical(dist);
    all_pass = all_pass && !r.amplification;
    crit_json["categorical"] = ca::criterion_report_json(r);
  }
  if (criterion == "general" || criterion == "both") {
    auto ms = resolve_metric<S>(o.metric, dist.support(ca::Var::Yc));
    auto r = ca::disparity_amplification_general(dist, ms);
    all_pass = all_pass && !r.amplification;
    crit_json["general"] = ca::criterion_report_json(r);
    // the same verdict on the likelihood-transformed construct space
    auto transformed = ca::transform_construct(dist);
    auto tms = ca::MetricSupport::numeric_absolute(transformed.support(ca::Var::Yc));
    auto tr = ca::disparity_amplification_general(transformed, tms);
    tr.criterion = "disparity_amplification_general_transformed";
    crit_json["general_transformed"] = ca::criterion_report_json(tr);
  } else if (criterion != "categorical" && criterion != "none") {
    ca::require(criterion == "categorical" || criterion == "general" || criterion == "both" ||
                    criterion == "none",
                ca::Errc::invalid_argument, "criterion must be categorical|general|both|none");
  }
  report["criteria"] = std::move(crit_json);

  if (!o.worldview.empty()) {
    auto wv = parse_worldview<S>(o.worldview);
    auto wr = ca::worldview_holds(dist, wv, ca::num_traits<S>::parse(o.worldview_tau));
    all_pass = all_pass && wr.holds;
    report["worldview"] = ca::worldview_report_json(wr);
  }

  report["pass"] = all_pass;
  emit(report, o.out);
  return all_pass ? kExitPass : kExitFail;
}

// ---- distance ----

struct DistanceOpts {
  std::string file_a, file_b;
  std::string metric;  // empty = total variation
  CommonOpts common;
};

template <class S>
int run_distance(const DistanceOpts& o) {
  auto p = ca::distribution_from_json<S>(ca::load_json_file(o.file_a));
  auto q = ca::distribution_from_json<S>(ca::load_json_file(o.file_b));
  if (o.metric.empty()) {
    std::cout << ca::num_traits<S>::str(ca::tv_distance(p, q)) << "\n";
    return kExitPass;
  }
  ca::Support common = p.support().united(q.support());
  ca::MetricSupport ms = o.metric == "indicator"  ? ca::MetricSupport::indicator(common)
                         : o.metric == "absolute" ? ca::MetricSupport::numeric_absolute(common)
                                                  : ca::metric_from_json(ca::load_json_file(o.metric));
  std::cout << ca::num_traits<S>::str(ca::emd(p, q, ms).cost) << "\n";
  return kExitPass;
}

// ---- construct ----

struct ConstructOpts {
  std::string kind;
  std::string yo0 = "0.6", yo1 = "0.3";  // Pr[Yo=1 | Z=z] for binary generators
  std::string yc0 = "0.9", yc1 = "0.5";  // Pr[Yc=1 | Z=z] for optimal-dp
  std::string epsilon = "0.02";
  std::string alpha = "0.2", alpha_prime = "0.8";
  std::string input;  // optional base distribution for optimal-dp
  std::string out;
  CommonOpts common;
};

template <class S>
ca::Distribution<S> binary_margin(const std::string& rate_on_one) {
  S r = ca::num_traits<S>::parse(rate_on_one);
  return ca::Distribution<S>(ca::Support::binary01(), {S(1) - r, r});
}

template <class S>
int run_construct(const ConstructOpts& o) {
  ca::JointDistribution<S> dist;
  if (o.kind == "xor") {
    dist = ca::xor_example<S>();
  } else if (o.kind == "ypz") {
    dist = ca::ypz_example<S>();
  } else if (o.kind == "pp-adversarial") {
    auto adv = ca::pp_adversarial_model<S>(binary_margin<S>(o.yo0), binary_margin<S>(o.yo1),
                                           ca::num_traits<S>::parse(o.epsilon));
    dist = adv.joint;
    std::cerr << "pp-adversarial: output disparity = "
              << ca::num_traits<S>::str(ca::output_disparity(dist)) << ", posteriors on Yo=1: "
              << ca::num_traits<S>::str(adv.posteriors[1][0]) << " (Yp=0), "
              << ca::num_traits<S>::str(adv.posteriors[1][1]) << " (Yp=1)\n";
  } else if (o.kind == "eqodds-amplifying") {
    dist = ca::eqodds_amplifying_counterexample<S>(o.common.seed);
  } else if (o.kind == "alpha-counterexample") {
    dist = ca::alpha_counterexample<S>(ca::num_traits<S>::parse(o.alpha),
                                       ca::num_traits<S>::parse(o.alpha_prime), o.common.seed);
  } else if (o.kind == "optimal-dp") {
    ca::JointDistribution<S> base;
    if (!o.input.empty()) {
      base = ca::joint_from_json<S>(ca::load_json_file(o.input));
    } else {
      auto c0 = binary_margin<S>(o.yc0);
      auto c1 = binary_margin<S>(o.yc1);
      base = ca::harness::construct_base<S>(c0, c1, ca::num_traits<S>::from_ratio(1, 2));
    }
    auto built = ca::optimal_dem_parity_model(base);
    dist = built.joint;
    std::cerr << "optimal-dp: construct accuracy = "
              << ca::num_traits<S>::str(ca::construct_accuracy(dist)) << " (ceiling "
              << ca::num_traits<S>::str(ca::max_accuracy_under_dem_parity(base)) << ")\n";
  } else {
    ca::fail(ca::Errc::invalid_argument,
             "kind must be xor|ypz|pp-adversarial|eqodds-amplifying|alpha-counterexample|"
             "optimal-dp, got '" + o.kind + "'");
  }
  emit(ca::joint_to_json(dist), o.out);
  return kExitPass;
}

// ---- verify ----

struct VerifyOpts {
  std::string theorem = "all";
  int trials = 500;
  std::string out;
  CommonOpts common;
};

template <class S>
int run_verify(const VerifyOpts& o) {
  std::vector<ca::SuiteReport> reports;
  if (o.theorem == "all") {
    reports = ca::run_all<S>(o.trials, o.common.seed);
  } else {
    reports.push_back(ca::run_suite<S>(o.theorem, o.trials, o.common.seed));
  }
  int failures = 0;
  ca::Json suites = ca::Json::array();
  for (const auto& r : reports) {
    failures += r.failures;
    suites.push_back(ca::suite_report_json(r));
    std::cerr << r.theorem << ": " << (r.failures == 0 ? "PASS" : "FAIL") << " (" << r.trials
              << " trials, " << r.failures << " failures, " << r.wall_ms << " ms)\n";
    for (const auto& n : r.notes) std::cerr << "  " << n << "\n";
  }
  ca::Json report;
  report["schema"] = kSchema;
  report["command"] = "verify";
  report["mode"] = ca::num_traits<S>::mode_name;
  report["trials"] = o.trials;
  report["seed"] = std::to_string(o.common.seed);
  report["suites"] = std::move(suites);
  report["pass"] = (failures == 0);
  if (!o.out.empty()) emit(report, o.out);
  return failures == 0 ? kExitPass : kExitFail;
}

template <class Fn>
int dispatch_mode(const std::string& mode, Fn&& fn) {
  if (mode == "rational") return fn(ca::Rational{});
  return fn(0.0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construct-space fairness auditing"};
  app.require_subcommand(1);

  AuditOpts audit_opts;
  auto* audit = app.add_subcommand("audit", "run fairness tests and criteria on a dataset or table");
  audit->add_option("--input", audit_opts.input, "CSV dataset or distribution JSON")->required();
  audit->add_option("--format", audit_opts.format, "csv|dist-json (default: by extension)");
  audit->add_option("--tests", audit_opts.tests, "comma list: dp,eo,pp,alpha,misclass,prule");
  audit->add_option("--tau", audit_opts.tau, "test threshold (default 0 for tables, 0.01 for CSV)");
  audit->add_option("--alpha", audit_opts.alpha, "alpha for the alpha-disparity test");
  audit->add_option("--p", audit_opts.prule_p, "ratio threshold for the p% rule (default 0.8)");
  audit->add_option("--favorable", audit_opts.favorable, "favorable label for the p% rule");
  audit->add_option("--criterion", audit_opts.criterion, "categorical|general|both|none");
  audit->add_option("--metric", audit_opts.metric,
                    "indicator|absolute|<matrix.json> for the general criterion");
  audit->add_option("--worldview", audit_opts.worldview, "wae|wysiwyg|alpha:<value>");
  audit->add_option("--worldview-tau", audit_opts.worldview_tau, "worldview check tolerance");
  audit->add_option("--out", audit_opts.out, "report path (default stdout)");
  audit->add_option("--mode", audit_opts.common.mode, "rational|float");
  audit->add_option("--seed", audit_opts.common.seed, "seed recorded for reproducibility");

  DistanceOpts dist_opts;
  auto* distance = app.add_subcommand("distance", "distance between two distribution files");
  distance->add_option("file_a", dist_opts.file_a, "first distribution JSON")->required();
  distance->add_option("file_b", dist_opts.file_b, "second distribution JSON")->required();
  distance->add_option("--metric", dist_opts.metric,
                       "indicator|absolute|<matrix.json>; omit for total variation");
  distance->add_option("--mode", dist_opts.common.mode, "rational|float");

  ConstructOpts cons_opts;
  auto* construct = app.add_subcommand("construct", "emit a generated distribution");
  construct->add_option("kind", cons_opts.kind,
                        "xor|ypz|pp-adversarial|eqodds-amplifying|alpha-counterexample|optimal-dp")
      ->required();
  construct->add_option("--yo0", cons_opts.yo0, "Pr[Yo=1|Z=0] (pp-adversarial)");
  construct->add_option("--yo1", cons_opts.yo1, "Pr[Yo=1|Z=1] (pp-adversarial)");
  construct->add_option("--yc0", cons_opts.yc0, "Pr[Yc=1|Z=0] (optimal-dp)");
  construct->add_option("--yc1", cons_opts.yc1, "Pr[Yc=1|Z=1] (optimal-dp)");
  construct->add_option("--epsilon", cons_opts.epsilon, "output-disparity slack (pp-adversarial)");
  construct->add_option("--alpha", cons_opts.alpha, "worldview alpha (alpha-counterexample)");
  construct->add_option("--alpha-prime", cons_opts.alpha_prime,
                        "test alpha' (alpha-counterexample)");
  construct->add_option("--input", cons_opts.input, "base distribution (optimal-dp)");
  construct->add_option("--out", cons_opts.out, "output path (default stdout)");
  construct->add_option("--mode", cons_opts.common.mode, "rational|float");
  construct->add_option("--seed", cons_opts.common.seed, "generator seed");

  VerifyOpts verify_opts;
  auto* verify = app.add_subcommand("verify", "randomized verification of the theorem catalogue");
  verify->add_option("--theorem", verify_opts.theorem, "theorem id or 'all'");
  verify->add_option("--trials", verify_opts.trials, "trials per suite (default 500)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--out", verify_opts.out, "write the suite reports as JSON");
  verify->add_option("--mode", verify_opts.common.mode, "rational|float");
  verify->add_option("--seed", verify_opts.common.seed, "harness seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (audit->parsed()) {
      std::string mode = resolve_mode(audit_opts.common.mode, "float");
      return dispatch_mode(mode, [&](auto s) { return run_audit<decltype(s)>(audit_opts); });
    }
    if (distance->parsed()) {
      std::string mode = resolve_mode(dist_opts.common.mode, "float");
      return dispatch_mode(mode, [&](auto s) { return run_distance<decltype(s)>(dist_opts); });
    }
    if (construct->parsed()) {
      std::string mode = resolve_mode(cons_opts.common.mode, "rational");
      return dispatch_mode(mode, [&](auto s) { return run_construct<decltype(s)>(cons_opts); });
    }
    if (verify->parsed()) {
      std::string mode = resolve_mode(verify_opts.common.mode, "rational");
      return dispatch_mode(mode, [&](auto s) { return run_verify<decltype(s)>(verify_opts); });
    }
  } catch (const ca::AuditError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
