#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ca/criteria.hpp"
#include "ca/empirical_tests.hpp"
#include "ca/joint.hpp"
#include "ca/metric.hpp"

namespace ca {

using Json = nlohmann::ordered_json;

inline std::string double_to_string(double x) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

// Numbers render per mode: float values as JSON numbers, rationals as
// exact "n/d" strings (integers as plain numbers when they fit).
template <class S>
Json number_json(const S& v);

template <>
inline Json number_json<double>(const double& v) {
  return Json(v);
}

template <>
inline Json number_json<Rational>(const Rational& v) {
  if (is_integer(v) && abs(numerator(v)) < BigInt(1) << 53)
    return Json(numerator(v).template convert_to<long long>());
  return Json(rational_to_string(v));
}

template <class S>
S number_from_json(const Json& j) {
  if (j.is_string()) return num_traits<S>::parse(j.get<std::string>());
  if (j.is_number_integer()) return num_traits<S>::from_int(j.get<long long>());
  if (j.is_number_float()) {
    return num_traits<S>::from_rational(rational_from_double(j.get<double>()));
  }
  fail(Errc::parse_error, "expected a number or numeric string, got " + j.dump());
}

// Probabilities in files are always strings ("1/8" or a decimal), so both
// arithmetic modes read them losslessly.
template <class S>
std::string probability_string(const S& v);

template <>
inline std::string probability_string<double>(const double& v) {
  return double_to_string(v);
}

template <>
inline std::string probability_string<Rational>(const Rational& v) {
  return rational_to_string(v);
}

inline Json label_json(const Label& l) {
  if (l.is_number() && is_integer(l.value()) &&
      abs(numerator(l.value())) < BigInt(1) << 53)
    return Json(numerator(l.value()).template convert_to<long long>());
  return Json(l.str());
}

inline Label label_from_json(const Json& j) {
  if (j.is_string()) return Label::parse(j.get<std::string>());
  if (j.is_number_integer()) return Label::number(Rational(j.get<long long>()));
  if (j.is_number_float()) return Label::number(rational_from_double(j.get<double>()));
  fail(Errc::parse_error, "expected a label (string or number), got " + j.dump());
}

inline Json support_json(const Support& s) {
  Json arr = Json::array();
  for (const auto& l : s.labels()) arr.push_back(label_json(l));
  return arr;
}

inline Support support_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), Errc::parse_error, "support must be a non-empty array");
  std::vector<Label> labels;
  for (const auto& item : j) labels.push_back(label_from_json(item));
  return Support::of(std::move(labels));
}

// ---- joint distribution files ----

template <class S>
Json joint_to_json(const JointDistribution<S>& dist) {
  Json j;
  j["supports"] = Json::object();
  j["supports"]["Z"] = Json::array({0, 1});
  j["supports"]["Yc"] = support_json(dist.support(Var::Yc));
  j["supports"]["Yo"] = support_json(dist.support(Var::Yo));
  j["supports"]["Yp"] = support_json(dist.support(Var::Yp));
  Json cells = Json::array();
  dist.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& mass) {
    if (!(mass > S(0))) return;
    Json cell;
    cell["z"] = z;
    cell["yc"] = label_json(dist.support(Var::Yc).at(c));
    cell["yo"] = label_json(dist.support(Var::Yo).at(o));
    cell["yp"] = label_json(dist.support(Var::Yp).at(p));
    cell["p"] = probability_string<S>(mass);
    cells.push_back(std::move(cell));
  });
  j["cells"] = std::move(cells);
  return j;
}

template <class S>
JointDistribution<S> joint_from_json(const Json& j) {
  require(j.is_object() && j.contains("supports") && j.contains("cells"), Errc::parse_error,
          "distribution file needs 'supports' and 'cells'");
  const Json& sup = j.at("supports");
  for (const char* key : {"Yc", "Yo", "Yp"})
    require(sup.contains(key), Errc::parse_error, std::string("missing support '") + key + "'");
  if (sup.contains("Z")) {
    Support z = support_from_json(sup.at("Z"));
    require(z == Support::binary01(), Errc::parse_error, "Z support must be [0,1]");
  }
  Support yc = support_from_json(sup.at("Yc"));
  Support yo = support_from_json(sup.at("Yo"));
  Support yp = support_from_json(sup.at("Yp"));
  std::vector<CellSpec<S>> specs;
  for (const auto& cell : j.at("cells")) {
    require(cell.is_object() && cell.contains("z") && cell.contains("yc") && cell.contains("yo") &&
                cell.contains("yp") && cell.contains("p"),
            Errc::parse_error, "cell needs z, yc, yo, yp, p");
    CellSpec<S> spec;
    Label zl = label_from_json(cell.at("z"));
    require(zl == Label::number(0) || zl == Label::number(1), Errc::unknown_label,
            "z must be 0 or 1");
    spec.z = (zl == Label::number(1)) ? 1 : 0;
    spec.yc = label_from_json(cell.at("yc"));
    spec.yo = label_from_json(cell.at("yo"));
    spec.yp = label_from_json(cell.at("yp"));
    spec.p = number_from_json<S>(cell.at("p"));
    specs.push_back(std::move(spec));
  }
  return make_joint<S>(yc, yo, yp, specs);
}

// ---- single distributions (for the distance command) ----

template <class S>
Json distribution_to_json(const Distribution<S>& d) {
  Json j;
  j["support"] = support_json(d.support());
  Json probs = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) probs.push_back(probability_string<S>(d[i]));
  j["p"] = std::move(probs);
  return j;
}

template <class S>
Distribution<S> distribution_from_json(const Json& j) {
  require(j.is_object() && j.contains("support") && j.contains("p"), Errc::parse_error,
          "distribution needs 'support' and 'p'");
  Support s = support_from_json(j.at("support"));
  require(j.at("p").is_array() && j.at("p").size() == s.size(), Errc::parse_error,
          "'p' must match the support size");
  std::vector<S> probs;
  for (const auto& item : j.at("p")) probs.push_back(number_from_json<S>(item));
  return Distribution<S>(s, std::move(probs));
}

// ---- explicit metric files: {"labels": [...], "d": [[...], ...]} ----

inline MetricSupport metric_from_json(const Json& j) {
  require(j.is_object() && j.contains("labels") && j.contains("d"), Errc::parse_error,
          "metric file needs 'labels' and 'd'");
  Support s = support_from_json(j.at("labels"));
  const Json& rows = j.at("d");
  require(rows.is_array() && rows.size() == s.size(), Errc::parse_error,
          "'d' must be a square matrix over the labels");
  std::vector<std::vector<Rational>> d;
  for (const auto& row : rows) {
    require(row.is_array() && row.size() == s.size(), Errc::parse_error,
            "'d' must be a square matrix over the labels");
    std::vector<Rational> r;
    for (const auto& item : row) r.push_back(number_from_json<Rational>(item));
    d.push_back(std::move(r));
  }
  return MetricSupport::explicit_matrix(std::move(s), std::move(d));
}

inline Json metric_to_json(const MetricSupport& ms) {
  Json j;
  j["labels"] = support_json(ms.support());
  Json rows = Json::array();
  for (std::size_t i = 0; i < ms.support().size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < ms.support().size(); ++k)
      row.push_back(rational_to_string(ms.distance_exact(i, k)));
    rows.push_back(std::move(row));
  }
  j["d"] = std::move(rows);
  return j;
}

// ---- reports ----

template <class S>
Json test_report_json(const TestReport<S>& r) {
  Json j;
  j["test"] = r.test;
  j["statistic"] = number_json<S>(r.statistic);
  j["threshold"] = number_json<S>(r.threshold);
  j["direction"] = (r.direction == TestDirection::at_most) ? "at_most" : "at_least";
  j["pass"] = r.pass;
  j["margin"] = number_json<S>(r.margin);
  Json slices = Json::object();
  for (const auto& [k, v] : r.slices) slices[k] = number_json<S>(v);
  j["slices"] = std::move(slices);
  j["notes"] = r.notes;
  return j;
}

template <class S>
Json criterion_report_json(const CriterionReport<S>& r) {
  Json j;
  j["criterion"] = r.criterion;
  j["left"] = number_json<S>(r.left);
  j["right"] = number_json<S>(r.right);
  j["amplification"] = r.amplification;
  Json comp = Json::object();
  for (const auto& [k, v] : r.components) comp[k] = number_json<S>(v);
  j["components"] = std::move(comp);
  if (!r.likelihood.empty()) {
    Json ell = Json::object();
    for (const auto& [k, v] : r.likelihood) ell[k] = number_json<S>(v);
    j["likelihood"] = std::move(ell);
  }
  j["notes"] = r.notes;
  return j;
}

template <class S>
Json worldview_report_json(const WorldviewReport<S>& r) {
  Json j;
  j["worldview"] = r.worldview.name();
  j["holds"] = r.holds;
  j["statistic"] = number_json<S>(r.statistic);
  j["threshold"] = number_json<S>(r.threshold);
  Json comp = Json::object();
  for (const auto& [k, v] : r.components) comp[k] = number_json<S>(v);
  j["components"] = std::move(comp);
  return j;
}

// ---- CSV datasets: header z,y_obs,y_pred[,y_construct] ----

struct CsvDataset {
  std::vector<SampleRecord> records;
  Support yo, yp;
  std::optional<Support> yc;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline Support infer_support(const std::vector<Label>& seen) {
  std::vector<Label> distinct;
  for (const auto& l : seen) {
    bool dup = false;
    for (const auto& d : distinct) dup = dup || d == l;
    if (!dup) distinct.push_back(l);
  }
  return Support::of(std::move(distinct));
}

}  // namespace detail

inline CsvDataset read_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::parse_error, "empty CSV input");
  auto header = detail::split_csv_line(line);
  bool with_construct;
  if (header == std::vector<std::string>{"z", "y_obs", "y_pred"}) {
    with_construct = false;
  } else if (header == std::vector<std::string>{"z", "y_obs", "y_pred", "y_construct"}) {
    with_construct = true;
  } else {
    fail(Errc::parse_error, "CSV header must be z,y_obs,y_pred[,y_construct]");
  }

  CsvDataset data;
  std::vector<Label> yo_seen, yp_seen, yc_seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    require(fields.size() == header.size(), Errc::parse_error,
            "line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                " fields, got " + std::to_string(fields.size()) +
                " (labels containing commas are not supported)");
    SampleRecord rec;
    require(fields[0] == "0" || fields[0] == "1", Errc::unknown_label,
            "line " + std::to_string(lineno) + ": z must be 0 or 1");
    rec.z = (fields[0] == "1") ? 1 : 0;
    rec.y_obs = Label::parse(fields[1]);
    rec.y_pred = Label::parse(fields[2]);
    if (with_construct) rec.y_construct = Label::parse(fields[3]);
    yo_seen.push_back(rec.y_obs);
    yp_seen.push_back(rec.y_pred);
    if (with_construct) yc_seen.push_back(*rec.y_construct);
    data.records.push_back(std::move(rec));
  }
  require(!data.records.empty(), Errc::parse_error, "CSV has no data rows");
  data.yo = detail::infer_support(yo_seen);
  data.yp = detail::infer_support(yp_seen);
  if (with_construct) data.yc = detail::infer_support(yc_seen);
  return data;
}

inline void write_csv(std::ostream& out, const std::vector<SampleRecord>& records) {
  require(!records.empty(), Errc::invalid_argument, "no records to write");
  bool with_construct = records.front().y_construct.has_value();
  out << "z,y_obs,y_pred" << (with_construct ? ",y_construct" : "") << "\n";
  auto field = [](const Label& l) {
    std::string s = l.str();
    require(s.find(',') == std::string::npos, Errc::invalid_argument,
            "label '" + s + "' contains a comma; CSV labels must be comma-free");
    return s;
  };
  for (const auto& r : records) {
    require(r.y_construct.has_value() == with_construct, Errc::mixed_construct_presence,
            "records disagree on construct presence");
    out << r.z << "," << field(r.y_obs) << "," << field(r.y_pred);
    if (with_construct) out << "," << field(*r.y_construct);
    out << "\n";
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::parse_error, "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Errc::parse_error, "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  require(static_cast<bool>(out), Errc::parse_error, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace ca
