// Copyright 2026 The qtg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtg/io.hpp"

#include <cstdio>
#include <ostream>

#include "qtg/numerics.hpp"

namespace qtg {

namespace {

double number_at(const json& j, const std::string& context) {
  if (!j.is_number())
    throw validation_error(context + ": expected a number");
  return j.get<double>();
}

}  // namespace

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty())
    throw validation_error(context + ": expected a non-empty array of rows");
  const std::size_t nrows = j.size();
  std::size_t ncols = 0;
  Mat m;
  for (std::size_t r = 0; r < nrows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty())
      throw validation_error(context + ": row " + std::to_string(r) +
                             " is not a non-empty array");
    if (r == 0) {
      ncols = row.size();
      m.resize(nrows, ncols);
    } else if (row.size() != ncols) {
      throw validation_error(context + ": ragged rows");
    }
    for (std::size_t c = 0; c < ncols; ++c) {
      const json& cell = row[c];
      if (!cell.is_array() || cell.size() != 2)
        throw validation_error(context + ": entry (" + std::to_string(r) +
                               "," + std::to_string(c) +
                               ") must be a [re, im] pair");
      const double re = number_at(cell[0], context);
      const double im = number_at(cell[1], context);
      if (!std::isfinite(re) || !std::isfinite(im))
        throw validation_error(context + ": non-finite entry");
      m(r, c) = std::complex<double>(re, im);
    }
  }
  return m;
}

json hermitian_to_json(const HermitianOperator& h) {
  return matrix_to_json(h.matrix());
}

HermitianOperator hermitian_from_json(const json& j,
                                      const std::string& context) {
  try {
    return HermitianOperator(matrix_from_json(j, context));
  } catch (const validation_error& e) {
    throw validation_error(context + ": " + e.what());
  }
}

json bath_to_json(const BathSpec& bath) {
  json j;
  if (bath.type == BathSpec::Type::reset) {
    j["type"] = "reset";
    j["tau_eq"] = bath.tau_eq;
  } else {
    j["type"] = "davies";
    j["alpha"] = bath.alpha;
    j["kappa"] = bath.kappa;
    json ops = json::array();
    for (const auto& op : bath.coupling_ops) ops.push_back(hermitian_to_json(op));
    j["coupling_ops"] = std::move(ops);
  }
  return j;
}

BathSpec bath_from_json(const json& j, const std::string& context) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw validation_error(context + ": bath must be an object with a "
                           "\"type\" string");
  BathSpec bath;
  const std::string type = j["type"].get<std::string>();
  if (type == "reset") {
    require_keys(j, {"type", "tau_eq"}, {"type", "tau_eq"}, context);
    bath.type = BathSpec::Type::reset;
    bath.tau_eq = number_at(j["tau_eq"], context + ".tau_eq");
    if (!(bath.tau_eq > 0))
      throw validation_error(context + ": tau_eq must be positive");
  } else if (type == "davies") {
    require_keys(j, {"type", "alpha", "kappa", "coupling_ops"},
                 {"type", "alpha", "coupling_ops"}, context);
    bath.type = BathSpec::Type::davies;
    bath.alpha = number_at(j["alpha"], context + ".alpha");
    bath.kappa = j.contains("kappa")
                     ? number_at(j["kappa"], context + ".kappa")
                     : 1.0;
    if (!j["coupling_ops"].is_array() || j["coupling_ops"].empty())
      throw validation_error(context + ": coupling_ops must be a non-empty "
                             "array");
    for (const json& op : j["coupling_ops"])
      bath.coupling_ops.push_back(
          hermitian_from_json(op, context + ".coupling_ops"));
  } else {
    throw validation_error(context + ": unknown bath type \"" + type + "\"");
  }
  return bath;
}

json path_to_json(const ControlPath& path) {
  json knots = json::array();
  for (std::size_t k = 0; k < path.knot_count(); ++k) {
    json knot;
    knot["s"] = path.knot_s()[k];
    json lambda = json::array();
    for (long i = 0; i < path.knot_points()[k].size(); ++i)
      lambda.push_back(path.knot_points()[k](i));
    knot["lambda"] = std::move(lambda);
    knots.push_back(std::move(knot));
  }
  return knots;
}

ControlPath path_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() < 2)
    throw validation_error(context + ": path must be an array of at least "
                           "two knots");
  std::vector<double> s;
  std::vector<RVec> pts;
  for (const json& knot : j) {
    require_keys(knot, {"s", "lambda"}, {"s", "lambda"}, context);
    s.push_back(number_at(knot["s"], context + ".s"));
    const json& lam = knot["lambda"];
    if (!lam.is_array() || lam.empty())
      throw validation_error(context + ": lambda must be a non-empty array");
    RVec p(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i)
      p(i) = number_at(lam[i], context + ".lambda");
    pts.push_back(std::move(p));
  }
  try {
    return ControlPath(std::move(s), std::move(pts));
  } catch (const validation_error& e) {
    throw validation_error(context + ": " + e.what());
  }
}

json steps_to_json(const std::vector<IsothermStep>& steps) {
  json arr = json::array();
  for (const IsothermStep& st : steps)
    arr.push_back({{"T", st.T}, {"dS", st.dS}, {"sigma", st.sigma}});
  return arr;
}

std::vector<IsothermStep> steps_from_json(const json& j,
                                          const std::string& context) {
  if (!j.is_array() || j.empty())
    throw validation_error(context + ": steps must be a non-empty array");
  std::vector<IsothermStep> steps;
  for (const json& st : j) {
    require_keys(st, {"T", "dS", "sigma"}, {"T", "dS", "sigma"}, context);
    steps.push_back({number_at(st["T"], context + ".T"),
                     number_at(st["dS"], context + ".dS"),
                     number_at(st["sigma"], context + ".sigma")});
  }
  return steps;
}

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::vector<std::string>& required,
                  const std::string& context) {
  if (!obj.is_object())
    throw validation_error(context + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const std::string& a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known)
      throw validation_error(context + ": unknown key \"" + key + "\"");
  }
  for (const std::string& r : required)
    if (!obj.contains(r))
      throw validation_error(context + ": missing key \"" + r + "\"");
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_path_csv(std::ostream& out, const ControlPath& path,
                    const MetricField& field, int rows) {
  rows = std::max(rows, 2);
  out << "s";
  for (int i = 0; i < path.n(); ++i) out << ",lambda" << i;
  out << ",speed,cumulative_length\n";
  double cumulative = 0.0;
  double s_prev = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double s = static_cast<double>(r) / (rows - 1);
    if (r > 0) {
      cumulative += num::integrate_adaptive(
          [&](double x) {
            const RVec v = path.velocity(x);
            return std::sqrt(
                std::max(v.dot(field.at(path.value(x)).g * v), 0.0));
          },
          s_prev, s, 1e-10, 200);
    }
    s_prev = s;
    out << format_g17(s);
    const RVec lambda = path.value(s);
    for (long i = 0; i < lambda.size(); ++i)
      out << "," << format_g17(lambda(i));
    const RVec v = path.velocity(s);
    const double speed =
        std::sqrt(std::max(v.dot(field.at(path.value(s)).g * v), 0.0));
    out << "," << format_g17(speed) << "," << format_g17(cumulative) << "\n";
  }
}

}  // namespace qtg
