#include "swfde/io.hpp"

#include "swfde/builtins.hpp"
#include "swfde/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace swfde {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SpecError(path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "expected a finite number");
  return d;
}

Eigen::Index positive_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() <= 0) fail(path, "expected a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

Matrix matrix(const json& v, Eigen::Index rows, Eigen::Index cols, const std::string& path) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    fail(path, "expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(rp, "expected " + std::to_string(cols) + " columns");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = number(row[static_cast<std::size_t>(j)], rp + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

Vector vector(const json& v, Eigen::Index n, const std::string& path) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " entries");
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

MatrixFunction matrix_function(const json& v, Eigen::Index n, const std::string& path) {
  if (v.is_object()) {
    const double t0 = v.contains("t0") ? number(v["t0"], path + ".t0") : 0.0;
    const double dt = number(field(v, "dt", path), path + ".dt");
    const json& s = field(v, "samples", path);
    if (!s.is_array() || s.empty()) fail(path + ".samples", "expected a non-empty array");
    std::vector<Matrix> samples;
    for (std::size_t j = 0; j < s.size(); ++j) {
      samples.push_back(matrix(s[j], n, n, path + ".samples[" + std::to_string(j) + "]"));
    }
    if (samples.size() > 1 && !(dt > 0.0)) fail(path + ".dt", "must be > 0");
    return MatrixFunction::sampled(t0, dt, std::move(samples));
  }
  return MatrixFunction::constant(matrix(v, n, n, path));
}

LagFunction lag_function(const json& v, double h, const std::string& path) {
  auto check = [&](double lag, const std::string& p) {
    if (!(lag > 0.0) || lag > h) fail(p, "lag must lie in (0, h]");
  };
  if (v.is_object()) {
    const double t0 = v.contains("t0") ? number(v["t0"], path + ".t0") : 0.0;
    const double dt = number(field(v, "dt", path), path + ".dt");
    const json& s = field(v, "samples", path);
    if (!s.is_array() || s.empty()) fail(path + ".samples", "expected a non-empty array");
    std::vector<double> samples;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const std::string p = path + ".samples[" + std::to_string(j) + "]";
      samples.push_back(number(s[j], p));
      check(samples.back(), p);
    }
    if (samples.size() > 1 && !(dt > 0.0)) fail(path + ".dt", "must be > 0");
    return LagFunction::sampled(t0, dt, std::move(samples));
  }
  const double lag = number(v, path);
  check(lag, path);
  return LagFunction::constant(lag);
}

Subsystem linear_mode(const json& m, Eigen::Index n, double h, const std::string& path) {
  MatrixFunction a = matrix_function(field(m, "A", path), n, path + ".A");
  std::vector<DelayTerm> terms;
  if (m.contains("delays")) {
    const json& d = m["delays"];
    if (!d.is_array()) fail(path + ".delays", "expected an array");
    for (std::size_t j = 0; j < d.size(); ++j) {
      const std::string p = path + ".delays[" + std::to_string(j) + "]";
      MatrixFunction b = matrix_function(field(d[j], "B", p), n, p + ".B");
      LagFunction lag = d[j].contains("lag") ? lag_function(d[j]["lag"], h, p + ".lag") : LagFunction::constant(h);
      terms.push_back(DelayTerm{std::move(b), std::move(lag)});
    }
  }
  std::optional<DistributedKernel> kernel;
  if (m.contains("kernel")) {
    const std::string p = path + ".kernel";
    const json& k = m["kernel"];
    DistributedKernel dk;
    dk.dtheta = number(field(k, "dtheta", p), p + ".dtheta");
    const json& s = field(k, "samples", p);
    if (!s.is_array() || s.size() < 2) fail(p + ".samples", "expected at least two samples");
    for (std::size_t j = 0; j < s.size(); ++j) {
      dk.samples.push_back(matrix(s[j], n, n, p + ".samples[" + std::to_string(j) + "]"));
    }
    const double span = dk.dtheta * static_cast<double>(dk.samples.size() - 1);
    if (!(dk.dtheta > 0.0) || std::abs(span - h) > 1e-9 * std::max(1.0, h)) {
      fail(p, "samples times dtheta must span [-h, 0]");
    }
    kernel = std::move(dk);
  }
  try {
    return LinearDelaySubsystem{std::move(a), DelayOperator(n, h, std::move(terms), std::move(kernel))};
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

Subsystem sector_mode(const json& m, Eigen::Index n, double h, const std::string& path) {
  MatrixFunction p = matrix_function(field(m, "P", path), n, path + ".P");
  std::optional<MatrixFunction> b;
  if (m.contains("B")) {
    b = matrix_function(m["B"], n, path + ".B");
  } else if (m.contains("delays")) {
    const json& d = m["delays"];
    if (!d.is_array() || d.size() != 1) fail(path + ".delays", "sector modes take exactly one delay term");
    const std::string dp = path + ".delays[0]";
    b = matrix_function(field(d[0], "B", dp), n, dp + ".B");
    if (d[0].contains("lag") && number(d[0]["lag"], dp + ".lag") != h) {
      fail(dp + ".lag", "sector modes use the lag h");
    }
  } else {
    fail(path + ".B", "missing field");
  }
  Vector beta = vector(field(m, "beta", path), n, path + ".beta");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(beta(i) > 0.0)) fail(path + ".beta[" + std::to_string(i) + "]", "must be > 0");
  }
  return SectorSubsystem{std::move(p), std::move(*b), std::move(beta)};
}

Subsystem blackbox_mode(const json& m, Eigen::Index n, const std::string& path) {
  BlackBoxSubsystem bb;
  const json& rhs_field = field(m, "rhs", path);
  if (!rhs_field.is_string()) fail(path + ".rhs", "expected a string");
  bb.name = rhs_field.get<std::string>();
  auto rhs = builtins::right_hand_side(bb.name);
  if (!rhs) fail(path + ".rhs", "unknown right-hand side '" + bb.name + "'");
  bb.rhs = std::move(*rhs);
  if (m.contains("bounds")) {
    const std::string p = path + ".bounds";
    const json& b = m["bounds"];
    DeclaredBounds db{matrix(field(b, "Ahat", p), n, n, p + ".Ahat"), matrix(field(b, "Vhat", p), n, n, p + ".Vhat")};
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j && db.a_hat(i, j) < 0.0) fail(p + ".Ahat", "must be Metzler");
        if (db.v_hat(i, j) < 0.0) fail(p + ".Vhat", "must be entrywise nonnegative");
      }
    }
    bb.bounds = std::move(db);
  }
  return bb;
}

json matrix_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

SystemSpec parse_system_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected an object");
  const Eigen::Index n = positive_int(field(doc, "n", "$"), "$.n");
  const double h = number(field(doc, "h", "$"), "$.h");
  if (!(h > 0.0)) fail("$.h", "must be > 0");
  const json& modes = field(doc, "modes", "$");
  if (!modes.is_array() || modes.empty()) fail("$.modes", "expected a non-empty array");

  std::vector<Subsystem> subs;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const std::string path = "$.modes[" + std::to_string(k) + "]";
    const json& m = modes[k];
    const json& kind = field(m, "kind", path);
    if (!kind.is_string()) fail(path + ".kind", "expected a string");
    const std::string name = kind.get<std::string>();
    if (name == "linear") {
      subs.push_back(linear_mode(m, n, h, path));
    } else if (name == "sector") {
      subs.push_back(sector_mode(m, n, h, path));
    } else if (name == "blackbox") {
      subs.push_back(blackbox_mode(m, n, path));
    } else {
      fail(path + ".kind", "expected linear, sector or blackbox");
    }
  }

  Nonlinearity psi;
  std::vector<std::string> psi_names;
  if (doc.contains("psi")) {
    const json& p = doc["psi"];
    if (!p.is_array() || static_cast<Eigen::Index>(p.size()) != n) fail("$.psi", "expected n names");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string path = "$.psi[" + std::to_string(i) + "]";
      if (!p[i].is_string()) fail(path, "expected a string");
      auto f = builtins::scalar_function(p[i].get<std::string>());
      if (!f) fail(path, "unknown nonlinearity '" + p[i].get<std::string>() + "'");
      psi.push_back(std::move(*f));
      psi_names.push_back(p[i].get<std::string>());
    }
  }
  std::optional<std::string> phi_name;
  if (doc.contains("phi")) {
    if (!doc["phi"].is_string()) fail("$.phi", "expected a string");
    phi_name = doc["phi"].get<std::string>();
    const auto names = builtins::history_names();
    if (std::find(names.begin(), names.end(), *phi_name) == names.end()) {
      fail("$.phi", "unknown initial history '" + *phi_name + "'");
    }
  }

  try {
    return SystemSpec{SwitchedSystem(n, h, std::move(subs), std::move(psi)), std::move(psi_names),
                      std::move(phi_name)};
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    fail("$", e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SystemSpec load_system_spec(const std::filesystem::path& path) {
  try {
    return parse_system_spec(read_text_file(path));
  } catch (const SpecError& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

std::string certificate_to_json(const CriterionReport& report, int indent) {
  json doc;
  doc["feasible"] = report.feasible;
  json xi = json::array();
  json residuals = json::array();
  for (const auto& r : report.residuals) residuals.push_back(matrix_json(r));
  if (report.certificate) {
    const Certificate& c = *report.certificate;
    for (const auto& v : c.xi) xi.push_back(matrix_json(v));
    doc["theorem"] = std::string(to_string(c.theorem));
    doc["alpha"] = c.alpha;
    doc["gamma"] = c.gamma;
    doc["tau_star"] = c.tau_star;
    doc["conditional"] = c.conditional;
  } else {
    doc["theorem"] = nullptr;
    doc["alpha"] = nullptr;
    doc["gamma"] = nullptr;
    doc["tau_star"] = nullptr;
    doc["conditional"] = false;
  }
  doc["xi"] = xi;
  doc["residuals"] = residuals;
  doc["notes"] = report.notes;
  return doc.dump(indent);
}

CriterionReport certificate_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("parse error: ") + e.what());
  }
  CriterionReport r;
  const json& feasible = field(doc, "feasible", "$");
  if (!feasible.is_boolean()) fail("$.feasible", "expected a boolean");
  r.feasible = feasible.get<bool>();
  if (doc.contains("notes")) {
    if (!doc["notes"].is_array()) fail("$.notes", "expected an array");
    for (const auto& s : doc["notes"]) {
      if (!s.is_string()) fail("$.notes", "expected strings");
      r.notes.push_back(s.get<std::string>());
    }
  }
  auto vectors = [&](const char* key) {
    std::vector<Vector> out;
    if (!doc.contains(key)) return out;
    const json& a = doc[key];
    const std::string p = std::string("$.") + key;
    if (!a.is_array()) fail(p, "expected an array");
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string kp = p + "[" + std::to_string(k) + "]";
      if (!a[k].is_array()) fail(kp, "expected an array");
      out.push_back(vector(a[k], static_cast<Eigen::Index>(a[k].size()), kp));
    }
    return out;
  };
  r.residuals = vectors("residuals");
  if (!r.feasible) return r;

  Certificate c;
  c.xi = vectors("xi");
  if (c.xi.empty()) fail("$.xi", "feasible certificate without vectors");
  for (std::size_t k = 0; k < c.xi.size(); ++k) {
    if (c.xi[k].size() != c.xi.front().size()) fail("$.xi[" + std::to_string(k) + "]", "size mismatch");
    if (!(c.xi[k].array() > 0.0).all()) fail("$.xi[" + std::to_string(k) + "]", "entries must be > 0");
  }
  const json& th = field(doc, "theorem", "$");
  if (!th.is_string()) fail("$.theorem", "expected a string");
  const auto crit = criterion_from_string(th.get<std::string>());
  if (!crit) fail("$.theorem", "unknown criterion '" + th.get<std::string>() + "'");
  c.theorem = *crit;
  c.alpha = number(field(doc, "alpha", "$"), "$.alpha");
  c.gamma = number(field(doc, "gamma", "$"), "$.gamma");
  c.tau_star = number(field(doc, "tau_star", "$"), "$.tau_star");
  if (!(c.alpha > 0.0)) fail("$.alpha", "must be > 0");
  if (!(c.gamma >= 1.0)) fail("$.gamma", "must be >= 1");
  if (!(c.tau_star >= 0.0)) fail("$.tau_star", "must be >= 0");
  if (doc.contains("conditional")) {
    if (!doc["conditional"].is_boolean()) fail("$.conditional", "expected a boolean");
    c.conditional = doc["conditional"].get<bool>();
  }
  r.certificate = std::move(c);
  return r;
}

CriterionReport load_certificate(const std::filesystem::path& path) {
  try {
    return certificate_from_json(read_text_file(path));
  } catch (const SpecError& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

std::string summary_to_json(const MonteCarloSummary& s, int indent) {
  json doc;
  doc["trials"] = s.trials;
  doc["passes"] = s.passes;
  doc["max_M_emp"] = s.max_m_emp;
  // Infinity (all-zero trials) has no JSON encoding.
  if (std::isfinite(s.min_lambda_fit)) {
    doc["min_lambda_fit"] = s.min_lambda_fit;
  } else {
    doc["min_lambda_fit"] = nullptr;
  }
  doc["lambda_target"] = s.lambda_target;
  doc["failures"] = s.failures;
  return doc.dump(indent);
}

std::string comparison_to_json(const ComparisonTable& t, int indent) {
  json doc;
  doc["this_criterion"] = t.this_criterion;
  doc["dual_max"] = t.dual_max;
  doc["dual_pairs"] = t.dual_pairs;
  if (t.zeta) {
    doc["zeta"] = matrix_json(*t.zeta);
  } else {
    doc["zeta"] = nullptr;
  }
  return doc.dump(indent);
}

InitialHistory read_history_csv(std::istream& is, Eigen::Index n, double h) {
  std::string line;
  if (!std::getline(is, line)) throw SpecError("history CSV: empty input");
  std::vector<double> thetas;
  std::vector<Vector> values;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw SpecError("history CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (static_cast<Eigen::Index>(row.size()) != n + 1) {
      throw SpecError("history CSV line " + std::to_string(lineno) + ": expected " + std::to_string(n + 1) +
                      " columns");
    }
    thetas.push_back(row[0]);
    values.emplace_back(Eigen::Map<const Vector>(row.data() + 1, n));
  }
  try {
    return InitialHistory::piecewise_linear(std::move(thetas), std::move(values), h);
  } catch (const std::exception& e) {
    throw SpecError(std::string("history CSV: ") + e.what());
  }
}

}  // namespace swfde
