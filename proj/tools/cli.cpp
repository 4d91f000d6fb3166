#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "latscat/bandedge.hpp"
#include "latscat/detail/parallel_for.hpp"
#include "latscat/errors.hpp"
#include "latscat/jost.hpp"
#include "latscat/oracle.hpp"
#include "latscat/scattering.hpp"
#include "latscat/wronskian.hpp"

namespace latscat::cli {

using Json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_real(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  if (t.empty()) throw ParseError(context + ": empty number");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError(context + ": cannot parse '" + t + "' as a number");
  }
  if (used != t.size()) throw ParseError(context + ": trailing characters in '" + t + "'");
  if (!std::isfinite(v)) throw ParseError(context + ": '" + t + "' is not finite");
  return v;
}

int parse_count(const std::string& text, const std::string& context) {
  const double v = parse_real(text, context);
  if (v != std::floor(v) || v < 1 || v > 1e6) {
    throw ParseError(context + ": point count must be a positive integer");
  }
  return static_cast<int>(v);
}

std::vector<double> even_thetas(int n, double lo, double hi) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) t[k] = n == 1 ? lo : lo + k * (hi - lo) / (n - 1);
  return t;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != ' ' && c != '\t') t.push_back(c);
  }
  if (t.empty()) throw ParseError("empty complex literal");
  if (t.rfind("cis:", 0) == 0) return std::polar(1.0, parse_real(t.substr(4), "cis"));
  const char last = t.back();
  if (last != 'i' && last != 'j') return Complex(parse_real(t, "complex literal"), 0.0);
  t.pop_back();
  // Split at the last sign that is not the leading one and not an exponent sign.
  std::size_t cut = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  const std::string re = cut == std::string::npos ? "" : t.substr(0, cut);
  std::string im = cut == std::string::npos ? t : t.substr(cut);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return Complex(re.empty() ? 0.0 : parse_real(re, "real part"), parse_real(im, "imaginary part"));
}

std::vector<Complex> parse_z_list(const std::string& spec) {
  const std::string s = trim(spec);
  if (s.empty()) throw ParseError("empty z specification");
  std::vector<Complex> zs;
  if (s.rfind("arc:", 0) == 0 || s.rfind("sym:", 0) == 0) {
    const auto parts = split(s.substr(4), ':');
    if (parts.size() != 3) throw ParseError("expected " + s.substr(0, 3) + ":N:LO:HI");
    const int n = parse_count(parts[0], "z grid");
    const double lo = parse_real(parts[1], "z grid"), hi = parse_real(parts[2], "z grid");
    for (double th : even_thetas(n, lo, hi)) zs.push_back(std::polar(1.0, th));
    if (s[0] == 's') {
      for (double th : even_thetas(n, lo, hi)) zs.push_back(std::polar(1.0, -th));
    }
    return zs;
  }
  for (const std::string& item : split(s, ',')) zs.push_back(parse_complex(item));
  return zs;
}

std::vector<double> parse_eps_list(const std::string& spec) {
  std::string s = trim(spec);
  if (s.rfind("eps:", 0) == 0) s = s.substr(4);
  if (s.empty()) throw ParseError("empty eps list");
  std::vector<double> eps;
  for (const std::string& item : split(s, ',')) {
    const double e = parse_real(item, "eps list");
    if (!(e > 0.0)) throw ParseError("eps values must be positive");
    eps.push_back(e);
  }
  return eps;
}

std::vector<Complex> default_grid() {
  std::vector<Complex> zs;
  for (double th : even_thetas(64, 0.05, std::numbers::pi - 0.05)) zs.push_back(std::polar(1.0, th));
  return zs;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0) || !(cfg.identity_tol > 0.0) || !(cfg.rank_tol > 0.0) ||
      !(cfg.oracle_tol > 0.0)) {
    throw DomainError("tolerances must be positive");
  }
  if (cfg.pad && *cfg.pad < 1) throw WindowError("--pad must be positive");
  if (cfg.path != "radial" && cfg.path != "circular") {
    throw DomainError("--path must be radial or circular");
  }
  if (cfg.potential_path.empty()) throw ParseError("--potential is required");
}

namespace {

SolverConfig solver_config(const RunConfig& rc) {
  SolverConfig c;
  c.tol = rc.tol;
  c.identity_tol = rc.identity_tol;
  c.rank_tol = rc.rank_tol;
  c.pad = rc.pad;
  return c;
}

// Unit-circle grid with band edges excluded.
std::vector<Complex> circle_grid(const std::string& spec) {
  std::vector<Complex> zs = spec.empty() ? default_grid() : parse_z_list(spec);
  for (Complex& z : zs) {
    const double r = std::abs(z);
    if (std::abs(r - 1.0) > kCircleSnap) {
      throw DomainError("z = " + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") +
                        std::to_string(z.imag()) + "i is not on the unit circle");
    }
    z /= r;
    if (std::abs(z - 1.0) < kEdgeExclusion || std::abs(z + 1.0) < kEdgeExclusion) {
      throw BandEdgeError("grid point within 1e-6 of a band edge; use band-edge or converge");
    }
  }
  return zs;
}

Json matrix_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One certificate: a residual compared against a tolerance.
struct Check {
  std::string name;
  std::optional<Complex> z;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

Check make_check(std::string name, std::optional<Complex> z, double value, double tol) {
  return Check{std::move(name), z, value, tol, value <= tol, {}};
}

Check failed_check(std::string name, std::optional<Complex> z, const std::string& why) {
  Check c{std::move(name), z, std::numeric_limits<double>::quiet_NaN(), 0.0, false, why};
  return c;
}

Json check_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["z"] = c.z ? complex_json(*c.z) : Json(nullptr);
  j["value"] = std::isfinite(c.value) ? Json(c.value) : Json(nullptr);
  j["tol"] = c.tol;
  j["pass"] = c.pass;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

std::string z_label(Complex z) { return "(" + number(z.real()) + ", " + number(z.imag()) + ")"; }

// Reports every failed check on `err`; returns true when all pass.
bool report_checks(const std::vector<Check>& checks, std::ostream& err) {
  bool ok = true;
  for (const Check& c : checks) {
    if (c.pass) continue;
    ok = false;
    err << "certificate failed: " << c.name;
    if (c.z) err << " at z = " << z_label(*c.z);
    if (std::isfinite(c.value)) err << ": " << number(c.value) << " > " << number(c.tol);
    if (!c.note.empty()) err << ": " << c.note;
    err << "\n";
  }
  return ok;
}

class CsvWriter {
 public:
  CsvWriter() { text_ << "schema_version,z_re,z_im,block,i,j,re,im\n"; }
  void block(Complex z, const std::string& name, const CMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) row(z, name, i, j, m(i, j));
    }
  }
  void scalar(Complex z, const std::string& name, double v) { row(z, name, 0, 0, Complex(v)); }
  void checks(const std::vector<Check>& cs) {
    for (const Check& c : cs) {
      if (std::isfinite(c.value)) scalar(c.z.value_or(Complex(1.0)), "check:" + c.name, c.value);
    }
  }
  std::string str() const { return text_.str(); }

 private:
  void row(Complex z, const std::string& name, Eigen::Index i, Eigen::Index j, Complex v) {
    text_ << kSchemaVersion << ',' << number(z.real()) << ',' << number(z.imag()) << ','
          << quoted(name) << ',' << i << ',' << j << ',' << number(v.real()) << ','
          << number(v.imag()) << '\n';
  }
  static std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  std::ostringstream text_;
};

Json header(const RunConfig& rc, const Potential& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = rc.command;
  Json pot;
  pot["path"] = rc.potential_path;
  pot["L"] = p.dim();
  pot["support"] = p.is_zero() ? Json(nullptr) : Json::array({p.support().lo, p.support().hi});
  pot["hermitian"] = p.hermitian();
  j["potential"] = pot;
  Json cfg;
  cfg["tol"] = rc.tol;
  cfg["identity_tol"] = rc.identity_tol;
  cfg["rank_tol"] = rc.rank_tol;
  cfg["pad"] = rc.pad ? Json(*rc.pad) : Json(nullptr);
  j["config"] = cfg;
  return j;
}

void emit(const RunConfig& rc, const std::string& text, std::ostream& out) {
  if (rc.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(rc.out_path);
  if (!f) throw ParseError("cannot open output file " + rc.out_path);
  f << text;
  if (!f) throw ParseError("cannot write output file " + rc.out_path);
}

void finish(const RunConfig& rc, Json doc, const std::vector<Check>& checks, bool ok,
            const CsvWriter* csv, std::ostream& out) {
  if (rc.format == Format::csv && csv != nullptr) {
    emit(rc, csv->str(), out);
    return;
  }
  Json cs = Json::array();
  for (const Check& c : checks) cs.push_back(check_json(c));
  doc["certificates"] = std::move(cs);
  doc["status"] = ok ? "pass" : "fail";
  emit(rc, doc.dump(2) + "\n", out);
}

Potential load(const RunConfig& rc) {
  PotentialOptions opts;
  opts.enforce_hermitian = rc.hermiticity_check;
  return load_potential_file(rc.potential_path, opts);
}

// smatrix ------------------------------------------------------------------------------

int cmd_smatrix(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Potential p = load(rc);
  const std::vector<Complex> zs = circle_grid(rc.z_spec);
  SolverConfig cfg = solver_config(rc);
  cfg.strict_constancy = false;
  const std::vector<GridEntry> grid = smatrix_grid(p, zs, cfg, rc.workers);

  Json doc = header(rc, p);
  Json points = Json::array();
  CsvWriter csv;
  std::vector<Check> checks;
  for (const GridEntry& e : grid) {
    if (e.failure == FailureKind::input) throw DomainError(e.error);
    Json pt;
    pt["z"] = complex_json(e.z);
    pt["theta"] = std::arg(e.z);
    if (!e.result) {
      checks.push_back(failed_check("scattering matrix", e.z, e.error));
      pt["error"] = e.error;
      points.push_back(std::move(pt));
      continue;
    }
    const ScatteringMatrix& s = *e.result;
    const Eigen::VectorXd flux = s.S.colwise().squaredNorm().transpose();
    pt["T_plus"] = matrix_json(s.T_plus);
    pt["T_minus"] = matrix_json(s.T_minus);
    pt["R_plus"] = matrix_json(s.R_plus);
    pt["R_minus"] = matrix_json(s.R_minus);
    pt["flux"] = std::vector<double>(flux.data(), flux.data() + flux.size());
    pt["unitarity_defect"] = s.unitarity_defect;
    pt["constancy_residual"] = s.constancy_residual;
    pt["decomposition_residual"] = s.decomposition_residual;
    points.push_back(std::move(pt));

    csv.block(e.z, "T_plus", s.T_plus);
    csv.block(e.z, "T_minus", s.T_minus);
    csv.block(e.z, "R_plus", s.R_plus);
    csv.block(e.z, "R_minus", s.R_minus);
    csv.block(e.z, "flux", flux.cast<Complex>());
    csv.scalar(e.z, "unitarity_defect", s.unitarity_defect);
    csv.scalar(e.z, "constancy_residual", s.constancy_residual);
    csv.scalar(e.z, "decomposition_residual", s.decomposition_residual);

    checks.push_back(make_check("unitarity", e.z, s.unitarity_defect, kUnitarityTol));
    checks.push_back(make_check("wronskian constancy", e.z, s.constancy_residual, rc.identity_tol));
    checks.push_back(make_check("jost decomposition", e.z, s.decomposition_residual, rc.identity_tol));
  }
  doc["points"] = std::move(points);
  const bool ok = report_checks(checks, err);
  finish(rc, std::move(doc), checks, ok, &csv, out);
  return ok ? kExitOk : kExitCertificate;
}

// band-edge & converge -----------------------------------------------------------------

std::vector<Check> band_edge_checks(const BandEdgeReport& r, double identity_tol) {
  const BandEdgeCertificates& c = r.certificates;
  const std::optional<Complex> one(Complex(1.0));
  constexpr double kSub = 1e-8;
  std::vector<Check> v{
      make_check("threshold wronskian: direct vs summed", one, c.lemma_sum_discrepancy,
                 identity_tol),
      make_check("L = complement of range W(u-,u+)", one, c.L_vs_range_complement, kSub),
      make_check("N = complement of range W(u+,u-)", one, c.N_vs_range_complement, kSub),
      make_check("gamma paths agree", one, c.gamma_paths, kSub),
      make_check("omega inverts gamma on N", one, c.omega_gamma_on_N, kSub),
      make_check("gamma maps N into L", one, c.gamma_into_L, kSub),
      make_check("positivity identity", one, c.positivity_defect, kSub),
      make_check("range T1+ = N", one, c.range_T_plus, kSub),
      make_check("ker T1+ = range W(u-,u+)", one, c.ker_T_plus, kSub),
      make_check("range T1- = L", one, c.range_T_minus, kSub),
      make_check("ker T1- = range W(u+,u-)", one, c.ker_T_minus, kSub),
      make_check("range (1 - R1+) = L", one, c.range_one_minus_R_plus, kSub),
      make_check("ker (1 - R1+) = ker T1+", one, c.ker_one_minus_R_plus, kSub),
      make_check("range (1 - R1-) = N", one, c.range_one_minus_R_minus, kSub),
      make_check("ker (1 - R1-) = ker T1-", one, c.ker_one_minus_R_minus, kSub),
      make_check("half-bound states bounded", one, c.boundedness_ratio, 10.0),
  };
  Check growth{"linear growth off N", one, c.growth_ok ? 0.0 : 1.0, 0.0, c.growth_ok, {}};
  v.push_back(growth);
  return v;
}

Json subspace_json(const numerics::SubspaceBasis& b) {
  Json j;
  j["dim"] = b.count();
  j["vectors"] = matrix_json(b.vectors);
  return j;
}

Json band_edge_json(const BandEdgeReport& r) {
  Json j;
  j["window"] = Json::array({r.window.lo, r.window.hi});
  j["dim_N"] = r.dim_N;
  j["W_minus_plus"] = matrix_json(r.W_minus_plus);
  j["singular_values"] =
      std::vector<double>(r.singular_values.data(), r.singular_values.data() + r.singular_values.size());
  j["rank_threshold"] = r.rank_threshold;
  j["rank_ambiguous"] = r.certificates.rank_ambiguous;
  j["N"] = subspace_json(r.N_basis);
  j["L"] = subspace_json(r.L_basis);
  j["Gamma"] = matrix_json(r.Gamma);
  j["Omega"] = matrix_json(r.Omega);
  j["omega_shift"] = r.omega_shift;
  j["gamma_quotient_site"] = r.gamma_quotient_site;
  j["A_block"] = matrix_json(r.A_block);
  j["D_block"] = matrix_json(r.D_block);
  j["T1_plus"] = matrix_json(r.T1_plus);
  j["T1_minus"] = matrix_json(r.T1_minus);
  j["R1_plus"] = matrix_json(r.R1_plus);
  j["R1_minus"] = matrix_json(r.R1_minus);
  j["positivity_min"] = r.certificates.positivity_min;
  return j;
}

void band_edge_csv(CsvWriter& csv, const BandEdgeReport& r) {
  const Complex one(1.0);
  csv.block(one, "W_minus_plus", r.W_minus_plus);
  csv.block(one, "N_basis", r.N_basis.vectors);
  csv.block(one, "L_basis", r.L_basis.vectors);
  csv.block(one, "Gamma", r.Gamma);
  csv.block(one, "Omega", r.Omega);
  csv.block(one, "T1_plus", r.T1_plus);
  csv.block(one, "T1_minus", r.T1_minus);
  csv.block(one, "R1_plus", r.R1_plus);
  csv.block(one, "R1_minus", r.R1_minus);
  csv.scalar(one, "dim_N", r.dim_N);
}

ApproachPath approach(const RunConfig& rc) {
  return rc.path == "radial" ? ApproachPath::radial : ApproachPath::circular;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// Appends the study to `doc` and `csv`; returns its certificates.
std::vector<Check> add_convergence(const ConvergenceStudy& st, Json& doc, CsvWriter& csv) {
  std::vector<Check> checks;
  Json rows = Json::array();
  for (const ConvergenceRow& row : st.rows) {
    Json j;
    j["eps"] = row.eps;
    j["z"] = complex_json(row.z);
    j["ok"] = row.ok;
    if (!row.ok) {
      j["error"] = row.error;
      checks.push_back(failed_check("convergence point eps=" + number(row.eps), row.z, row.error));
      rows.push_back(std::move(j));
      continue;
    }
    j["T_plus"] = matrix_json(row.T_plus);
    j["T_minus"] = matrix_json(row.T_minus);
    if (row.R_plus) j["R_plus"] = matrix_json(*row.R_plus);
    if (row.R_minus) j["R_minus"] = matrix_json(*row.R_minus);
    j["dev_T_plus"] = row.dev_T_plus;
    j["dev_T_minus"] = row.dev_T_minus;
    j["dev_R_plus"] = optional_json(row.dev_R_plus);
    j["dev_R_minus"] = optional_json(row.dev_R_minus);
    rows.push_back(std::move(j));

    csv.block(row.z, "T_plus", row.T_plus);
    csv.block(row.z, "T_minus", row.T_minus);
    if (row.R_plus) csv.block(row.z, "R_plus", *row.R_plus);
    if (row.R_minus) csv.block(row.z, "R_minus", *row.R_minus);
    csv.scalar(row.z, "eps", row.eps);
    csv.scalar(row.z, "dev_T_plus", row.dev_T_plus);
    csv.scalar(row.z, "dev_T_minus", row.dev_T_minus);
    if (row.dev_R_plus) csv.scalar(row.z, "dev_R_plus", *row.dev_R_plus);
    if (row.dev_R_minus) csv.scalar(row.z, "dev_R_minus", *row.dev_R_minus);
  }
  Json j;
  j["path"] = st.path == ApproachPath::radial ? "radial" : "circular";
  j["rows"] = std::move(rows);
  j["monotone_T_plus"] = st.monotone_T_plus;
  j["monotone_T_minus"] = st.monotone_T_minus;
  j["monotone_R_plus"] = st.monotone_R_plus ? Json(*st.monotone_R_plus) : Json(nullptr);
  j["monotone_R_minus"] = st.monotone_R_minus ? Json(*st.monotone_R_minus) : Json(nullptr);
  j["order_T_plus"] = optional_json(st.order_T_plus);
  j["order_R_plus"] = optional_json(st.order_R_plus);
  doc["convergence"] = std::move(j);

  auto flag = [&checks](const std::string& name, bool ok) {
    checks.push_back(Check{name, std::nullopt, ok ? 0.0 : 1.0, 0.0, ok, {}});
  };
  flag("T+ deviation decreases", st.monotone_T_plus);
  flag("T- deviation decreases", st.monotone_T_minus);
  if (st.monotone_R_plus) flag("R+ deviation decreases", *st.monotone_R_plus);
  if (st.monotone_R_minus) flag("R- deviation decreases", *st.monotone_R_minus);
  return checks;
}

int cmd_band_edge(const RunConfig& rc, bool study_requested, std::ostream& out,
                  std::ostream& err) {
  const Potential p = load(rc);
  const SolverConfig cfg = solver_config(rc);
  const BandEdgeReport r = band_edge_limits(p, cfg);
  if (r.certificates.rank_ambiguous) {
    err << "warning: a singular value of W(u-,u+) lies within a factor 10 of the rank "
           "threshold; dim N may depend on --rank-tol\n";
  }
  Json doc = header(rc, p);
  doc["band_edge"] = band_edge_json(r);
  CsvWriter csv;
  band_edge_csv(csv, r);
  std::vector<Check> checks = band_edge_checks(r, rc.identity_tol);
  if (study_requested) {
    const std::vector<double> eps =
        parse_eps_list(rc.z_spec.empty() ? std::string("1e-2,1e-3,1e-4") : rc.z_spec);
    const ConvergenceStudy st = convergence_study(p, r, approach(rc), eps, cfg, rc.workers);
    const std::vector<Check> more = add_convergence(st, doc, csv);
    checks.insert(checks.end(), more.begin(), more.end());
  }
  csv.checks(checks);
  const bool ok = report_checks(checks, err);
  finish(rc, std::move(doc), checks, ok, &csv, out);
  return ok ? kExitOk : kExitCertificate;
}

// oracle-compare -----------------------------------------------------------------------

struct OracleRow {
  Complex z;
  std::optional<oracle::Comparison> cmp;
  CMatrix T_plus, R_plus, oT_plus, oR_plus;
  FailureKind failure = FailureKind::none;
  std::string error;
};

std::vector<OracleRow> oracle_rows(const Potential& p, const std::vector<Complex>& zs,
                                   const SolverConfig& cfg, unsigned workers) {
  const Window w = default_window(p, cfg.pad);
  std::vector<OracleRow> rows(zs.size());
  parallel_for(zs.size(), workers, [&](std::size_t i) {
    OracleRow& row = rows[i];
    row.z = zs[i];
    try {
      const SpectralParameter z(zs[i]);
      const JostQuartet q = solve_jost_quartet(z, p, w, cfg.tol);
      const ScatteringMatrix s = assemble_scattering(coefficients_from_quartet(q, p, cfg));
      const oracle::MainPathResult main{s.T_plus, s.T_minus, s.R_plus, s.R_minus, &q.plus_z,
                                        &q.minus_z};
      row.cmp = oracle::compare(zs[i], p, main);
      const oracle::OracleScattering o = oracle::smatrix(zs[i], p);
      row.T_plus = s.T_plus;
      row.R_plus = s.R_plus;
      row.oT_plus = o.T_plus;
      row.oR_plus = o.R_plus;
    } catch (const InputError& e) {
      row.failure = FailureKind::input;
      row.error = e.what();
    } catch (const Error& e) {
      row.failure = FailureKind::numerical;
      row.error = e.what();
    }
  });
  return rows;
}

int cmd_oracle_compare(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Potential p = load(rc);
  const std::vector<Complex> zs = circle_grid(rc.z_spec);
  const std::vector<OracleRow> rows = oracle_rows(p, zs, solver_config(rc), rc.workers);
  Json doc = header(rc, p);
  doc["oracle_tol"] = rc.oracle_tol;
  Json points = Json::array();
  CsvWriter csv;
  std::vector<Check> checks;
  for (const OracleRow& row : rows) {
    if (row.failure == FailureKind::input) throw DomainError(row.error);
    Json pt;
    pt["z"] = complex_json(row.z);
    if (!row.cmp) {
      pt["error"] = row.error;
      checks.push_back(failed_check("oracle comparison", row.z, row.error));
      points.push_back(std::move(pt));
      continue;
    }
    pt["s_deviation"] = row.cmp->s_deviation;
    pt["jost_deviation"] = row.cmp->jost_deviation;
    pt["T_plus"] = matrix_json(row.T_plus);
    pt["T_plus_oracle"] = matrix_json(row.oT_plus);
    pt["R_plus"] = matrix_json(row.R_plus);
    pt["R_plus_oracle"] = matrix_json(row.oR_plus);
    points.push_back(std::move(pt));
    csv.block(row.z, "T_plus", row.T_plus);
    csv.block(row.z, "T_plus_oracle", row.oT_plus);
    csv.block(row.z, "R_plus", row.R_plus);
    csv.block(row.z, "R_plus_oracle", row.oR_plus);
    csv.scalar(row.z, "s_deviation", row.cmp->s_deviation);
    csv.scalar(row.z, "jost_deviation", row.cmp->jost_deviation);
    checks.push_back(make_check("oracle: S blocks", row.z, row.cmp->s_deviation, rc.oracle_tol));
    checks.push_back(
        make_check("oracle: Jost solutions", row.z, row.cmp->jost_deviation, rc.oracle_tol));
  }
  doc["points"] = std::move(points);
  const bool ok = report_checks(checks, err);
  finish(rc, std::move(doc), checks, ok, &csv, out);
  return ok ? kExitOk : kExitCertificate;
}

// verify -------------------------------------------------------------------------------

// Runs `body`, turning numerical failures into a failed check named `name`.
template <class F>
void guarded(std::vector<Check>& out, const std::string& name, std::optional<Complex> z, F&& body) {
  try {
    body();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    out.push_back(failed_check(name, z, e.what()));
  }
}

std::vector<Check> verify_point(Complex zc, const Potential& p, Window w, const SolverConfig& cfg,
                                const RunConfig& rc) {
  std::vector<Check> out;
  const SpectralParameter z(zc);
  std::optional<JostQuartet> q;
  guarded(out, "jost solutions", zc, [&] { q.emplace(solve_jost_quartet(z, p, w, cfg.tol)); });
  if (!q) return out;

  std::optional<ConnectionCoefficients> c, cc;
  guarded(out, "connection coefficients", zc, [&] {
    c = coefficients_from_quartet(*q, p, cfg);
    cc = coefficients_from_quartet(conjugated(*q), p, cfg);
  });
  if (c && cc) {
    out.push_back(make_check("wronskian constancy", zc, std::max(c->constancy_residual,
                                                                 cc->constancy_residual),
                             rc.identity_tol));
    out.push_back(make_check("jost decomposition", zc, c->decomposition_residual, rc.identity_tol));
    guarded(out, "coefficient identities", zc, [&] {
      for (const Residual& r : check_identities(*c, *cc)) {
        out.push_back(make_check(r.name, zc, r.value, rc.identity_tol));
      }
    });
    guarded(out, "unitarity", zc, [&] {
      const ScatteringMatrix s = assemble_scattering(*c);
      out.push_back(make_check("unitarity", zc, s.unitarity_defect, kUnitarityTol));
      if (rc.oracle) {
        const oracle::MainPathResult main{s.T_plus, s.T_minus, s.R_plus, s.R_minus, &q->plus_z,
                                          &q->minus_z};
        const oracle::Comparison cmp = oracle::compare(zc, p, main);
        out.push_back(make_check("oracle: S blocks", zc, cmp.s_deviation, rc.oracle_tol));
        out.push_back(make_check("oracle: Jost solutions", zc, cmp.jost_deviation, rc.oracle_tol));
      }
    });
  }
  guarded(out, "jost wronskians", zc, [&] {
    for (const Residual& r : wronskian_identity_residuals(*q, cfg.identity_tol)) {
      out.push_back(make_check(r.name, zc, r.value, rc.identity_tol));
    }
  });
  try {
    const double f = factorization_residual(z, p, w, cfg);
    out.push_back(make_check("wronskian factorization", zc, f, rc.identity_tol));
  } catch (const AssumptionViolation& e) {
    Check skip{"wronskian factorization", zc, 0.0, rc.identity_tol, true,
               std::string("skipped: ") + e.what()};
    out.push_back(skip);
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    out.push_back(failed_check("wronskian factorization", zc, e.what()));
  }
  return out;
}

int cmd_verify(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const Potential p = load(rc);
  const std::vector<Complex> zs = circle_grid(
      rc.z_spec.empty() ? "sym:8:0.05:" + number(std::numbers::pi - 0.05) : rc.z_spec);
  SolverConfig cfg = solver_config(rc);
  cfg.strict_constancy = false;
  const Window w = default_window(p, cfg.pad);

  std::vector<std::vector<Check>> per_z(zs.size());
  std::vector<std::string> input_errors(zs.size());
  parallel_for(zs.size(), rc.workers, [&](std::size_t i) {
    try {
      per_z[i] = verify_point(zs[i], p, w, cfg, rc);
    } catch (const InputError& e) {
      input_errors[i] = e.what();
    }
  });
  for (const std::string& e : input_errors) {
    if (!e.empty()) throw DomainError(e);
  }
  std::vector<Check> checks;
  guarded(checks, "threshold wronskian: direct vs summed", Complex(1.0), [&] {
    const ThresholdWronskian tw = threshold_wronskian(p, w, cfg.tol);
    checks.push_back(make_check("threshold wronskian: direct vs summed", Complex(1.0),
                                tw.discrepancy, rc.identity_tol));
  });
  for (const auto& v : per_z) checks.insert(checks.end(), v.begin(), v.end());

  Json doc = header(rc, p);
  doc["oracle"] = rc.oracle;
  CsvWriter csv;
  csv.checks(checks);
  const bool ok = report_checks(checks, err);
  finish(rc, std::move(doc), checks, ok, &csv, out);
  return ok ? kExitOk : kExitCertificate;
}

}  // namespace

int run_config(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    validate(rc);
    if (rc.command == "smatrix") return cmd_smatrix(rc, out, err);
    if (rc.command == "band-edge") return cmd_band_edge(rc, !rc.z_spec.empty(), out, err);
    if (rc.command == "converge") return cmd_band_edge(rc, true, out, err);
    if (rc.command == "oracle-compare") return cmd_oracle_compare(rc, out, err);
    if (rc.command == "verify") return cmd_verify(rc, out, err);
    throw ParseError("unknown command '" + rc.command + "'");
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "certificate failed: " << e.what() << "\n";
    return kExitCertificate;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering theory for discrete Schroedinger operators with matrix potentials",
               "latscat"};
  app.require_subcommand(1);
  RunConfig rc;
  std::string format = "json";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--potential", rc.potential_path, "Potential JSON file")->required();
    sub->add_option("--pad", rc.pad, "Window padding beyond the support");
    sub->add_option("--tol", rc.tol, "Solver tolerance");
    sub->add_option("--identity-tol", rc.identity_tol, "Tolerance for composed identities");
    sub->add_option("--rank-tol", rc.rank_tol, "Relative rank threshold at z = 1");
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", rc.out_path, "Output file (default: standard output)");
    sub->add_option("--workers", rc.workers, "Worker threads (0: hardware concurrency)");
    sub->add_flag("!--no-hermiticity-check", rc.hermiticity_check,
                  "Store the potential verbatim (exercises failure paths)");
  };
  CLI::App* sm = app.add_subcommand("smatrix", "Scattering matrix on a grid of the unit circle");
  CLI::App* be = app.add_subcommand("band-edge", "Band-edge limits T^1, R^1 and certificates");
  CLI::App* ve = app.add_subcommand("verify", "Run the identity and certificate suite");
  CLI::App* oc = app.add_subcommand("oracle-compare", "Compare with the transfer-matrix oracle");
  CLI::App* cv = app.add_subcommand("converge", "Convergence of S^z to the band-edge limits");
  for (CLI::App* sub : {sm, be, ve, oc, cv}) common(sub);
  for (CLI::App* sub : {sm, ve, oc}) {
    sub->add_option("--z", rc.z_spec, "arc:N:LO:HI, sym:N:LO:HI or a list of complex values");
  }
  for (CLI::App* sub : {be, cv}) {
    sub->add_option("--z", rc.z_spec, "eps:e1,e2,... approach parameters");
    sub->add_option("--path", rc.path, "Approach path")
        ->check(CLI::IsMember({"radial", "circular"}));
  }
  ve->add_flag("--oracle", rc.oracle, "Also compare with the transfer-matrix oracle");
  for (CLI::App* sub : {ve, oc}) {
    sub->add_option("--oracle-tol", rc.oracle_tol, "Tolerance for the oracle comparison");
  }

  std::vector<std::string> storage{"latscat"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  for (CLI::App* sub : app.get_subcommands()) rc.command = sub->get_name();
  rc.format = format == "csv" ? Format::csv : Format::json;
  return run_config(rc, out, err);
}

}  // namespace latscat::cli
