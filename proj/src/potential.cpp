#include "latscat/potential.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "latscat/errors.hpp"

namespace latscat {

using json = nlohmann::json;

Potential::Potential(Eigen::Index L) : L_(L) {
  if (L < 1) throw DimensionError("potential dimension must be positive");
}

Potential::Potential(Eigen::Index L, std::map<int, CMatrix> sites, PotentialOptions opts)
    : Potential(L) {
  for (auto& [n, v] : sites) {
    if (v.rows() != L || v.cols() != L) {
      throw DimensionError("site " + std::to_string(n) + " has shape " +
                           std::to_string(v.rows()) + "x" + std::to_string(v.cols()) +
                           ", expected " + std::to_string(L) + "x" + std::to_string(L));
    }
    if (!numerics::all_finite(v)) {
      throw DimensionError("site " + std::to_string(n) + " has non-finite entries");
    }
    const double defect = (v - v.adjoint()).cwiseAbs().maxCoeff();
    if (opts.enforce_hermitian) {
      if (defect > kHermiticityTol) throw HermiticityError(n, defect);
      v = (0.5 * (v + v.adjoint())).eval();
    } else if (defect > 0.0) {
      hermitian_ = false;
    }
    if (v.cwiseAbs().maxCoeff() == 0.0) continue;
    norms_[n] = numerics::spectral_norm(v);
    sites_.emplace(n, std::move(v));
  }
}

Potential Potential::scalar(const std::map<int, double>& values) {
  std::map<int, CMatrix> sites;
  for (const auto& [n, v] : values) sites.emplace(n, CMatrix::Constant(1, 1, Complex(v, 0.0)));
  return Potential(1, std::move(sites));
}

CMatrix Potential::at(int n) const {
  auto it = sites_.find(n);
  return it == sites_.end() ? CMatrix::Zero(L_, L_) : it->second;
}

double Potential::norm_at(int n) const {
  auto it = norms_.find(n);
  return it == norms_.end() ? 0.0 : it->second;
}

Window Potential::support() const {
  if (sites_.empty()) return Window{};
  return Window{sites_.begin()->first, sites_.rbegin()->first};
}

double Potential::first_moment() const {
  double s = 0.0;
  for (const auto& [n, norm] : norms_) s += std::abs(n) * norm;
  return s;
}

double Potential::mass() const {
  double s = 0.0;
  for (const auto& [n, norm] : norms_) s += norm;
  return s;
}

bool operator==(const Potential& a, const Potential& b) {
  if (a.L_ != b.L_ || a.sites_.size() != b.sites_.size()) return false;
  auto ib = b.sites_.begin();
  for (const auto& [n, v] : a.sites_) {
    if (n != ib->first || v != ib->second) return false;
    ++ib;
  }
  return true;
}

double first_moment_tail(const Potential& p, int N) {
  if (N < 0) throw DomainError("first_moment_tail: N must be non-negative");
  double s = 0.0;
  for (const auto& [n, v] : p.sites()) {
    if (std::abs(n) > N) s += std::abs(n) * p.norm_at(n);
  }
  return s;
}

namespace {

Potential rebuild(const Potential& p, std::map<int, CMatrix> sites) {
  // Sites of a valid potential are already exactly Hermitian, so re-validation is a no-op
  // for them; non-Hermitian (bypassed) inputs keep bypassing.
  return Potential(p.dim(), std::move(sites), PotentialOptions{p.hermitian()});
}

}  // namespace

Potential translate_origin(const Potential& p, int shift) {
  std::map<int, CMatrix> out;
  for (const auto& [n, v] : p.sites()) out.emplace(n - shift, v);
  return rebuild(p, std::move(out));
}

Potential reflect(const Potential& p) {
  std::map<int, CMatrix> out;
  for (const auto& [n, v] : p.sites()) out.emplace(-n, v);
  return rebuild(p, std::move(out));
}

namespace {

Eigen::MatrixXd read_real_block(const json& j, const char* key, int n, Eigen::Index L) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(L, L);
  if (!j.contains(key)) {
    if (std::string(key) == "im") return m;
    throw ParseError("site " + std::to_string(n) + ": missing \"" + key + "\"");
  }
  const json& rows = j.at(key);
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != L) {
    throw DimensionError("site " + std::to_string(n) + ": \"" + key + "\" must have " +
                         std::to_string(L) + " rows");
  }
  for (Eigen::Index r = 0; r < L; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != L) {
      throw DimensionError("site " + std::to_string(n) + ": \"" + key + "\" row " +
                           std::to_string(r) + " must have " + std::to_string(L) + " entries");
    }
    for (Eigen::Index c = 0; c < L; ++c) {
      const json& x = row[static_cast<std::size_t>(c)];
      if (!x.is_number()) {
        throw ParseError("site " + std::to_string(n) + ": non-numeric entry in \"" + key + "\"");
      }
      m(r, c) = x.get<double>();
    }
  }
  return m;
}

}  // namespace

Potential load_potential(std::istream& in, PotentialOptions opts) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed potential document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("potential document must be a JSON object");
  if (!doc.contains("L") || !doc["L"].is_number_integer()) {
    throw ParseError("potential document needs an integer \"L\"");
  }
  const auto L = doc["L"].get<long long>();
  if (L < 1) throw DimensionError("\"L\" must be positive");
  if (!doc.contains("sites") || !doc["sites"].is_array()) {
    throw ParseError("potential document needs a \"sites\" array");
  }
  std::map<int, CMatrix> sites;
  for (const json& s : doc["sites"]) {
    if (!s.is_object() || !s.contains("n") || !s["n"].is_number_integer()) {
      throw ParseError("every site needs an integer \"n\"");
    }
    const int n = s["n"].get<int>();
    if (sites.count(n) != 0) throw ParseError("duplicate site n = " + std::to_string(n));
    const Eigen::MatrixXd re = read_real_block(s, "re", n, L);
    const Eigen::MatrixXd im = read_real_block(s, "im", n, L);
    CMatrix v(L, L);
    v.real() = re;
    v.imag() = im;
    sites.emplace(n, std::move(v));
  }
  return Potential(static_cast<Eigen::Index>(L), std::move(sites), opts);
}

Potential load_potential_string(const std::string& text, PotentialOptions opts) {
  std::istringstream in(text);
  return load_potential(in, opts);
}

Potential load_potential_file(const std::string& path, PotentialOptions opts) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open potential file '" + path + "'");
  return load_potential(in, opts);
}

std::string serialize_potential(const Potential& p) {
  json doc;
  doc["L"] = p.dim();
  doc["sites"] = json::array();
  for (const auto& [n, v] : p.sites()) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      json rr = json::array(), ri = json::array();
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        rr.push_back(v(r, c).real());
        ri.push_back(v(r, c).imag());
      }
      re.push_back(rr);
      im.push_back(ri);
    }
    doc["sites"].push_back({{"n", n}, {"re", re}, {"im", im}});
  }
  return doc.dump(2);
}

}  // namespace latscat
