#include "crlhls/plh_basis.hpp"

#include <cmath>
#include <string>

#include "crlhls/constants.hpp"
#include "crlhls/errors.hpp"
#include "crlhls/ring_transform.hpp"

namespace crlhls {

namespace {

double log_monomial_norm(int a, int b) {
  return 0.5 * (std::log(kVolume) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                std::lgamma(a + b + 2.0));
}

const char* kind_name(PlhKind k) {
  switch (k) {
    case PlhKind::constant: return "constant";
    case PlhKind::holomorphic: return "holomorphic";
    case PlhKind::antiholomorphic: return "antiholomorphic";
  }
  return "?";
}

PlhKind kind_from_name(const std::string& s) {
  if (s == "constant") return PlhKind::constant;
  if (s == "holomorphic") return PlhKind::holomorphic;
  if (s == "antiholomorphic") return PlhKind::antiholomorphic;
  throw InvalidArgument("unknown basis kind '" + s + "'");
}

}  // namespace

void PlhBasisIndex::validate() const {
  if (a < 0 || b < 0) throw InvalidArgument("PlhBasisIndex: negative exponent");
  if ((kind == PlhKind::constant) != (a == 0 && b == 0)) {
    throw InvalidArgument("PlhBasisIndex: constant kind iff a = b = 0");
  }
}

double monomial_norm(int a, int b) { return std::exp(log_monomial_norm(a, b)); }

PlhCoefficients::PlhCoefficients(int max_degree)
    : max_degree_(max_degree), h_(holomorphic_count(max_degree)) {
  if (max_degree < 0) throw InvalidArgument("PlhCoefficients: negative degree");
}

cplx PlhCoefficients::coeff(const PlhBasisIndex& idx) const {
  idx.validate();
  if (idx.kind == PlhKind::constant) return c0_;
  if (idx.degree() > max_degree_) return 0.0;
  const cplx h = holo(idx.a, idx.b);
  return idx.kind == PlhKind::holomorphic ? h : std::conj(h);
}

void PlhCoefficients::set_coeff(const PlhBasisIndex& idx, cplx value) {
  idx.validate();
  if (idx.kind == PlhKind::constant) {
    if (std::abs(value.imag()) > 1e-12) {
      throw InvalidArgument("PlhCoefficients: constant coefficient must be real");
    }
    c0_ = value.real();
    return;
  }
  if (idx.degree() > max_degree_) throw InvalidArgument("PlhCoefficients: degree above J");
  holo(idx.a, idx.b) = idx.kind == PlhKind::holomorphic ? value : std::conj(value);
}

double PlhCoefficients::dot(const PlhCoefficients& other) const {
  double s = c0_ * other.c0_;
  const std::size_t n = std::min(h_.size(), other.h_.size());
  for (std::size_t k = 0; k < n; ++k) s += 2.0 * (h_[k] * std::conj(other.h_[k])).real();
  return s;
}

double PlhCoefficients::mean() const { return c0_ / std::sqrt(kVolume); }

Eigen::VectorXd PlhCoefficients::to_real() const {
  Eigen::VectorXd x(real_dimension(max_degree_));
  x[0] = c0_;
  for (std::size_t k = 0; k < h_.size(); ++k) {
    x[1 + 2 * k] = std::sqrt(2.0) * h_[k].real();
    x[2 + 2 * k] = -std::sqrt(2.0) * h_[k].imag();
  }
  return x;
}

PlhCoefficients PlhCoefficients::from_real(int max_degree, const Eigen::VectorXd& x) {
  if (x.size() != real_dimension(max_degree)) {
    throw InvalidArgument("from_real: vector length does not match degree");
  }
  PlhCoefficients u(max_degree);
  u.c0_ = x[0];
  for (std::size_t k = 0; k < u.h_.size(); ++k) {
    u.h_[k] = cplx(x[1 + 2 * k], -x[2 + 2 * k]) / std::sqrt(2.0);
  }
  return u;
}

PlhCoefficients PlhCoefficients::resized(int max_degree) const {
  PlhCoefficients u(max_degree);
  u.c0_ = c0_;
  const std::size_t n = std::min(h_.size(), u.h_.size());
  for (std::size_t k = 0; k < n; ++k) u.h_[k] = h_[k];
  return u;
}

PlhCoefficients& PlhCoefficients::operator+=(const PlhCoefficients& o) {
  if (o.max_degree_ > max_degree_) *this = resized(o.max_degree_);
  c0_ += o.c0_;
  for (std::size_t k = 0; k < o.h_.size(); ++k) h_[k] += o.h_[k];
  return *this;
}

PlhCoefficients& PlhCoefficients::operator-=(const PlhCoefficients& o) {
  if (o.max_degree_ > max_degree_) *this = resized(o.max_degree_);
  c0_ -= o.c0_;
  for (std::size_t k = 0; k < o.h_.size(); ++k) h_[k] -= o.h_[k];
  return *this;
}

PlhCoefficients& PlhCoefficients::operator*=(double s) {
  c0_ *= s;
  for (auto& h : h_) h *= s;
  return *this;
}

PlhCoefficients operator+(PlhCoefficients a, const PlhCoefficients& b) { return a += b; }
PlhCoefficients operator-(PlhCoefficients a, const PlhCoefficients& b) { return a -= b; }
PlhCoefficients operator*(double s, PlhCoefficients a) { return a *= s; }

nlohmann::json PlhCoefficients::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  arr.push_back({{"kind", "constant"}, {"a", 0}, {"b", 0}, {"re", c0_}, {"im", 0.0}});
  for (int j = 1; j <= max_degree_; ++j) {
    for (int a = 0; a <= j; ++a) {
      const cplx h = holo(a, j - a);
      arr.push_back({{"kind", kind_name(PlhKind::holomorphic)}, {"a", a}, {"b", j - a},
                     {"re", h.real()}, {"im", h.imag()}});
      arr.push_back({{"kind", kind_name(PlhKind::antiholomorphic)}, {"a", a}, {"b", j - a},
                     {"re", h.real()}, {"im", -h.imag()}});
    }
  }
  return arr;
}

PlhCoefficients PlhCoefficients::from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidArgument("from_json: expected an array of records");
  int J = 0;
  for (const auto& r : j) J = std::max(J, r.at("a").get<int>() + r.at("b").get<int>());
  PlhCoefficients u(J);
  for (const auto& r : j) {
    const PlhBasisIndex idx{kind_from_name(r.at("kind").get<std::string>()), r.at("a").get<int>(),
                            r.at("b").get<int>()};
    const cplx v(r.at("re").get<double>(), r.at("im").get<double>());
    if (idx.kind == PlhKind::antiholomorphic) {
      idx.validate();
      if (std::abs(u.holo(idx.a, idx.b) - std::conj(v)) > 1e-12 * (1.0 + std::abs(v)) &&
          u.holo(idx.a, idx.b) != cplx(0.0)) {
        throw InvalidArgument("from_json: antiholomorphic record breaks reality");
      }
    }
    u.set_coeff(idx, v);
  }
  return u;
}

cplx basis_eval(const PlhBasisIndex& idx, const SpherePoint& p) {
  idx.validate();
  if (idx.kind == PlhKind::constant) return 1.0 / std::sqrt(kVolume);
  const cplx m = ipow(p.z1, idx.a) * ipow(p.z2, idx.b) *
                 std::exp(-log_monomial_norm(idx.a, idx.b));
  return idx.kind == PlhKind::holomorphic ? m : std::conj(m);
}

double evaluate(const PlhCoefficients& u, const SpherePoint& p) {
  const int J = u.max_degree();
  std::vector<cplx> p1(J + 1), p2(J + 1);
  p1[0] = p2[0] = 1.0;
  for (int k = 1; k <= J; ++k) {
    p1[k] = p1[k - 1] * p.z1;
    p2[k] = p2[k - 1] * p.z2;
  }
  double s = 0.0;
  for (int j = 1; j <= J; ++j) {
    for (int a = 0; a <= j; ++a) {
      const int b = j - a;
      s += (u.holo(a, b) * p1[a] * p2[b]).real() * std::exp(-log_monomial_norm(a, b));
    }
  }
  return u.constant() / std::sqrt(kVolume) + 2.0 * s;
}

PlhCoefficients project_tau(const QuadratureGrid& grid, std::span<const double> samples, int J) {
  if (J < 0) throw InvalidArgument("project_tau: negative degree");
  if (grid.exactness_degree() < 2 * J) {
    throw UnderResolvedError("project_tau: grid exactness " + std::to_string(grid.exactness_degree()) +
                             " below 2J = " + std::to_string(2 * J));
  }
  if (samples.size() != grid.size()) throw InvalidArgument("project_tau: sample count mismatch");
  return kernels::project(grid, samples, J);
}

std::vector<double> synthesize(const PlhCoefficients& u, const QuadratureGrid& grid) {
  return kernels::synthesize(grid, u);
}

double zonal_kernel(int j, const SpherePoint& p, const SpherePoint& q) {
  if (j < 1) throw InvalidArgument("zonal_kernel: j must be >= 1");
  return 2.0 * ((j + 1) / kVolume * ipow(hermitian(p, q), j)).real();
}

PlhCoefficients log_jacobian_coefficients(cplx w1, cplx w2, double scale, int J) {
  if (!(scale > 0.0)) throw InvalidArgument("log_jacobian_coefficients: scale must be positive");
  if (!(std::norm(w1) + std::norm(w2) < 1.0)) {
    throw InvalidArgument("log_jacobian_coefficients: |w| must be < 1");
  }
  // ln(C / |1 - x|^4) = ln C + 4 Re sum_j x^j / j with x = w1 z1 + w2 z2.
  PlhCoefficients u(J);
  u.set_constant(std::log(scale) * std::sqrt(kVolume));
  for (int j = 1; j <= J; ++j) {
    for (int a = 0; a <= j; ++a) {
      const int b = j - a;
      const double log_binom = std::lgamma(j + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0);
      const cplx wpow = ipow(w1, a) * ipow(w2, b);
      u.holo(a, b) = 2.0 / j * wpow * std::exp(log_binom + log_monomial_norm(a, b));
    }
  }
  return u;
}

}  // namespace crlhls
