#include "sumrules/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sumrules {
namespace {

int sign(long long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

// a_k, f_k, g_k of one family in Real, for -1 <= k <= k_max (a up to k_max + 2).
template <class Real>
class FamilyTable {
 public:
  FamilyTable(const CoefficientFamily& family, int k_max) : k_max_(k_max) {
    for (int k = -1; k <= k_max + 2; ++k) a_.push_back(to_real<Real>(family.a(k)));
    for (int k = 0; k <= k_max; ++k) {
      f_.push_back(to_real<Real>(family.f(k)));
      g_.push_back(to_real<Real>(family.g(k)));
    }
  }

  int k_max() const { return k_max_; }
  const Real& a(int k) const { return a_[static_cast<std::size_t>(k + 1)]; }
  const Real& f(int k) const { return f_[static_cast<std::size_t>(k)]; }
  const Real& g(int k) const { return g_[static_cast<std::size_t>(k)]; }

 private:
  int k_max_;
  std::vector<Real> a_, f_, g_;
};

template <class Real>
class MaxAbs {
 public:
  const Real& operator()(const Real& x) {
    using std::abs;
    if (abs(x) > value_) value_ = abs(x);
    return x;
  }
  Real value() const { return value_; }

 private:
  Real value_ = Real(1e-300);
};

template <class Real>
MasterDefect<Real> master_defect(const FamilyTable<Real>& table, int ell, const BesselSequence<Real>& at_z) {
  if (ell < 0) throw DomainError("ell must be >= 0");
  if (ell > table.k_max()) throw DomainError("family table too short");
  at_z.require_order(ell + 1);
  const Real& z = at_z.argument();
  const Real z2 = z * z;
  MaxAbs<Real> track;
  Real lhs = 0, rhs_sum = 0;
  for (int k = 0; k <= ell; ++k) {
    const Real jj = at_z[k] * at_z[k];
    lhs += track(table.f(k) * jj);
    rhs_sum += track(z2 * table.g(k) * jj);
  }
  const Real& jl = at_z[ell];
  const Real& jl1 = at_z[ell + 1];
  const Real t_l = track(z2 / Real(2 * ell + 3) * (table.a(ell + 1) + table.a(ell + 2)) * jl * jl);
  const Real t_l1 = track(z2 / Real(2 * ell + 1) * (table.a(ell + 1) + table.a(ell)) * jl1 * jl1);
  const Real t_x = track(2 * z * table.a(ell + 1) * jl * jl1);
  return {lhs - (rhs_sum - t_l - t_l1 + t_x), track.value()};
}

template <class Real>
Real expected_constant(const CoefficientFamily& family, const Real& z, const BesselSequence<Real>& at_2z) {
  switch (family.id) {
    case FamilyId::Ones:
    case FamilyId::AlternatingQuadratic:
      at_2z.require_order(1);
      return -4 * z * at_2z[1];
    case FamilyId::Linear:
      return Real(1);
    case FamilyId::Alternating:
      at_2z.require_order(0);
      return -2 * at_2z[0];
    case FamilyId::H1: {
      at_2z.require_order(1);
      const int p = family.p;
      const Rational k = Rational(-(2 * p + 3), 2 * (p + 1)) /
                         pochhammer(HalfInteger::from_twice(Integer(-2 * p - 3)), 2 * p + 4);
      return to_real<Real>(k) * (Real(p + 1) * at_2z[0] + z * at_2z[1]);
    }
    case FamilyId::H2:
    case FamilyId::H3:
      return Real(0);
  }
  return Real(0);
}

RelationResidual exact_result(IdentityId id, ResidualInputs inputs, Rational residual) {
  RelationResidual out;
  out.identity = id;
  out.inputs = std::move(inputs);
  out.passed = residual == 0;
  out.residual = std::move(residual);
  out.tolerance = 0.0;
  out.scale = 0.0;
  return out;
}

template <class Real>
RelationResidual float_result(IdentityId id, ResidualInputs inputs, const Real& residual, const Real& scale,
                              double tolerance) {
  using std::abs;
  RelationResidual out;
  out.identity = id;
  out.inputs = std::move(inputs);
  out.residual = to_double(residual);
  out.scale = to_double(scale);
  out.tolerance = tolerance;
  out.passed = abs(residual) <= Real(tolerance) * scale;
  return out;
}

Rational c_or_zero(int p, int m) { return (m < 0 || m > p) ? Rational(0) : c_coefficient(p, m); }

}  // namespace

// ---------------------------------------------------------------------------
// CoefficientFamily

Rational CoefficientFamily::a(int k) const {
  if (k < -1) throw DomainError("a_k is defined for k >= -1");
  switch (id) {
    case FamilyId::Ones: return Rational(1);
    case FamilyId::Linear: return Rational(k);
    case FamilyId::Alternating: return Rational(sign(k));
    case FamilyId::AlternatingQuadratic: return Rational(sign(k + 1) * (2 * k * k - 1));
    case FamilyId::H1:
      return Rational(-1) / (Rational(2 * (p + 1)) * pochhammer(half_plus(k - p - 1), 2 * p + 2));
    case FamilyId::H2:
      return pochhammer(k - p - 1, 2 * p + 3) / Rational(2 * (p + 1));
    case FamilyId::H3: {
      Rational sum = 0;
      for (int m = 0; m <= p; ++m) {
        sum += c_coefficient(p, m) / Rational((m + 1) * (m + 2)) * pochhammer(k - m - 1, 2 * m + 3);
      }
      return Rational(sign(k) * k, 2) * sum;
    }
  }
  return Rational(0);
}

Rational CoefficientFamily::f(int k) const { return Rational(2 * k + 1) * (a(k + 1) - a(k)); }

Rational CoefficientFamily::g(int k) const {
  return (a(k + 2) + a(k + 1)) / Rational(2 * k + 3) - (a(k) + a(k - 1)) / Rational(2 * k - 1);
}

std::optional<Rational> CoefficientFamily::expected_f(int k) const {
  switch (id) {
    case FamilyId::Ones: return Rational(0);
    case FamilyId::Linear: return Rational(2 * k + 1);
    case FamilyId::Alternating: return Rational(2 * sign(k + 1) * (2 * k + 1));
    case FamilyId::AlternatingQuadratic: return Rational(4 * sign(k) * (2 * k + 1)) * k * (k + 1);
    case FamilyId::H1: return Rational(2 * k + 1) / pochhammer(half_plus(k - p - 1), 2 * p + 3);
    case FamilyId::H2:
      return Rational(2 * p + 3, 2 * (p + 1)) * Rational(2 * k + 1) * pochhammer(k - p, 2 * p + 2);
    case FamilyId::H3: {
      Rational sum = 0;
      for (int m = 0; m <= p + 2; ++m) sum += c_coefficient(p + 2, m) * pochhammer(k - m + 1, 2 * m);
      return Rational(sign(k + 1) * (2 * k + 1)) * sum;
    }
  }
  return std::nullopt;
}

std::optional<Rational> CoefficientFamily::expected_g(int k) const {
  switch (id) {
    case FamilyId::Ones: return ratio(-8, (2 * k - 1) * (2 * k + 3));
    case FamilyId::Linear:
    case FamilyId::Alternating:
    case FamilyId::AlternatingQuadratic:
      return Rational(0);
    case FamilyId::H1:
      return Rational(2 * p + 3, 2 * (p + 1)) * Rational(2 * k + 1) / pochhammer(half_plus(k - p - 2), 2 * p + 5);
    case FamilyId::H2: return Rational(2 * k + 1) * pochhammer(k - p + 1, 2 * p);
    case FamilyId::H3: return Rational(sign(k) * (2 * k + 1)) * alternating_composite_weight(p, k);
  }
  return std::nullopt;
}

std::string CoefficientFamily::name() const {
  switch (id) {
    case FamilyId::Ones: return "Ones";
    case FamilyId::Linear: return "Linear";
    case FamilyId::Alternating: return "Alternating";
    case FamilyId::AlternatingQuadratic: return "AlternatingQuadratic";
    case FamilyId::H1: return "H1(" + std::to_string(p) + ")";
    case FamilyId::H2: return "H2(" + std::to_string(p) + ")";
    case FamilyId::H3: return "H3(" + std::to_string(p) + ")";
  }
  return "?";
}

std::vector<CoefficientFamily> all_families(int max_p) {
  std::vector<CoefficientFamily> out{{FamilyId::Ones, 0},
                                     {FamilyId::Linear, 0},
                                     {FamilyId::Alternating, 0},
                                     {FamilyId::AlternatingQuadratic, 0}};
  for (FamilyId id : {FamilyId::H1, FamilyId::H2, FamilyId::H3}) {
    for (int p = 0; p <= max_p; ++p) out.push_back({id, p});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

std::string_view to_string(IdentityId id) {
  switch (id) {
    case IdentityId::FourTerm: return "FourTerm";
    case IdentityId::ProductId: return "ProductId";
    case IdentityId::MasterRelation: return "MasterRelation";
    case IdentityId::MasterConstant: return "MasterConstant";
    case IdentityId::FamilyConsistency: return "FamilyConsistency";
    case IdentityId::CRecurrence: return "CRecurrence";
    case IdentityId::Orthogonality: return "Orthogonality";
    case IdentityId::Hypergeometric: return "Hypergeometric";
  }
  return "?";
}

std::string ResidualInputs::describe() const {
  std::ostringstream os;
  auto put = [&os](const char* key, const auto& value) {
    if (value) os << (os.tellp() > 0 ? " " : "") << key << "=" << *value;
  };
  put("family", family);
  put("k", k);
  put("ell", ell);
  put("p", p);
  put("q", q);
  put("m", m);
  put("n", n);
  put("z", z);
  return os.str();
}

std::string RelationResidual::residual_string() const {
  if (const auto* r = std::get_if<Rational>(&residual)) return to_string(*r);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", std::get<double>(residual));
  return buf;
}

int SuiteReport::total() const {
  int n = 0;
  for (const auto& [id, c] : counts) n += c.passed + c.failed;
  return n;
}

// ---------------------------------------------------------------------------
// Floating-point identities

template <class Real>
RelationResidual four_term_residual(int k, const BesselSequence<Real>& bessel, double tolerance) {
  if (k < 1) throw DomainError("four-term recurrence needs k >= 1");
  bessel.require_order(k + 1);
  const Real& z = bessel.argument();
  if (!(z > 0)) throw DomainError("z must be > 0");
  const Real z2 = z * z;
  const Real jm2 = bessel.at(k - 2), jm1 = bessel[k - 1], j0 = bessel[k], jp1 = bessel[k + 1];
  const Real lo(2 * k - 1), hi(2 * k + 1);
  MaxAbs<Real> track;
  const Real t1 = track(lo * jm1 * jm1);
  const Real t2 = track(hi * j0 * j0);
  const Real t3 = track(z2 / lo * jm2 * jm2);
  const Real t4 = track(z2 / lo * j0 * j0);
  const Real t5 = track(z2 / hi * jm1 * jm1);
  const Real t6 = track(z2 / hi * jp1 * jp1);
  const Real residual = (t1 - t2) - (t3 - t4) - (t5 - t6);
  ResidualInputs in;
  in.k = k;
  in.z = to_double(z);
  return float_result(IdentityId::FourTerm, std::move(in), residual, track.value(), tolerance);
}

template <class Real>
RelationResidual product_identity_residual(int ell, const BesselSequence<Real>& bessel, double tolerance) {
  if (ell < 0) throw DomainError("ell must be >= 0");
  bessel.require_order(ell + 1);
  const Real& z = bessel.argument();
  if (!(z > 0)) throw DomainError("z must be > 0");
  const Real jm1 = bessel.at(ell - 1), j0 = bessel[ell], jp1 = bessel[ell + 1];
  const Real odd(2 * ell + 1);
  MaxAbs<Real> track;
  const Real lhs = track(z * j0 * jp1);
  const Real t1 = track(z * z / odd * jp1 * jp1 / 2);
  const Real t2 = track(z * z / odd * jm1 * jm1 / 2);
  const Real t3 = track(odd * j0 * j0 / 2);
  ResidualInputs in;
  in.ell = ell;
  in.z = to_double(z);
  return float_result(IdentityId::ProductId, std::move(in), lhs - (t1 - t2 + t3), track.value(), tolerance);
}

template <class Real>
MasterDefect<Real> master_defect(const CoefficientFamily& family, int ell, const BesselSequence<Real>& at_z) {
  return master_defect(FamilyTable<Real>(family, ell), ell, at_z);
}

template <class Real>
Real expected_master_constant(const CoefficientFamily& family, const Real& z, const BesselSequence<Real>& at_2z) {
  return expected_constant(family, z, at_2z);
}

namespace {

template <class Real>
RelationResidual master_relation_from_table(const CoefficientFamily& family, const FamilyTable<Real>& table, int ell,
                                            const BesselSequence<Real>& at_z, double tolerance) {
  using std::max;
  const auto at_ell = master_defect(table, ell, at_z);
  const auto at_zero = master_defect(table, 0, at_z);
  ResidualInputs in;
  in.family = family.name();
  in.ell = ell;
  in.z = to_double(at_z.argument());
  return float_result(IdentityId::MasterRelation, std::move(in), at_ell.defect - at_zero.defect,
                      max(at_ell.scale, at_zero.scale), tolerance);
}

template <class Real>
RelationResidual master_constant_from_table(const CoefficientFamily& family, const FamilyTable<Real>& table,
                                            const BesselSequence<Real>& at_z, const BesselSequence<Real>& at_2z,
                                            double tolerance) {
  using std::abs;
  using std::max;
  const auto at_zero = master_defect(table, 0, at_z);
  const Real expected = expected_constant(family, at_z.argument(), at_2z);
  ResidualInputs in;
  in.family = family.name();
  in.z = to_double(at_z.argument());
  return float_result(IdentityId::MasterConstant, std::move(in), at_zero.defect - expected,
                      max(at_zero.scale, abs(expected)), tolerance);
}

}  // namespace

template <class Real>
RelationResidual master_relation_residual(const CoefficientFamily& family, int ell, const BesselSequence<Real>& at_z,
                                          double tolerance) {
  return master_relation_from_table(family, FamilyTable<Real>(family, ell), ell, at_z, tolerance);
}

template <class Real>
RelationResidual master_constant_residual(const CoefficientFamily& family, const BesselSequence<Real>& at_z,
                                          const BesselSequence<Real>& at_2z, double tolerance) {
  return master_constant_from_table(family, FamilyTable<Real>(family, 0), at_z, at_2z, tolerance);
}

// ---------------------------------------------------------------------------
// Exact identities

RelationResidual coefficient_family_consistency(const CoefficientFamily& family, int k_max) {
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  ResidualInputs in;
  in.family = family.name();
  std::optional<CoefficientFamily> shifted;
  if (family.id == FamilyId::H3) shifted = CoefficientFamily{FamilyId::H3, family.p + 2};
  for (int k = 0; k <= k_max; ++k) {
    const Rational f = family.f(k);
    const Rational g = family.g(k);
    Rational diff = 0;
    if (auto ef = family.expected_f(k); ef && f != *ef) diff = f - *ef;
    if (diff == 0) {
      if (auto eg = family.expected_g(k); eg && g != *eg) diff = g - *eg;
    }
    if (diff == 0 && shifted) diff = f + shifted->g(k);
    if (diff != 0) {
      in.k = k;
      return exact_result(IdentityId::FamilyConsistency, std::move(in), diff);
    }
  }
  in.k = k_max;
  return exact_result(IdentityId::FamilyConsistency, std::move(in), Rational(0));
}

RelationResidual c_recurrence_residual(int p, int m) {
  if (p < 0 || m < 2 || m > p + 2) throw DomainError("c recurrence needs p >= 0 and 2 <= m <= p + 2");
  const Rational rhs = c_or_zero(p, m - 2) / Rational(m * (m - 1)) + c_or_zero(p, m - 1) * Rational(2 * m + 1, 2 * m);
  ResidualInputs in;
  in.p = p;
  in.m = m;
  return exact_result(IdentityId::CRecurrence, std::move(in), c_coefficient(p + 2, m) - rhs);
}

RelationResidual orthogonality_residual(int q, int m) {
  if (m < 0 || m > q) throw DomainError("orthogonality needs 0 <= m <= q");
  Rational sum = 0;
  for (int p = m; p <= q; ++p) sum += f_weight(q, p) * c_coefficient(p, m);
  ResidualInputs in;
  in.q = q;
  in.m = m;
  return exact_result(IdentityId::Orthogonality, std::move(in), sum - Rational(m == q ? 1 : 0));
}

RelationResidual hypergeometric_residual(int q, int m, int n) {
  ResidualInputs in;
  in.q = q;
  in.m = m;
  in.n = n;
  return exact_result(IdentityId::Hypergeometric, std::move(in),
                      hypergeometric_finite_sum(q, m, n) - hypergeometric_closed_form(q, m, n));
}

// ---------------------------------------------------------------------------
// Suite

template <class Real>
SuiteReport run_verification_suite(const SuiteConfig& config) {
  if (config.max_p < 0) throw DomainError("max-p must be >= 0");
  if (config.max_ell < 1) throw DomainError("max-ell must be >= 1");
  if (config.z_list.empty()) throw DomainError("z list is empty");
  for (double z : config.z_list) {
    if (!std::isfinite(z) || z <= 0) throw DomainError("z must be finite and > 0");
  }

  SuiteReport report;
  auto record = [&report](RelationResidual r) {
    auto& c = report.counts[r.identity];
    if (r.passed) {
      ++c.passed;
    } else {
      ++c.failed;
      report.failures.push_back(std::move(r));
    }
  };

  const auto families = all_families(config.max_p);
  std::vector<FamilyTable<Real>> tables;
  tables.reserve(families.size());
  for (const auto& fam : families) tables.emplace_back(fam, config.max_ell);

  for (double zd : config.z_list) {
    const Real z(zd);
    const auto at_z = spherical_j_sequence<Real>(config.max_ell + 1, z);
    const auto at_2z = spherical_j_sequence<Real>(2, Real(2) * z);
    for (int k = 1; k <= config.max_ell; ++k) record(four_term_residual(k, at_z));
    for (int ell = 1; ell <= config.max_ell; ++ell) record(product_identity_residual(ell, at_z));
    for (std::size_t i = 0; i < families.size(); ++i) {
      record(master_constant_from_table(families[i], tables[i], at_z, at_2z, 1e-10));
      for (int ell = 1; ell <= config.max_ell; ++ell) {
        record(master_relation_from_table(families[i], tables[i], ell, at_z, 1e-10));
      }
    }
  }

  for (const auto& fam : families) record(coefficient_family_consistency(fam, config.max_ell));
  for (int p = 0; p <= config.exact_max_c_p; ++p) {
    for (int m = 2; m <= p + 2; ++m) record(c_recurrence_residual(p, m));
  }
  for (int q = 0; q <= config.exact_max_q; ++q) {
    for (int m = 0; m <= q; ++m) record(orthogonality_residual(q, m));
  }
  for (int q = 0; q <= config.exact_max_hyper_q; ++q) {
    for (int m = 1; 2 * m <= q; ++m) {
      for (int n = 0; 2 * m + n <= q; ++n) record(hypergeometric_residual(q, m, n));
    }
  }
  return report;
}

#define SUMRULES_INSTANTIATE(Real)                                                                                 \
  template RelationResidual four_term_residual(int, const BesselSequence<Real>&, double);                          \
  template RelationResidual product_identity_residual(int, const BesselSequence<Real>&, double);                   \
  template struct MasterDefect<Real>;                                                                              \
  template MasterDefect<Real> master_defect(const CoefficientFamily&, int, const BesselSequence<Real>&);           \
  template Real expected_master_constant(const CoefficientFamily&, const Real&, const BesselSequence<Real>&);      \
  template RelationResidual master_relation_residual(const CoefficientFamily&, int, const BesselSequence<Real>&,   \
                                                     double);                                                      \
  template RelationResidual master_constant_residual(const CoefficientFamily&, const BesselSequence<Real>&,        \
                                                     const BesselSequence<Real>&, double);                         \
  template SuiteReport run_verification_suite<Real>(const SuiteConfig&);

SUMRULES_INSTANTIATE(double)
SUMRULES_INSTANTIATE(ExtendedReal)

}  // namespace sumrules
