#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sumrules/exact_coefficients.hpp"
#include "sumrules/special_functions.hpp"

namespace sumrules {

/// Coefficient sequences a_k fed to the master relation
///
///   sum_{k<=l} f_k j_k^2 = z^2 sum_{k<=l} g_k j_k^2
///                          - z^2 (a_{l+1} + a_{l+2}) / (2l+3) j_l^2
///                          - z^2 (a_{l+1} + a_l) / (2l+1) j_{l+1}^2
///                          + 2 z a_{l+1} j_l j_{l+1} + F(z),
///
/// with f_k = (2k+1)(a_{k+1} - a_k) and
/// g_k = (a_{k+2} + a_{k+1})/(2k+3) - (a_k + a_{k-1})/(2k-1).
enum class FamilyId { Ones, Linear, Alternating, AlternatingQuadratic, H1, H2, H3 };

struct CoefficientFamily {
  FamilyId id = FamilyId::Ones;
  int p = 0;  // level, for the hierarchy families

  /// a_k for any k >= -1.
  Rational a(int k) const;
  Rational f(int k) const;
  Rational g(int k) const;

  /// The f_k the family is built to produce, in closed form.
  std::optional<Rational> expected_f(int k) const;
  /// The g_k the family is built to produce, in closed form.
  std::optional<Rational> expected_g(int k) const;

  std::string name() const;
};

/// The four lowest-order families plus H1, H2, H3 for p = 0..max_p.
std::vector<CoefficientFamily> all_families(int max_p);

enum class IdentityId {
  FourTerm,           // recurrence for squares of four consecutive orders
  ProductId,          // z j_l j_{l+1} in terms of squares
  MasterRelation,     // defect of the master relation is independent of l
  MasterConstant,     // that defect equals the known F(z) of the family
  FamilyConsistency,  // generator-derived f_k, g_k match their closed forms
  CRecurrence,        // c_m^(p+2) in terms of c^(p)
  Orthogonality,      // sum_p f_p^(q) c_m^(p) = delta_{mq}
  Hypergeometric,     // terminating 3F2 sum equals its product form
};

std::string_view to_string(IdentityId id);

struct ResidualInputs {
  std::optional<int> k;
  std::optional<int> ell;
  std::optional<int> p;
  std::optional<int> q;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<double> z;
  std::optional<std::string> family;

  std::string describe() const;
};

struct RelationResidual {
  IdentityId identity = IdentityId::FourTerm;
  ResidualInputs inputs;
  /// double for floating-point identities, Rational for exact ones.
  std::variant<double, Rational> residual;
  /// Relative tolerance; 0 for exact identities.
  double tolerance = 0.0;
  /// max of the participating term magnitudes and 1e-300.
  double scale = 0.0;
  bool passed = false;

  std::string residual_string() const;
};

template <class Real>
RelationResidual four_term_residual(int k, const BesselSequence<Real>& bessel, double tolerance = 1e-12);

template <class Real>
RelationResidual product_identity_residual(int ell, const BesselSequence<Real>& bessel, double tolerance = 1e-12);

/// Defect D(l) = lhs - (rhs without F) of the master relation, and the
/// largest term that went into it.
template <class Real>
struct MasterDefect {
  Real defect;
  Real scale;
};

template <class Real>
MasterDefect<Real> master_defect(const CoefficientFamily& family, int ell, const BesselSequence<Real>& at_z);

/// F(z) of a family in closed form (for the hierarchy families it follows
/// from the level-raising step; it vanishes for H2 and H3).
template <class Real>
Real expected_master_constant(const CoefficientFamily& family, const Real& z, const BesselSequence<Real>& at_2z);

/// Passes when |D(ell) - D(0)| <= tolerance * scale.
template <class Real>
RelationResidual master_relation_residual(const CoefficientFamily& family, int ell, const BesselSequence<Real>& at_z,
                                          double tolerance = 1e-10);

/// Passes when |D(0) - F(z)| <= tolerance * scale.
template <class Real>
RelationResidual master_constant_residual(const CoefficientFamily& family, const BesselSequence<Real>& at_z,
                                          const BesselSequence<Real>& at_2z, double tolerance = 1e-10);

/// Exact: f_k, g_k from the generator against expected_f/expected_g for
/// k <= k_max, and f^(p) = -g^(p+2) for the H3 families. Residual is the
/// first nonzero difference (or 0).
RelationResidual coefficient_family_consistency(const CoefficientFamily& family, int k_max);

RelationResidual c_recurrence_residual(int p, int m);
RelationResidual orthogonality_residual(int q, int m);
RelationResidual hypergeometric_residual(int q, int m, int n);

struct SuiteConfig {
  int max_p = 6;
  int max_ell = 60;
  std::vector<double> z_list{0.5, 1.0, 5.0, 20.0, 50.0};
  int exact_max_q = 12;      // orthogonality
  int exact_max_c_p = 10;    // c recurrence
  int exact_max_hyper_q = 10;
};

struct IdentityCounts {
  int passed = 0;
  int failed = 0;
};

struct SuiteReport {
  std::map<IdentityId, IdentityCounts> counts;
  std::vector<RelationResidual> failures;

  bool all_passed() const { return failures.empty(); }
  int total() const;
};

/// Throws DomainError for an invalid config (negative bounds, z <= 0).
template <class Real>
SuiteReport run_verification_suite(const SuiteConfig& config);

}  // namespace sumrules
