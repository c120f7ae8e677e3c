#pragma once

// Catalog of manifolds, (1,1) fields and test functions with closed-form facts.
//
// Case ids are "<entry>/<field>", for example "sphere_unit/A=1.5I".  Field and
// scalar names are part of the public interface (CLI, suite configs).

#include <optional>
#include <string>
#include <vector>

#include "reilly/geometry.hpp"

namespace reilly {

enum class BoundaryCondition { closed, dirichlet, neumann };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& s);

struct FieldFacts {
  std::optional<double> lambda1_closed;
  std::optional<double> lambda1_dirichlet;
  std::optional<double> lambda1_neumann;
  std::string provenance;
};

struct FieldEntry {
  EndomorphismField field;
  FieldFacts facts;
};

struct CatalogEntry {
  std::string id;
  ChartManifold manifold;
  std::vector<FieldEntry> fields;
  std::vector<ScalarField> scalars;
  std::string provenance;  // diameter and curvature derivations

  const FieldEntry& field(const std::string& name) const;
  const ScalarField& scalar(const std::string& name) const;
};

/// Registered entry ids, in catalog order.
std::vector<std::string> catalog_ids();

/// Builds an entry.  `id` is either an entry id (all fields) or a case id
/// "<entry>/<field>" (that field only).  With `verify`, every declared structure
/// flag is re-checked at 200 deterministic sample points and a mismatch throws
/// HypothesisViolation.  Unknown ids throw UnknownName.
CatalogEntry instantiate(const std::string& id, bool verify = true);

struct CaseRef {
  std::string entry;
  std::string field;
};
CaseRef split_case_id(const std::string& case_id);

/// All "<entry>/<field>" ids.
std::vector<std::string> catalog_case_ids();

/// Known first positive eigenvalue of -L_A for `bc` (closed manifolds ignore bc).
std::optional<double> analytic_lambda1(const CatalogEntry& entry, const std::string& field,
                                       std::optional<BoundaryCondition> bc = std::nullopt);

/// One tab-separated line per case: id, dim, flags, known lambda_1.
std::vector<std::string> zoo_listing();

// Building blocks, exposed for tests.
Chart sphere_chart(double radius);
Chart sphere_chart_rotated(double radius);
ChartFunction ambient_scalar(const Chart& c, std::function<Jet3(const Jet3&, const Jet3&, const Jet3&)> f);
/// A = g^{-1} J^T S J + s I, with S a symmetric 3x3 function of the ambient point and
/// s a scalar function of it (J = embedding Jacobian).
EndomorphismField ambient_form_field(const Chart& c, std::string name,
                                     std::function<std::array<Jet3, 9>(const Jet3&, const Jet3&, const Jet3&)> S,
                                     std::function<Jet3(const Jet3&, const Jet3&, const Jet3&)> s,
                                     StructureFlags declared);
EndomorphismField constant_field(int dim, std::string name, const Mat& A, StructureFlags declared);

}  // namespace reilly
