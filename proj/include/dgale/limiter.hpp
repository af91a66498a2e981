#pragma once

#include "dgale/residual.hpp"

#include <vector>

namespace dgale {

struct LimiterConfig {
  double m_tvb = 0.0;          // TVB constant; deviations below m_tvb h^2 pass untouched
  bool limit_species = true;   // also limit the volume fraction
  bool enabled = true;

  void validate() const {
    if (!(m_tvb >= 0.0)) throw ConfigError("m_tvb must be >= 0");
  }
};

/// Elements whose primitive face-mean deviations are altered by the
/// TVB-modified minmod against neighbor average differences, plus elements
/// whose traces are not admissible.
std::vector<int> detect_troubled(const SolutionField& field, const MovingMesh& mesh,
                                 std::span<const Vec2> x, const Discretization& disc,
                                 const MixtureEOS& eos, const LimiterConfig& config,
                                 const BoundaryData& bc = {});

/// Replaces the primitive variables of each troubled element by minmod-limited
/// linear polynomials and rebuilds the conserved moments. Cell averages of the
/// conserved components and of the volume fraction are kept; an element whose
/// rebuilt polynomial is still inadmissible keeps only its averages.
void limit(SolutionField& field, const std::vector<int>& troubled, const MovingMesh& mesh,
           std::span<const Vec2> x, const Discretization& disc, const MixtureEOS& eos,
           const LimiterConfig& config, const BoundaryData& bc = {});

/// True when density and P+B are positive at every volume and face quadrature
/// point of element `e`.
bool element_admissible(const SolutionField& field, int e, const Discretization& disc,
                        const MixtureEOS& eos);

/// TVB-modified minmod: a if |a| <= bound, otherwise minmod(a, b...).
double tvb_minmod(double a, std::initializer_list<double> others, double bound);

}  // namespace dgale
