#pragma once

#include <vector>

#include "dioph/forms.hpp"
#include "dioph/linalg.hpp"

namespace dioph {

enum class SubspaceRole { VanishingIdeal, OrthoComplement };

/// A subspace of degree-D forms on P^t with a linearly independent rational
/// basis.
struct SectionSubspace {
  int t = 1;
  int D = 0;
  SubspaceRole role = SubspaceRole::VanishingIdeal;
  std::vector<RatForm> basis;

  size_t dim() const { return basis.size(); }
  size_t ambient_dim() const { return MonomialBasis::count(t, D); }
};

/// Forms of degree D vanishing at every exact point.
SectionSubspace vanishing_subspace(const std::vector<ProjectivePoint>& points, int t, int D);
/// Degree-D part of the ideal generated by the given forms.
SectionSubspace vanishing_subspace(const std::vector<IntForm>& generators, int t, int D);
SectionSubspace zero_subspace(int t, int D);

/// L2-orthogonal complement of a subspace.
SectionSubspace orthogonal_complement(const SectionSubspace& s);

/// Precomputed orthogonal projection onto the complement of an ideal part.
class Projector {
 public:
  explicit Projector(const SectionSubspace& ideal);
  RatForm project(const RatForm& f) const;
  RatForm project(const IntForm& f) const { return project(to_rational(f)); }
  const SectionSubspace& ideal() const { return ideal_; }

 private:
  SectionSubspace ideal_;
  RatMatrix gram_inverse_;
};

/// f_Y^perp: the projection of f orthogonal to the ideal part.
RatForm orthogonal_projection(const RatForm& f, const SectionSubspace& ideal);

/// The lattice q(Gamma(P^t, O(D))_Z) inside the complement of the ideal,
/// with integer representatives and an exact Gram matrix.
struct ProjectedLattice {
  int t = 1;
  int D = 0;
  std::vector<IntForm> representatives;
  std::vector<RatForm> projections;
  RatMatrix gram;

  size_t rank() const { return representatives.size(); }
};

ProjectedLattice projected_lattice(const SectionSubspace& ideal);

}  // namespace dioph
