#pragma once

// Planar moment inequality for unconditional bodies, the exploratory mu_2
// product test, the unconditionalization probe and the closing constant chain.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mahler/geometry2d.hpp"
#include "mahler/numeric.hpp"

namespace mahler {

using MomentVector = std::array<double, 2>;

/// Integral of x^{m1-1} y^{m2-1} over P cap {x, y >= 0}. Integer exponents are
/// integrated exactly on a fan of triangles from the origin; others through
/// the polar-coordinate form with tanh-sinh quadrature on each edge piece.
double quadrant_moment(const SymmetricPolygon2& p, const MomentVector& m);
/// The polar-coordinate route for any exponents (used as the second route).
double quadrant_moment_polar(const SymmetricPolygon2& p, const MomentVector& m);

struct SaintRaymondReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string statement;
};

/// lhs = moment(P) moment(P polar), rhs = prod Gamma(m_i)/m_i / Gamma(m1 + m2 + 1).
/// With this convention the square and the diamond give equality at m = (1, 1).
/// Throws NotUnconditional unless P is invariant under both axis reflections.
SaintRaymondReport saint_raymond_check(const SymmetricPolygon2& p, const MomentVector& m);

struct FradReport {
  double product = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // product - bound; negative values are reported, not raised
  std::string statement;
};

/// mu_2(P) mu_2(P polar) against 1/n, theta = 0. Exploratory.
FradReport frad_explore(const SymmetricPolygon2& p, int n);

struct ShadowReport {
  double mu2_polar_p = 0.0;
  double mu2_polar_u = 0.0;
  int sign = 0;  // sign of mu2_polar_p - mu2_polar_u, 0 within 1e-9 relative
  double mu2_p = 0.0;
  double mu2_u = 0.0;
  bool primal_holds = false;  // mu2_p >= mu2_u - 1e-9
};

/// Compares P with its unconditionalization U(P) under mu_2 at theta = 0.
ShadowReport shadow_probe(const SymmetricPolygon2& p, int n);

struct ChainReport {
  int n = 0;
  double c_quadrature = 0.0;
  double c_closed = 0.0;
  double chain_value = 0.0;      // vol(S^{n-1})^2 / ((n-1) C(n)^2)
  double printed_value = 0.0;    // 4 pi^{n-1} / ((n-1) Gamma((n-1)/2)^2)
  double conjecture_value = 0.0; // 4^n / Gamma(n+1)
  bool pass = false;
  std::string statement;
};

/// C(n) = integral of cos^{n-2} over [-pi/2, pi/2], by quadrature and by
/// sqrt(pi) Gamma((n-1)/2) / Gamma(n/2). Passes when the routes agree to
/// 1e-12, the chain value equals the printed value to 1e-10, and both exceed
/// the conjectured minimum.
ChainReport closing_chain(int n);

/// Unconditional random polygon: unconditionalization of a random body.
SymmetricPolygon2 random_unconditional_polygon(std::uint64_t seed);
/// Generic random symmetric polygon with inradius 1.
SymmetricPolygon2 random_polygon(std::uint64_t seed);

struct InequalityRow {
  std::uint64_t seed = 0;
  double product = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  int sign = 0;
  bool pass = true;
};

/// Batch over bodies seeded splitmix64(seed + i), run data-parallel.
std::vector<InequalityRow> saint_raymond_batch(int count, std::uint64_t seed, const MomentVector& m,
                                               Exec exec = Exec::Parallel);
std::vector<InequalityRow> frad_batch(int count, int n, std::uint64_t seed, Exec exec = Exec::Parallel);
/// `pass` is the primal fact; `sign` is the polar comparison.
std::vector<InequalityRow> shadow_batch(int count, int n, std::uint64_t seed, Exec exec = Exec::Parallel);

/// Header "seed,product,bound,margin,sign,pass" and one line per row.
std::string rows_to_csv(const std::vector<InequalityRow>& rows);

}  // namespace mahler
