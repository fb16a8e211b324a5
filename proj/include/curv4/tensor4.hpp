#pragma once

#include <array>
#include <random>

#include "curv4/common.hpp"

namespace curv4 {

/// Rank-4 curvature tensor in an orthonormal frame of a 4-manifold.
///
/// Component convention: at(i,j,k,l) is antisymmetric in (i,j) and (k,l),
/// symmetric under pair interchange, and satisfies the first Bianchi
/// identity.  The index pairing is (i,k)(j,l): a space of constant sectional
/// curvature kappa has at(i,j,i,j) = kappa for i != j, and the Ricci tensor
/// is Ric(j,l) = sum_i at(i,j,i,l).  Norms are tensor norms (sum of squared
/// components over all 256 slots).
class CurvatureTensor {
 public:
  static constexpr double kSymmetryTol = 1e-12;

  CurvatureTensor() : c_{} {}

  static CurvatureTensor zero() { return CurvatureTensor{}; }

  /// Sectional curvature kappa in every 2-plane.
  static CurvatureTensor constant_curvature(double kappa);

  /// Validates the Riemann symmetries to relative tolerance `tol` (measured
  /// against the largest component), symmetrizes the residual away, and
  /// returns the cleaned tensor.  Throws NumericDomainError naming the first
  /// violated symmetry otherwise.
  static CurvatureTensor from_components(const std::array<double, 256>& c,
                                         double tol = kSymmetryTol);

  /// No validation; caller guarantees the symmetries hold exactly.
  static CurvatureTensor from_components_unchecked(const std::array<double, 256>& c) {
    CurvatureTensor t;
    t.c_ = c;
    return t;
  }

  /// Orthogonal projection onto the symmetry class, no validation.
  static CurvatureTensor project(const std::array<double, 256>& c);

  double at(int i, int j, int k, int l) const { return c_[idx(i, j, k, l)]; }
  double& ref(int i, int j, int k, int l) { return c_[idx(i, j, k, l)]; }
  const std::array<double, 256>& components() const { return c_; }

  double norm2() const;
  double norm() const;

  CurvatureTensor operator+(const CurvatureTensor& o) const;
  CurvatureTensor operator-(const CurvatureTensor& o) const;
  CurvatureTensor operator*(double s) const;

  /// Max symmetry violation relative to the largest component.
  static double symmetry_residual(const std::array<double, 256>& c, std::string* which = nullptr);

 private:
  static int idx(int i, int j, int k, int l) { return ((i * 4 + j) * 4 + k) * 4 + l; }
  std::array<double, 256> c_;
};

/// Irreducible pieces of a curvature tensor: scalar curvature, traceless
/// Ricci, and the self-dual / anti-self-dual Weyl operators on the 2-form
/// space (3x3 symmetric traceless blocks in the sigma+/- basis).
struct CurvatureDecomposition {
  double scalar = 0.0;
  Mat4 ric0 = Mat4::Zero();
  Mat3 wplus = Mat3::Zero();
  Mat3 wminus = Mat3::Zero();
};

struct NormReport {
  double rm2 = 0.0;      // |Rm|^2, tensor norm of the reassembled tensor
  double scalar2 = 0.0;  // R^2
  double ric02 = 0.0;    // |ric0|^2, tensor norm
  double wplus2 = 0.0;   // |W+|^2, tensor norm
  double wminus2 = 0.0;  // |W-|^2, tensor norm
  double identity_residual = 0.0;  // rm2 - (R^2/6 + 2|ric0|^2 + |W|^2)
};

/// Euler and signature form densities, tensor-norm convention.
struct CharacteristicDensities {
  double pchi = 0.0;
  double ptau = 0.0;
  double combined = 0.0;  // 32 pi^2 (pchi + 3 ptau)
  double energy_identity_residual = 0.0;  // |Rm|^2 - (R^2/3 + 4|W+|^2 - combined)
  // Alternative combination 32 pi^2 (pchi + ptau), reported so scans can flag
  // which variant actually satisfies the energy identity.
  double alt_combined = 0.0;
  double alt_energy_identity_residual = 0.0;
};

/// Standard Ricci decomposition.  The returned parts reassemble to the input.
CurvatureDecomposition decompose(const CurvatureTensor& rm);

/// Inverse of decompose: scalar part + traceless-Ricci part + Weyl part.
CurvatureTensor reassemble(const CurvatureDecomposition& dec);

NormReport norms_and_identities(const CurvatureDecomposition& dec);

CharacteristicDensities characteristic_densities(const CurvatureDecomposition& dec);

/// Pull back to the rotated frame e'_a = sum_i q(i,a) e_i.  q must be
/// orthogonal; orientation-reversing rotations swap W+ and W-.
CurvatureTensor rotate_frame(const CurvatureTensor& rm, const Mat4& q);

/// Cross inner products between the scalar, traceless-Ricci and Weyl parts
/// of the reassembled tensor (used by the orthogonality property tests).
std::array<double, 3> decomposition_cross_products(const CurvatureDecomposition& dec);

/// Uniformly random algebraic curvature tensor (components in [-1,1]
/// projected onto the symmetry class).  Deterministic in the generator state.
CurvatureTensor random_curvature_tensor(std::mt19937_64& rng);

/// Haar-ish random orthogonal 4x4 matrix via Gram-Schmidt on Gaussian
/// columns; det is forced to +1 (or -1 when orientation_preserving = false).
Mat4 random_rotation(std::mt19937_64& rng, bool orientation_preserving = true);

}  // namespace curv4
